"""Exception types raised across the package.

Every error derives from :class:`MWSNError`, itself a ``ValueError``, so
callers that only care about bad input can catch the builtin.
"""


class MWSNError(ValueError):
    """Base class for all package errors."""


class InvalidInputError(MWSNError):
    pass


class SymmetryViolationError(MWSNError):
    """Spectrum is not conjugate-symmetric, so its inverse is not real."""


class InvalidScaleError(MWSNError):
    pass


class ResolutionError(MWSNError):
    """Grid too small to host the requested number of scales."""


class ConfigError(MWSNError):
    pass


class StateError(MWSNError):
    pass


class InvalidKError(MWSNError):
    pass


class DegenerateLabelsError(MWSNError):
    pass


class StratificationError(MWSNError):
    pass


class IngestionError(MWSNError):
    def __init__(self, path, reason):
        self.path = str(path)
        super().__init__(f"{self.path}: {reason}")


class CropError(MWSNError):
    pass


class FormatError(MWSNError):
    """Malformed binary tensor or manifest file."""
