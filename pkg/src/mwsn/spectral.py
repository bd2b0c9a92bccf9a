"""Periodic 2D DFT engine.

Images are plain 2D ``float64`` arrays indexed ``[x1, x2]`` (row, column).
Spectra carry their radian frequency lattice: bin ``k`` along an axis of
length ``N`` sits at ``xi = 2*pi*k/N`` with ``k`` in ``[-N//2, ceil(N/2))``,
so the Nyquist bin of an even axis is at ``-pi``.  Every convolution in the
package is circular and goes through :func:`apply_multiplier`.
"""
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import InvalidInputError, SymmetryViolationError

#: Relative imaginary residue tolerated by :func:`inverse_dft`.
IMAG_TOL = 1e-10


def as_image(img, name="image"):
    """Validate and return ``img`` as a finite 2D float64 array."""
    arr = np.asarray(img)
    if arr.ndim != 2:
        raise InvalidInputError(f"{name} must be 2D, got shape {arr.shape}")
    if arr.shape[0] < 2 or arr.shape[1] < 2:
        raise InvalidInputError(f"{name} dimensions must be >= 2, got {arr.shape}")
    if np.iscomplexobj(arr):
        raise InvalidInputError(f"{name} must be real-valued")
    arr = arr.astype(np.float64, copy=False)
    if not np.all(np.isfinite(arr)):
        raise InvalidInputError(f"{name} contains non-finite values")
    return arr


@lru_cache(maxsize=64)
def _axis_freq(n):
    xi = 2.0 * np.pi * np.fft.fftfreq(n)
    xi.setflags(write=False)
    return xi


@lru_cache(maxsize=64)
def _lattice(height, width):
    xi1, xi2 = np.meshgrid(_axis_freq(height), _axis_freq(width), indexing="ij")
    xi1.setflags(write=False)
    xi2.setflags(write=False)
    return xi1, xi2


def frequency_lattice(shape):
    """Radian frequencies ``(xi1, xi2)`` of every DFT bin, in FFT order.

    The returned arrays are cached and read-only.
    """
    height, width = (int(s) for s in shape)
    if height < 2 or width < 2:
        raise InvalidInputError(f"lattice dimensions must be >= 2, got {shape}")
    return _lattice(height, width)


def nyquist_mask(shape, axis):
    """Boolean mask of bins sitting on the Nyquist frequency along ``axis``.

    Always empty for odd lengths.
    """
    n = shape[axis]
    mask = np.zeros(shape, dtype=bool)
    if n % 2 == 0:
        idx = [slice(None), slice(None)]
        idx[axis] = n // 2
        mask[tuple(idx)] = True
    return mask


@dataclass(frozen=True)
class SpectralGrid:
    """Complex DFT raster; ``freq`` gives the matching radian lattice."""

    values: np.ndarray

    @property
    def shape(self):
        return self.values.shape

    @property
    def freq(self):
        return frequency_lattice(self.values.shape)


def forward_dft(img):
    """Unnormalized 2D DFT; the DC bin is the sum of all samples."""
    return SpectralGrid(np.fft.fft2(as_image(img)))


def _values(spec):
    return spec.values if isinstance(spec, SpectralGrid) else np.asarray(spec)


def spectral_scale(values):
    """Amplitude scale of a spectrum: ``max |X| / (H W)``.

    Bounds the spatial amplitude of any unit-bounded filtering of it, so it
    is the natural yardstick for rounding residue after filtering.
    """
    values = _values(values)
    return float(np.abs(values).max()) / values.size if values.size else 0.0


def inverse_dft(spec, tol=IMAG_TOL, reference=None):
    """Inverse DFT returning a real image.

    The imaginary residue is judged relative to the larger of the result's
    magnitude and ``reference`` (typically :func:`spectral_scale` of the
    spectrum before a multiplier was applied).

    Raises
    ------
    SymmetryViolationError
        If the imaginary part of the result exceeds ``tol`` relative to the
        result's magnitude, i.e. the spectrum was not conjugate-symmetric.
    """
    values = _values(spec)
    if values.ndim != 2:
        raise InvalidInputError(f"spectrum must be 2D, got shape {values.shape}")
    out = np.fft.ifft2(values)
    imag = np.abs(out.imag).max()
    if imag > 0.0:
        scale = max(float(np.abs(out).max()), reference or 0.0)
        if imag > tol * scale:
            raise SymmetryViolationError(
                f"imaginary residue {imag:.3e} exceeds {tol:g} relative to {scale:.3e}"
            )
    return np.ascontiguousarray(out.real)


def apply_multiplier(spec, multiplier):
    """Bin-wise product of a spectrum with a (real or complex) multiplier field.

    Equivalent to circular convolution in space.
    """
    values = _values(spec)
    m = np.asarray(multiplier)
    if m.shape != values.shape:
        raise InvalidInputError(
            f"multiplier shape {m.shape} does not match spectrum shape {values.shape}"
        )
    return SpectralGrid(values * m)


def filter_image(img, multiplier):
    """Circularly convolve ``img`` with the kernel whose DFT is ``multiplier``."""
    spec = forward_dft(img)
    return inverse_dft(apply_multiplier(spec, multiplier), reference=spectral_scale(spec))
