"""Riesz transform and monogenic polar decomposition.

The monogenic signal ``g + i R1 g + j R2 g`` is stored as the real triple
``(iso, r1, r2)``; no operation here needs quaternion products.  ``r1`` is
the vertical component (frequency along axis 0), ``r2`` the horizontal one.
"""
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import InvalidInputError
from .spectral import as_image, forward_dft, frequency_lattice, inverse_dft, spectral_scale


@lru_cache(maxsize=32)
def _riesz_cached(height, width):
    xi1, xi2 = frequency_lattice((height, width))
    radius = np.hypot(xi1, xi2)
    safe = np.where(radius > 0.0, radius, 1.0)
    m1 = np.where(radius > 0.0, -1j * xi1 / safe, 0.0)
    m2 = np.where(radius > 0.0, -1j * xi2 / safe, 0.0)
    # An odd multiplier cannot be conjugate-symmetric on a Nyquist line
    # (the line maps onto itself under negation), so its component along
    # that axis is zeroed there; this is the Hermitian part of -i xi_l/|xi|.
    if height % 2 == 0:
        m1[height // 2, :] = 0.0
    if width % 2 == 0:
        m2[:, width // 2] = 0.0
    m1.setflags(write=False)
    m2.setflags(write=False)
    return m1, m2


def riesz_multipliers(shape):
    """Fourier multipliers ``(m1, m2)`` of the Riesz transform on ``shape``.

    ``m_l(xi) = -i xi_l / |xi|`` with ``m_l(0) = 0``; on even grids the
    component along a Nyquist axis is set to zero so that real inputs map to
    real outputs.
    """
    height, width = (int(s) for s in shape)
    if height < 2 or width < 2:
        raise InvalidInputError(f"shape must be at least 2x2, got {shape}")
    return _riesz_cached(height, width)


@dataclass(frozen=True, eq=False)
class MonogenicTriple:
    iso: np.ndarray
    r1: np.ndarray
    r2: np.ndarray

    def __post_init__(self):
        if not (self.iso.shape == self.r1.shape == self.r2.shape):
            raise InvalidInputError("monogenic components must share a shape")


@dataclass(frozen=True, eq=False)
class MonogenicPolar:
    """Amplitude ``A >= 0``, phase in ``[0, pi]``, orientation in ``(-pi, pi]``."""

    amplitude: np.ndarray
    phase: np.ndarray
    orientation: np.ndarray


def riesz_transform(img):
    """Return the monogenic triple ``(img, R1 img, R2 img)``."""
    img = as_image(img)
    spec = forward_dft(img).values
    m1, m2 = riesz_multipliers(img.shape)
    ref = spectral_scale(spec)
    return MonogenicTriple(
        iso=img,
        r1=inverse_dft(spec * m1, reference=ref),
        r2=inverse_dft(spec * m2, reference=ref),
    )


def monogenic_decompose(t):
    """Split a monogenic triple into amplitude, phase and orientation.

    Degenerate points follow fixed conventions: ``phase = 0`` where the
    amplitude vanishes, ``orientation = 0`` where ``(r1, r2) = 0``.
    """
    iso, r1, r2 = t.iso, t.r1, t.r2
    riesz_norm = np.hypot(r1, r2)
    amplitude = np.hypot(iso, riesz_norm)
    safe = np.where(amplitude > 0.0, amplitude, 1.0)
    phase = np.where(amplitude > 0.0, np.arccos(np.clip(iso / safe, -1.0, 1.0)), 0.0)
    orientation = np.where(riesz_norm > 0.0, np.arctan2(r2, r1), 0.0)
    # atan2 returns -pi for (-x, -0.0); fold onto the half-open range.
    orientation = np.where(orientation <= -np.pi, np.pi, orientation)
    return MonogenicPolar(amplitude=amplitude, phase=phase, orientation=orientation)
