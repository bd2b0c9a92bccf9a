"""Gaussian radial filter bank.

The high-pass ``H(xi) = 1 - exp(-|xi|^2 / 2)`` is dilated per scale,
``H_j(xi) = H(2**(j-1) xi)``, and paired with the low-pass
``L_j = sqrt(1 - H_j**2)``.  Band-pass filters are obtained by cascading:
``band[j] = H_j * L_1 * ... * L_{j-1}`` and ``residual = L_1 * ... * L_J``,
which telescopes to ``sum_j band[j]**2 + residual**2 == 1`` at every bin.
"""
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import InvalidScaleError, ResolutionError
from .spectral import frequency_lattice


def _radius_sq(freq):
    xi1, xi2 = freq
    return np.asarray(xi1, dtype=np.float64) ** 2 + np.asarray(xi2, dtype=np.float64) ** 2


def gaussian_highpass(freq):
    """``H(xi) = 1 - exp(-|xi|^2/2)`` on a lattice ``(xi1, xi2)``."""
    return -np.expm1(-0.5 * _radius_sq(freq))


def _check_scale(j, J):
    if not isinstance(j, (int, np.integer)) or isinstance(j, bool):
        raise InvalidScaleError(f"scale index must be an integer, got {j!r}")
    if J is not None and not 1 <= j <= J:
        raise InvalidScaleError(f"scale index {j} outside 1..{J}")
    if j < 1:
        raise InvalidScaleError(f"scale index {j} must be >= 1")


def highpass_at_scale(freq, j, J=None):
    """``H_j(xi) = H(2**(j-1) xi)``.

    ``J``, when given, bounds the admissible scale indices.
    """
    _check_scale(j, J)
    return -np.expm1(-0.5 * 4.0 ** (j - 1) * _radius_sq(freq))


def lowpass_sq_at_scale(freq, j, J=None):
    # 1 - H_j^2 = e (2 - e) with e = exp(-s); avoids cancellation near H_j = 1.
    _check_scale(j, J)
    e = np.exp(-0.5 * 4.0 ** (j - 1) * _radius_sq(freq))
    return e * (2.0 - e)


def lowpass_at_scale(freq, j, J=None):
    """``L_j = sqrt(1 - H_j**2)``; equals one at DC."""
    return np.sqrt(lowpass_sq_at_scale(freq, j, J))


@dataclass(frozen=True, eq=False)
class MonogenicFilterBank:
    """Radial multipliers on one ``grid_size x grid_size`` lattice.

    Attributes
    ----------
    J : int
        Number of scales.
    band : tuple of ndarray
        ``band[j - 1]`` is the band-pass multiplier of scale ``j``.
    residual : ndarray
        Low-pass left over after the ``J`` bands.
    averaging : ndarray
        ``L_1`` on this lattice; the output-averaging filter of every layer.
    grid_size : int
    cascade : bool
        False when the bank holds plain ``H_j`` per scale (comparison mode;
        the partition of unity then does not hold).
    """

    J: int
    band: tuple
    residual: np.ndarray
    averaging: np.ndarray
    grid_size: int
    cascade: bool = True

    def partition_error(self):
        """Max over bins of ``|sum_j band[j]**2 + residual**2 - 1|``."""
        total = self.residual ** 2
        for b in self.band:
            total = total + b ** 2
        return float(np.abs(total - 1.0).max())


def _frozen(a):
    a = np.ascontiguousarray(a, dtype=np.float64)
    a.setflags(write=False)
    return a


@lru_cache(maxsize=32)
def _build_bank(grid_size, J, cascade):
    freq = frequency_lattice((grid_size, grid_size))
    bands = []
    carry = np.ones((grid_size, grid_size))
    for j in range(1, J + 1):
        h = highpass_at_scale(freq, j)
        bands.append(_frozen(h * carry if cascade else h))
        carry = carry * lowpass_at_scale(freq, j)
    averaging = lowpass_at_scale(freq, 1)
    return MonogenicFilterBank(
        J=J,
        band=tuple(bands),
        residual=_frozen(carry),
        averaging=_frozen(averaging),
        grid_size=grid_size,
        cascade=cascade,
    )


def build_bank(grid_size, J, cascade=True):
    """Build (or fetch from cache) the filter bank for a square grid.

    Parameters
    ----------
    grid_size : int
        Even side length, at least ``2**(J+1)``.
    J : int
        Number of scales, ``J >= 1``.
    cascade : bool
        Cascaded band-passes (default).  ``False`` uses plain ``H_j``.

    Raises
    ------
    InvalidScaleError
        If ``J < 1``.
    ResolutionError
        If the grid is odd or smaller than ``2**(J+1)``.
    """
    if not isinstance(J, (int, np.integer)) or isinstance(J, bool) or J < 1:
        raise InvalidScaleError(f"J must be a positive integer, got {J!r}")
    grid_size = int(grid_size)
    if grid_size % 2 or grid_size < 2 ** (J + 1):
        raise ResolutionError(
            f"grid size {grid_size} must be even and >= {2 ** (J + 1)} for J={J}"
        )
    return _build_bank(grid_size, int(J), bool(cascade))
