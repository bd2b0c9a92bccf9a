"""Two-layer monogenic wavelet scattering.

Each propagation step filters with a band-pass ``band[j]`` (component
``l = 0``) or with ``band[j]`` times a Riesz multiplier (``l = 1, 2``),
takes the modulus and keeps every ``r_u``-th sample.  Outputs are the
propagated maps averaged by ``L_1`` and decimated by ``r_s``::

    s0            = S(f)
    s1[l, j]      = S(U[l, j] f)
    s2[l1, j1, l2, j2] = S(U[l2, j2] U[l1, j1] f)

Layer-2 filters are rebuilt on the decimated grid, so their shape is fixed
in radians per sample at every layer.
"""
from dataclasses import dataclass, field
from functools import lru_cache
from typing import NamedTuple, Optional

import numpy as np

from .errors import ConfigError, InvalidInputError, StateError
from .filterbank import build_bank, lowpass_at_scale
from .monogenic import riesz_multipliers
from .spectral import as_image, forward_dft, frequency_lattice, inverse_dft, spectral_scale

COMPONENTS = (0, 1, 2)
COMPONENT_NAMES = {0: "iso", 1: "R1", 2: "R2"}


class PathIndex(NamedTuple):
    """Scattering path.  Unused slots are ``None``."""

    layer: int
    l1: Optional[int] = None
    j1: Optional[int] = None
    l2: Optional[int] = None
    j2: Optional[int] = None

    def label(self):
        if self.layer == 0:
            return "s0"
        if self.layer == 1:
            return f"s1_l{self.l1}_j{self.j1}"
        return f"s2_l{self.l1}{self.l2}_j{self.j1}{self.j2}"


@dataclass(frozen=True)
class ScatteringConfig:
    J: int = 4
    r_u: int = 2
    r_s: int = 2
    layers: int = 2
    cascade: bool = True
    keep_u: bool = False

    def __post_init__(self):
        for name in ("J", "r_u", "r_s"):
            v = getattr(self, name)
            if not isinstance(v, (int, np.integer)) or isinstance(v, bool) or v < 1:
                raise ConfigError(f"{name} must be a positive integer, got {v!r}")
        if self.layers not in (0, 1, 2):
            raise ConfigError(f"layers must be 0, 1 or 2, got {self.layers!r}")

    @property
    def divisor(self):
        return self.r_u ** self.layers * self.r_s

    def check_size(self, n):
        """Raise ``ConfigError`` unless an ``n x n`` input is admissible."""
        if n % self.divisor:
            raise ConfigError(
                f"input size {n} is not divisible by r_u**{self.layers} * r_s = {self.divisor}"
            )
        # every grid a bank is built on must host J scales
        for depth in range(self.layers):
            size = n // self.r_u ** depth
            if size % 2 or size < 2 ** (self.J + 1):
                raise ConfigError(
                    f"grid {size}x{size} at layer {depth + 1} too small for J={self.J}"
                )

    def output_shapes(self, n):
        """Raster side lengths ``(s0, s1, s2)`` for an ``n x n`` input."""
        return (
            n // self.r_s,
            n // self.r_u // self.r_s,
            n // self.r_u ** 2 // self.r_s,
        )


@dataclass
class ScatteringOutput:
    s0: np.ndarray
    s1: dict = field(default_factory=dict)
    s2: dict = field(default_factory=dict)
    u1: Optional[dict] = None
    u2: Optional[dict] = None
    J: int = 0


def layer1_paths(J):
    """Layer-1 paths, component-major: rows of the layer-1 mosaic."""
    return [PathIndex(1, l1=l, j1=j) for l in COMPONENTS for j in range(1, J + 1)]


def layer2_paths(J):
    """Layer-2 paths in block-grid row-major order.

    Row ``i`` (0-based) carries ``l1 = i % 3``, ``j1 = i // 3 + 1`` and
    column ``k`` carries ``l2 = k % 3``, ``j2 = k // 3 + 1``.
    """
    return [
        PathIndex(2, l1=i % 3, j1=i // 3 + 1, l2=k % 3, j2=k // 3 + 1)
        for i in range(3 * J)
        for k in range(3 * J)
    ]


def _multiplier(bank, j, l):
    if not 1 <= j <= bank.J:
        raise ConfigError(f"scale {j} outside 1..{bank.J}")
    band = bank.band[j - 1]
    if l == 0:
        return band
    if l not in (1, 2):
        raise ConfigError(f"component must be 0, 1 or 2, got {l!r}")
    return band * riesz_multipliers(band.shape)[l - 1]


def _decimate(a, r):
    return np.ascontiguousarray(a[::r, ::r])


def _check_rate(shape, r, name):
    if not isinstance(r, (int, np.integer)) or isinstance(r, bool) or r < 1:
        raise ConfigError(f"{name} must be a positive integer, got {r!r}")
    if shape[0] % r or shape[1] % r:
        raise ConfigError(f"shape {shape} not divisible by {name}={r}")


def _averaging(shape, bank):
    if bank is None:
        return averaging_filter(shape[0]) if shape[0] == shape[1] else \
            lowpass_at_scale(frequency_lattice(shape), 1)
    if shape != (bank.grid_size, bank.grid_size):
        raise ConfigError(f"bank built for {bank.grid_size}x{bank.grid_size}, input is {shape}")
    return bank.averaging


def averaging_filter(n):
    """``L_1`` on an ``n x n`` lattice (cached, read-only).

    Unlike a full bank this exists for any grid size, so it also serves the
    small deepest-layer grids.
    """
    return _averaging_cached(int(n))


@lru_cache(maxsize=32)
def _averaging_cached(n):
    a = lowpass_at_scale(frequency_lattice((n, n)), 1)
    a.setflags(write=False)
    return a


def _propagate_spec(spec, bank, j, l, r_u, ref=None):
    ref = spectral_scale(spec) if ref is None else ref
    return _decimate(np.abs(inverse_dft(spec * _multiplier(bank, j, l), reference=ref)), r_u)


def _smooth_spec(spec, averaging, r_s):
    return _decimate(inverse_dft(spec * averaging, reference=spectral_scale(spec)), r_s)


def propagate(img, bank, j, l, r_u):
    """One scattering step: filter, modulus, keep every ``r_u``-th sample."""
    img = as_image(img)
    if img.shape != (bank.grid_size, bank.grid_size):
        raise ConfigError(f"bank built for {bank.grid_size}x{bank.grid_size}, input is {img.shape}")
    _check_rate(img.shape, r_u, "r_u")
    return _propagate_spec(forward_dft(img).values, bank, j, l, r_u)


def smooth_output(u, bank=None, r_s=2):
    """Average with ``L_1`` on ``u``'s own grid, then decimate by ``r_s``.

    ``bank`` may be omitted; the averaging filter is then built for ``u``.
    """
    u = as_image(u)
    averaging = _averaging(u.shape, bank)
    _check_rate(u.shape, r_s, "r_s")
    return _smooth_spec(forward_dft(u).values, averaging, r_s)


def scatter(img, cfg=None):
    """Full scattering transform of a square image.

    Parameters
    ----------
    img : array_like
        Square real image whose side is divisible by ``r_u**layers * r_s``.
    cfg : ScatteringConfig, optional

    Returns
    -------
    ScatteringOutput
    """
    cfg = cfg or ScatteringConfig()
    img = as_image(img)
    n = img.shape[0]
    if img.shape[1] != n:
        raise InvalidInputError(f"image must be square, got {img.shape}")
    cfg.check_size(n)

    bank0 = build_bank(n, cfg.J, cfg.cascade)
    spec0 = forward_dft(img).values
    out = ScatteringOutput(s0=_smooth_spec(spec0, bank0.averaging, cfg.r_s), J=cfg.J)
    if cfg.layers == 0:
        return out
    if cfg.keep_u:
        out.u1 = {}
        out.u2 = {} if cfg.layers == 2 else None

    n1 = n // cfg.r_u
    bank1 = build_bank(n1, cfg.J, cfg.cascade) if cfg.layers == 2 else None
    avg1 = averaging_filter(n1)
    avg2 = averaging_filter(n1 // cfg.r_u) if bank1 is not None else None
    ref0 = spectral_scale(spec0)
    for p1 in layer1_paths(cfg.J):
        u1 = _propagate_spec(spec0, bank0, p1.j1, p1.l1, cfg.r_u, ref0)
        spec1 = forward_dft(u1).values
        ref1 = spectral_scale(spec1)
        out.s1[p1] = _smooth_spec(spec1, avg1, cfg.r_s)
        if cfg.keep_u:
            out.u1[p1] = u1
        if bank1 is None:
            continue
        for l2 in COMPONENTS:
            for j2 in range(1, cfg.J + 1):
                p2 = PathIndex(2, l1=p1.l1, j1=p1.j1, l2=l2, j2=j2)
                u2 = _propagate_spec(spec1, bank1, j2, l2, cfg.r_u, ref1)
                out.s2[p2] = _smooth_spec(forward_dft(u2).values, avg2, cfg.r_s)
                if cfg.keep_u:
                    out.u2[p2] = u2
    return out


def flatten_layer2(out):
    """Concatenate all layer-2 rasters in :func:`layer2_paths` order."""
    if not out.s2:
        raise StateError("scattering output has no layer-2 coefficients")
    paths = layer2_paths(out.J)
    missing = [p for p in paths if p not in out.s2]
    if missing:
        raise StateError(f"{len(missing)} layer-2 paths missing, e.g. {missing[0]}")
    return np.concatenate([out.s2[p].ravel() for p in paths])


def feature_length(n, cfg=None):
    """Length of :func:`flatten_layer2` for an ``n x n`` input."""
    cfg = cfg or ScatteringConfig()
    cfg.check_size(n)
    side = cfg.output_shapes(n)[2]
    return (3 * cfg.J) ** 2 * side * side


def scatter_features(img, cfg=None):
    """Layer-2 feature vector of one image."""
    return flatten_layer2(scatter(img, cfg))


def rot90_periodic(a):
    """Quarter turn about the periodic origin: ``out[x1, x2] = a[x2, -x1 mod N]``.

    Unlike ``np.rot90`` this maps even indices to even indices, so it
    commutes with decimation.
    """
    a = np.asarray(a)
    return np.roll(np.rot90(a), 1, axis=0)


def swap_riesz(path):
    """Exchange components 1 and 2 along a path (the effect of a quarter turn)."""
    sw = {0: 0, 1: 2, 2: 1, None: None}
    return path._replace(l1=sw[path.l1], l2=sw[path.l2])
