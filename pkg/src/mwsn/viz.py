"""Coefficient mosaics.

The layer-2 mosaic is a ``3J x 3J`` block grid: block ``(i, k)`` (0-based)
holds ``s2`` for ``l1 = i % 3, j1 = i // 3 + 1, l2 = k % 3, j2 = k // 3 + 1``.
The layer-1 mosaic has one row per component ``l`` and one column per
scale ``j``.  Blocks are separated by 1-pixel black lines.

A block whose range does not exceed ``SPAN_TOL`` times the magnitude of the
zeroth-order output is treated as flat, so rounding noise is not stretched
into visible texture.
"""
import numpy as np
from PIL import Image

from .scattering import PathIndex
from .spectral import IMAG_TOL

SPAN_TOL = IMAG_TOL


def _normalize(block, lo, hi, floor):
    span = hi - lo
    if not span > floor:
        return np.zeros_like(block, dtype=np.float64)
    return (block - lo) / span


def mosaic(blocks, per_block=True, separator=1, floor=0.0):
    """Tile a 2D list of equally sized rasters into one ``[0, 1]`` image.

    Each block is min-max scaled on its own (``per_block``) or against the
    range of all blocks; a block whose range is at most ``floor`` maps to zero.
    """
    rows, cols = len(blocks), len(blocks[0])
    h, w = blocks[0][0].shape
    out = np.zeros((rows * h + (rows - 1) * separator, cols * w + (cols - 1) * separator))
    if not per_block:
        lo = min(float(b.min()) for row in blocks for b in row)
        hi = max(float(b.max()) for row in blocks for b in row)
    for r, row in enumerate(blocks):
        for c, b in enumerate(row):
            if b.shape != (h, w):
                raise ValueError(f"block ({r}, {c}) has shape {b.shape}, expected {(h, w)}")
            if per_block:
                lo, hi = float(b.min()), float(b.max())
            y, x = r * (h + separator), c * (w + separator)
            out[y:y + h, x:x + w] = _normalize(b, lo, hi, floor)
    return out


def layer2_blocks(out):
    J = out.J
    return [
        [out.s2[PathIndex(2, l1=i % 3, j1=i // 3 + 1, l2=k % 3, j2=k // 3 + 1)] for k in range(3 * J)]
        for i in range(3 * J)
    ]


def layer1_blocks(out):
    return [[out.s1[PathIndex(1, l1=l, j1=j)] for j in range(1, out.J + 1)] for l in range(3)]


def _floor(out):
    return SPAN_TOL * float(np.abs(out.s0).max())


def layer2_mosaic(out, per_block=True):
    return mosaic(layer2_blocks(out), per_block, floor=_floor(out))


def layer1_mosaic(out, per_block=True):
    return mosaic(layer1_blocks(out), per_block, floor=_floor(out))


def save_png(image01, path):
    """Write a ``[0, 1]`` raster as an 8-bit grayscale PNG."""
    arr = np.clip(np.rint(np.asarray(image01) * 255.0), 0, 255).astype(np.uint8)
    Image.fromarray(arr).save(path, format="PNG")
