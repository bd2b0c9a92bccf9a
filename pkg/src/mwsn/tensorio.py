"""Binary tensor files.

Layout, all little-endian::

    b"MWSF"            magic
    uint32             format version (1)
    uint32             rank
    uint64 * rank      dimensions
    float64 * prod     row-major payload

The payload is written byte-for-byte, so a write/read round trip is exact.
"""
import os
import struct
from pathlib import Path

import numpy as np

from .errors import FormatError

MAGIC = b"MWSF"
VERSION = 1
_LE_F64 = np.dtype("<f8")


def dumps(array):
    a = np.asarray(array, dtype=np.float64)
    header = MAGIC + struct.pack("<II", VERSION, a.ndim)
    header += struct.pack(f"<{a.ndim}Q", *a.shape)
    return header + np.ascontiguousarray(a, dtype=_LE_F64).tobytes()


def loads(data):
    data = memoryview(data)
    if len(data) < 12 or bytes(data[:4]) != MAGIC:
        raise FormatError("not an MWSF tensor (bad magic)")
    version, rank = struct.unpack_from("<II", data, 4)
    if version != VERSION:
        raise FormatError(f"unsupported MWSF version {version}")
    offset = 12 + 8 * rank
    if len(data) < offset:
        raise FormatError("truncated MWSF header")
    shape = struct.unpack_from(f"<{rank}Q", data, 12)
    count = int(np.prod(shape, dtype=np.int64)) if rank else 1
    if len(data) != offset + 8 * count:
        raise FormatError(
            f"payload is {len(data) - offset} bytes, expected {8 * count} for shape {shape}"
        )
    arr = np.frombuffer(data, dtype=_LE_F64, count=count, offset=offset)
    return arr.astype(np.float64).reshape(shape)


def save(path, array):
    """Write atomically: the target only appears once fully written."""
    path = Path(path)
    tmp = path.with_name(path.name + ".part")
    tmp.write_bytes(dumps(array))
    os.replace(tmp, path)


def load(path):
    return loads(Path(path).read_bytes())
