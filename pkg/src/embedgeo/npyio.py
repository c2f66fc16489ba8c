"""Minimal npy v1/v2 reader and writer for 2-D float matrices.

Deliberately independent of numpy.load/numpy.save so matrix files can
be validated byte-for-byte: only little-endian float32/float64,
C-order, rank-2 arrays are accepted. The writer always emits float32
C-order v1 files that numpy itself can read back.
"""

import ast
import struct
from pathlib import Path
from typing import Union

import numpy as np

from .errors import DataError, FormatError, ShapeError, UnsupportedLayout

MAGIC = b"\x93NUMPY"

_DTYPES = {"<f4": np.float32, "<f8": np.float64}

PathLike = Union[str, Path]


def read_matrix(path: PathLike) -> np.ndarray:
    """Read an npy file into a float32 C-order matrix.

    float64 payloads are narrowed to float32 after a NaN/Inf scan.
    Raises FormatError on bad magic/version/dtype, UnsupportedLayout on
    fortran_order files, ShapeError unless the array is rank 2, and
    DataError (with the row index) on non-finite entries.
    """
    with open(path, "rb") as fh:
        magic = fh.read(6)
        if magic != MAGIC:
            raise FormatError(f"{path}: not an npy file (bad magic {magic!r})")
        version = fh.read(2)
        if len(version) != 2:
            raise FormatError(f"{path}: truncated version field")
        major, minor = version[0], version[1]
        if (major, minor) not in ((1, 0), (2, 0)):
            raise FormatError(f"{path}: unsupported npy version {major}.{minor}")
        if major == 1:
            raw = fh.read(2)
            if len(raw) != 2:
                raise FormatError(f"{path}: truncated header length")
            (header_len,) = struct.unpack("<H", raw)
        else:
            raw = fh.read(4)
            if len(raw) != 4:
                raise FormatError(f"{path}: truncated header length")
            (header_len,) = struct.unpack("<I", raw)
        header_bytes = fh.read(header_len)
        if len(header_bytes) != header_len:
            raise FormatError(f"{path}: truncated header")
        try:
            header = ast.literal_eval(header_bytes.decode("latin1").strip())
        except (ValueError, SyntaxError) as exc:
            raise FormatError(f"{path}: unparseable header: {exc}") from exc
        if not isinstance(header, dict):
            raise FormatError(f"{path}: header is not a dict")

        descr = header.get("descr")
        if descr not in _DTYPES:
            raise FormatError(
                f"{path}: dtype {descr!r} not supported (need little-endian float32/float64)"
            )
        if header.get("fortran_order"):
            raise UnsupportedLayout(f"{path}: fortran_order files are not supported")
        shape = header.get("shape")
        if not (isinstance(shape, tuple) and all(isinstance(s, int) for s in shape)):
            raise FormatError(f"{path}: bad shape entry {shape!r}")
        if len(shape) != 2:
            raise ShapeError(f"{path}: expected a rank-2 array, got shape {shape}")

        dtype = np.dtype(_DTYPES[descr]).newbyteorder("<")
        count = shape[0] * shape[1]
        payload = fh.read(count * dtype.itemsize)
        if len(payload) != count * dtype.itemsize:
            raise FormatError(f"{path}: payload shorter than shape implies")
        data = np.frombuffer(payload, dtype=dtype).reshape(shape)

    bad = ~np.isfinite(data)
    if bad.any():
        row = int(np.nonzero(bad.any(axis=1))[0][0])
        raise DataError(f"{path}: non-finite value in row {row}", row=row)
    return np.ascontiguousarray(data, dtype=np.float32)


def write_matrix(path: PathLike, matrix: np.ndarray) -> None:
    """Write a rank-2 float matrix as a v1 npy file (float32, C-order)."""
    arr = np.asarray(matrix)
    if arr.ndim != 2:
        raise ShapeError(f"expected a rank-2 array, got shape {arr.shape}")
    arr = np.ascontiguousarray(arr, dtype=np.float32)

    header = "{'descr': '<f4', 'fortran_order': False, 'shape': %s, }" % (
        repr(arr.shape),
    )
    # Pad the header so the payload starts on a 64-byte boundary.
    base = len(MAGIC) + 2 + 2
    pad = 64 - ((base + len(header) + 1) % 64)
    header = header + " " * (pad % 64) + "\n"
    with open(path, "wb") as fh:
        fh.write(MAGIC)
        fh.write(bytes((1, 0)))
        fh.write(struct.pack("<H", len(header)))
        fh.write(header.encode("latin1"))
        fh.write(arr.tobytes(order="C"))
