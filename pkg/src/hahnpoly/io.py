"""PGM images, CSV tables and a raw binary matrix format."""

from __future__ import annotations

import csv
import io
import math
import struct
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Mapping, Optional, Sequence

import numpy as np

MATRIX_MAGIC = b"HAHNMAT\x00"
_HEADER = struct.Struct("<8sQ")
_WS = b" \t\n\v\f\r"


class FormatError(ValueError):
    """Malformed input; ``offset`` is the byte position of the problem."""

    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} (byte {offset})")
        self.offset = offset


@dataclass(frozen=True)
class PgmImage:
    width: int
    height: int
    maxval: int
    samples: np.ndarray

    def to_grid(self) -> np.ndarray:
        return self.samples.reshape(self.height, self.width) / float(self.maxval)


def _tokens(data: bytes, pos: int, count: int):
    """Read ``count`` whitespace-separated header tokens, skipping comments."""
    out = []
    n = len(data)
    while len(out) < count:
        while pos < n and (data[pos] in _WS or data[pos] == ord("#")):
            if data[pos] == ord("#"):
                while pos < n and data[pos] not in b"\r\n":
                    pos += 1
            else:
                pos += 1
        start = pos
        while pos < n and data[pos] not in _WS and data[pos] != ord("#"):
            pos += 1
        if start == pos:
            raise FormatError("unexpected end of header", pos)
        out.append((data[start:pos], start))
    return out, pos


def _int(tok, off, what):
    try:
        v = int(tok)
    except ValueError:
        raise FormatError(f"invalid {what} {tok!r}", off) from None
    if v <= 0:
        raise FormatError(f"{what} must be positive", off)
    return v


def decode_pgm(data: bytes) -> PgmImage:
    if len(data) < 2 or data[:2] not in (b"P2", b"P5"):
        raise FormatError("not a P2/P5 PGM file", 0)
    binary = data[:2] == b"P5"
    toks, pos = _tokens(data, 2, 3)
    width, height, maxval = (_int(t, o, w) for (t, o), w in zip(toks, ("width", "height", "maxval")))
    if maxval > 65535:
        raise FormatError("maxval exceeds 65535", toks[2][1])
    count = width * height
    if binary:
        if pos >= len(data) or data[pos] not in _WS:
            raise FormatError("missing whitespace after maxval", pos)
        pos += 1
        dtype = np.dtype(">u2") if maxval > 255 else np.dtype("u1")
        need = count * dtype.itemsize
        if len(data) - pos < need:
            raise FormatError(f"truncated raster: need {need} bytes, have {len(data) - pos}",
                              len(data))
        samples = np.frombuffer(data, dtype=dtype, count=count, offset=pos).astype(np.int64)
    else:
        body = data[pos:].split()
        if len(body) < count:
            raise FormatError(f"truncated raster: need {count} samples, have {len(body)}",
                              len(data))
        try:
            samples = np.array([int(v) for v in body[:count]], dtype=np.int64)
        except ValueError:
            raise FormatError("non-integer sample", pos) from None
    if samples.size and (samples.max() > maxval or samples.min() < 0):
        raise FormatError("sample out of range", pos)
    return PgmImage(width, height, maxval, samples)


def read_pgm(data: bytes) -> np.ndarray:
    """Decode P2 or P5 bytes into a float array in ``[0, 1]`` (rows = height)."""
    return decode_pgm(data).to_grid()


def write_pgm(image, maxval: int = 255) -> bytes:
    """Encode as binary P5; values are clamped to ``[0, 1]`` and rounded half up."""
    if maxval not in (255, 65535):
        raise ValueError("maxval must be 255 or 65535")
    g = np.clip(np.asarray(image, dtype=np.float64), 0.0, 1.0)
    if g.ndim != 2:
        raise ValueError("image must be 2-D")
    q = np.floor(g * maxval + 0.5).astype(np.int64)
    dtype = ">u2" if maxval > 255 else "u1"
    h, w = g.shape
    return b"P5\n%d %d\n%d\n" % (w, h, maxval) + q.astype(dtype).tobytes()


def load_pgm(path) -> np.ndarray:
    return read_pgm(Path(path).read_bytes())


def save_pgm(path, image, maxval: int = 255) -> None:
    Path(path).write_bytes(write_pgm(image, maxval))


def format_cell(v) -> str:
    if isinstance(v, (bool, np.bool_)):
        return str(bool(v))
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        v = float(v)
        if math.isnan(v):
            return "NaN"
        return repr(v)  # shortest string that round-trips exactly
    return "" if v is None else str(v)


def write_csv(rows: Iterable[Mapping], columns: Optional[Sequence[str]] = None) -> bytes:
    """Serialise mappings as UTF-8 CSV with a header row and LF endings."""
    rows = list(rows)
    if columns is None:
        if not rows:
            raise ValueError("columns are required for an empty table")
        columns = list(rows[0].keys())
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for r in rows:
        w.writerow([format_cell(r.get(c)) for c in columns])
    return buf.getvalue().encode("utf-8")


def read_csv(data: bytes) -> list[dict]:
    return list(csv.DictReader(io.StringIO(data.decode("utf-8"))))


def save_csv(path, rows, columns=None) -> None:
    Path(path).write_bytes(write_csv(rows, columns))


def matrix_to_csv(values: np.ndarray) -> bytes:
    cols = [f"x{j}" for j in range(values.shape[1])]
    return write_csv((dict(zip(cols, r)) for r in values.tolist()), cols)


def write_matrix(values) -> bytes:
    """Square matrix as a 16-byte header (magic, N) then little-endian float64."""
    v = np.asarray(values, dtype="<f8")
    if v.ndim != 2 or v.shape[0] != v.shape[1]:
        raise ValueError("expected a square matrix")
    return _HEADER.pack(MATRIX_MAGIC, v.shape[0]) + np.ascontiguousarray(v).tobytes()


def read_matrix(data: bytes) -> np.ndarray:
    if len(data) < _HEADER.size:
        raise FormatError("truncated header", len(data))
    magic, n = _HEADER.unpack_from(data)
    if magic != MATRIX_MAGIC:
        raise FormatError("bad magic", 0)
    need = _HEADER.size + 8 * n * n
    if len(data) != need:
        raise FormatError(f"expected {need} bytes", min(len(data), need))
    return np.frombuffer(data, dtype="<f8", offset=_HEADER.size).reshape(n, n).copy()
