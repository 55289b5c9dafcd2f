"""Minimal PGM (P2 ASCII / P5 binary, maxval 255) reader and writer."""

from __future__ import annotations

import re
from pathlib import Path

import numpy as np

_TOKEN = re.compile(rb"(?:\s|#[^\n\r]*)*([^\s#]+)")


class PGMError(OSError):
    pass


class MalformedHeader(PGMError):
    pass


class UnsupportedMaxval(PGMError):
    pass


class TruncatedPayload(PGMError):
    pass


def _header(data: bytes):
    pos = 0
    tokens = []
    for _ in range(4):
        m = _TOKEN.match(data, pos)
        if m is None:
            raise MalformedHeader("incomplete PGM header")
        tokens.append(m.group(1))
        pos = m.end()
    magic = tokens[0]
    if magic not in (b"P2", b"P5"):
        raise MalformedHeader(f"not a PGM file (magic {magic!r})")
    try:
        width, height, maxval = (int(t) for t in tokens[1:])
    except ValueError:
        raise MalformedHeader(f"non-integer header fields {tokens[1:]!r}") from None
    if width < 1 or height < 1:
        raise MalformedHeader(f"bad dimensions {width}x{height}")
    if maxval != 255:
        raise UnsupportedMaxval(f"maxval must be 255, got {maxval}")
    return magic, width, height, pos


def parse_pgm(data: bytes) -> np.ndarray:
    magic, width, height, pos = _header(data)
    n = width * height
    if magic == b"P5":
        # exactly one whitespace byte separates the header from the raster
        if pos >= len(data) or not data[pos:pos + 1].isspace():
            raise TruncatedPayload("missing raster data")
        raw = data[pos + 1:pos + 1 + n]
        if len(raw) < n:
            raise TruncatedPayload(f"expected {n} bytes of raster, got {len(raw)}")
        vals = np.frombuffer(raw, dtype=np.uint8)
    else:
        body = re.sub(rb"#[^\n\r]*", b"", data[pos:]).split()
        if len(body) < n:
            raise TruncatedPayload(f"expected {n} samples, got {len(body)}")
        try:
            vals = np.array([int(t) for t in body[:n]])
        except ValueError:
            raise MalformedHeader("non-integer sample in P2 raster") from None
        if vals.min() < 0 or vals.max() > 255:
            raise MalformedHeader("sample outside 0..255")
    return vals.reshape(height, width).astype(np.float64)


def load_image(path) -> np.ndarray:
    return parse_pgm(Path(path).read_bytes())


def to_bytes(field, binary: bool = True) -> bytes:
    """Encode a field: clamp to [0, 255], round half to even."""
    arr = np.asarray(field, dtype=np.float64)
    if arr.ndim != 2:
        raise ValueError(f"expected a 2-D field, got shape {arr.shape}")
    q = np.rint(np.clip(arr, 0.0, 255.0)).astype(np.uint8)
    height, width = q.shape
    if binary:
        return b"P5\n%d %d\n255\n" % (width, height) + q.tobytes()
    lines = [" ".join(str(v) for v in row) for row in q]
    return (b"P2\n%d %d\n255\n" % (width, height)) + "\n".join(lines).encode() + b"\n"


def save_image(field, path, binary: bool = True) -> None:
    Path(path).write_bytes(to_bytes(field, binary))
