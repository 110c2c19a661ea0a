"""Ruler/bits interleaved encoding of sequences of naturals.

The code of <X_0, ..., X_{n-1}> is the single natural whose even bit
positions carry the ruler R = {r_i} (r_i = start of X_i in the payload)
and whose odd positions carry the payload B (the concatenated bits of the
X_i).  Element i occupies payload bits r_i .. r_{i+1}-1; zero elements
occupy one payload bit.  The length is carried alongside the code, and the
binary file format stores it explicitly in the header.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass
from collections.abc import Sequence

from .errors import Malformed
from .natnum import bitlen

MAGIC = b"CRRSEQ1\n"


@dataclass(frozen=True)
class SeqCode:
    code: int
    length: int


def encode(items: Sequence[int]) -> SeqCode:
    """Encode a sequence of naturals; decode(encode(v)) == list(v)."""
    code = 0
    pos = 0
    for x in items:
        if x < 0:
            raise ValueError("sequence elements must be naturals")
        code |= 1 << (2 * pos)  # ruler mark at r_i = pos
        width = max(1, bitlen(x))
        # payload bits pos .. pos+width-1 hold x, at odd code positions
        b = x
        off = pos
        while b:
            if b & 1:
                code |= 1 << (2 * off + 1)
            b >>= 1
            off += 1
        pos += width
    return SeqCode(code, len(items))


def _split(code: int) -> tuple[int, int]:
    """Extract (ruler, payload) sets from the interleaved code."""
    ruler = 0
    payload = 0
    i = 0
    while code:
        if code & 1:
            ruler |= 1 << i
        if code & 2:
            payload |= 1 << i
        code >>= 2
        i += 1
    return ruler, payload


def decode(sc: SeqCode) -> list[int]:
    """Recover the unique sequence a well-formed code represents."""
    ruler, payload = _split(sc.code)
    if sc.length == 0:
        if sc.code != 0:
            raise Malformed("nonempty code with declared length 0")
        return []
    if ruler == 0:
        raise Malformed("empty ruler for positive length")
    if not ruler & 1:
        raise Malformed("ruler does not start at 0")
    marks = []
    r = ruler
    pos = 0
    while r:
        if r & 1:
            marks.append(pos)
        r >>= 1
        pos += 1
    if len(marks) != sc.length:
        raise Malformed(f"ruler holds {len(marks)} marks, length says {sc.length}")
    marks.append(max(bitlen(payload), marks[-1] + 1))
    out = []
    for i in range(sc.length):
        lo, hi = marks[i], marks[i + 1]
        out.append((payload >> lo) & ((1 << (hi - lo)) - 1))
    return out


def to_bytes(sc: SeqCode) -> bytes:
    """Binary format: magic, u64-LE length, u32-LE byte count, code bytes LE."""
    nbytes = (bitlen(sc.code) + 7) // 8
    return (
        MAGIC
        + struct.pack("<Q", sc.length)
        + struct.pack("<I", nbytes)
        + sc.code.to_bytes(nbytes, "little")
    )


def from_bytes(data: bytes) -> SeqCode:
    if data[: len(MAGIC)] != MAGIC:
        raise Malformed("bad magic")
    off = len(MAGIC)
    if len(data) < off + 12:
        raise Malformed("truncated header")
    (length,) = struct.unpack_from("<Q", data, off)
    (nbytes,) = struct.unpack_from("<I", data, off + 8)
    raw = data[off + 12 : off + 12 + nbytes]
    if len(raw) != nbytes:
        raise Malformed("truncated code")
    return SeqCode(int.from_bytes(raw, "little"), length)


def write_file(path, items: Sequence[int]) -> SeqCode:
    sc = encode(items)
    with open(path, "wb") as fh:
        fh.write(to_bytes(sc))
    return sc


def read_file(path) -> list[int]:
    with open(path, "rb") as fh:
        return decode(from_bytes(fh.read()))
