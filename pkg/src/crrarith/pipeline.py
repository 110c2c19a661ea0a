"""Iterated multiplication through residue arithmetic.

Factors are converted to residues on an odd prime basis whose capacity
strictly exceeds the total input bit-length, multiplied channelwise, and
reconstructed.  Small bases reconstruct by bit extraction; larger ones by
the classical weighted sum (both routes are interchangeable and
cross-checked in tests).  Channel work may be spread across threads; the
result is bit-identical to the sequential one.
"""

from __future__ import annotations

import concurrent.futures
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .crr import PrimeBasis, Residues
from .errors import DivisorZero
from .groups import dlog_table, generator, indep_seq, powmod
from .natnum import bitlen, oracle_divmod
from .primes import basis_primes
from .reconstruct import classical_value, rec
from .smallmod import prod_mod_prefixes

#: bit-extraction reconstruction is used up to this basis mass (it grows
#: roughly cubically with mass; the classical route takes over beyond)
REC_MASS_LIMIT = 28

_HORNER_CHUNK = 32


@lru_cache(maxsize=32)
def choose_basis(total_bits: int) -> PrimeBasis:
    """Odd prime basis with capacity strictly above total_bits.

    The target is quantized upward to a power of two so repeated calls at
    nearby sizes share one cached basis.
    """
    target = 8
    while target < total_bits:
        target *= 2
    return PrimeBasis.of(basis_primes(target, odd_only=True))


def _residue_matrix(factors, basis: PrimeBasis, parallelism: int = 1) -> np.ndarray:
    """Residues of every factor on every channel, by chunked Horner scans."""
    mods = np.asarray(basis.moduli, dtype=np.int64)
    shift = (1 << _HORNER_CHUNK) % mods

    def channel_block(sl: slice) -> np.ndarray:
        ms = mods[sl]
        sh = shift[sl]
        out = np.zeros((len(factors), len(ms)), dtype=np.int64)
        for i, f in enumerate(factors):
            nb = bitlen(f)
            if nb == 0:
                continue
            r = np.zeros(len(ms), dtype=np.int64)
            for pos in range(((nb - 1) // _HORNER_CHUNK) * _HORNER_CHUNK, -1, -_HORNER_CHUNK):
                chunk = (f >> pos) & ((1 << _HORNER_CHUNK) - 1)
                r = (r * sh + chunk) % ms
            out[i] = r
        return out

    if parallelism <= 1 or basis.k < 2 * parallelism:
        return channel_block(slice(None))
    bounds = np.linspace(0, basis.k, parallelism + 1, dtype=int)
    slices = [slice(int(a), int(b)) for a, b in zip(bounds[:-1], bounds[1:])]
    with concurrent.futures.ThreadPoolExecutor(max_workers=parallelism) as pool:
        blocks = list(pool.map(channel_block, slices))
    return np.concatenate(blocks, axis=1)


@dataclass(frozen=True)
class ProductTable:
    """Products of factor runs: entry (u, v) is the product of factors u..v-1."""

    factors: tuple[int, ...]
    entries: dict[tuple[int, int], int] = field(repr=False)
    full: bool

    @property
    def n(self) -> int:
        return len(self.factors)

    def value(self, u: int, v: int) -> int:
        if not 0 <= u <= v <= self.n:
            raise IndexError(f"({u}, {v}) outside the table")
        if u == v:
            return 1
        return self.entries[(u, v)]

    @property
    def prefix_row(self) -> list[int]:
        return [self.value(0, v) for v in range(self.n + 1)]

    @property
    def product(self) -> int:
        return self.value(0, self.n)


def _reconstruct(x: Residues, mode: str) -> int:
    if mode == "bits" or (mode == "auto" and x.basis.mass <= REC_MASS_LIMIT):
        return rec(x)[0]
    return classical_value(x)


def imul(
    factors,
    table: bool = False,
    parallelism: int = 1,
    reconstruction: str = "auto",
) -> ProductTable:
    """Product table of a factor sequence, computed in residue form.

    Prefix products (u = 0) are materialized by default; `table` fills in
    every run.  Zero factors short-circuit the runs that contain them.
    """
    factors = tuple(int(f) for f in factors)
    if any(f < 0 for f in factors):
        raise ValueError("factors must be naturals")
    if reconstruction not in ("auto", "bits", "classical"):
        raise ValueError(f"unknown reconstruction mode {reconstruction!r}")
    n = len(factors)
    entries: dict[tuple[int, int], int] = {}
    if n == 0:
        return ProductTable(factors, entries, full=True)

    total_bits = sum(bitlen(f) for f in factors)
    basis = choose_basis(total_bits)
    assert basis.reduced_mass > total_bits, "basis capacity must exceed input size"
    mods = np.asarray(basis.moduli, dtype=np.int64)
    resmat = _residue_matrix(factors, basis, parallelism)
    zero_at = [i for i, f in enumerate(factors) if f == 0]

    def fill_row(u: int) -> None:
        row = np.ones(basis.k, dtype=np.int64)
        alive = True
        for v in range(u + 1, n + 1):
            if factors[v - 1] == 0:
                alive = False
            if alive:
                row = row * resmat[v - 1] % mods
                entries[(u, v)] = _reconstruct(
                    Residues(basis, tuple(int(c) for c in row)), reconstruction
                )
            else:
                entries[(u, v)] = 0

    fill_row(0)
    if table:
        for u in range(1, n):
            fill_row(u)
    return ProductTable(factors, entries, full=table)


def imulm_via_generator(items, m: int) -> tuple[int, list[int]]:
    """Iterated product modulo a prime via discrete logs on the least
    generator; returns the final residue and the whole prefix sequence."""
    items = [int(a) % m for a in items]
    if m == 2:
        prefixes = prod_mod_prefixes(items, m)
        return prefixes[-1], prefixes
    g = generator(m)
    dlog = dlog_table(m, g)
    prefixes = [1 % m]
    acc = 0
    dead = False
    for a in items:
        if a == 0:
            dead = True
        if dead:
            prefixes.append(0)
            continue
        acc += dlog[a]
        prefixes.append(powmod(g, acc, m))
    return prefixes[-1], prefixes


def imulm_via_indep(items, m: int) -> int:
    """Iterated product modulo a prime through subset-product decompositions
    over the independent generating set, one power per set element."""
    items = [int(a) % m for a in items]
    if any(a == 0 for a in items):
        return 0
    if m == 2:
        return 1
    seq = indep_seq(m)
    dlog = dlog_table(m, seq.g)
    width = bitlen(seq.t)
    counts = [0] * width
    for a in items:
        e = dlog[a]
        for j in range(width):
            if (e >> j) & 1:
                counts[j] += 1
    out = 1 % m
    for x, c in zip(seq.generating_set, counts):
        out = out * powmod(x, c, m) % m
    return out


def div(y: int, x: int, verify_crr: bool = True) -> tuple[int, int]:
    """Quotient and remainder of naturals, delegated to the schoolbook
    oracle; the product q*x is recomputed through the residue pipeline and
    the contract y == q*x + r is re-verified."""
    if x == 0:
        raise DivisorZero("division by zero")
    q, r = oracle_divmod(y, x)
    if verify_crr:
        back = imul([q, x]).product
        if back + r != y or not r < x:
            raise AssertionError("division contract failed its residue recheck")
    return q, r
