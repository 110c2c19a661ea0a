"""Residue bases and the computable shadows of a number held in residue form.

A value X held as residues x_i = X rem m_i is never materialized here.
Everything observable about it flows through four shadows computed at an
explicit precision n:

  S_n   scaled ceiling sum of x_i * h_i / m_i,
  r_n   floor(S_n / 2**n), the rank estimate,
  xi_n  the fractional part of S_n / 2**n, a dyadic proxy for X / prod(m),
  e_n   the basis-extension residue of X modulo a probe prime.

Above the stabilization precision n_star = bitlen(k) + 2 + sum(bitlen(m_i)),
the rank and extensions stop depending on n; operations here default to
exactly that precision and accept an override where a temporarily larger n
is useful.  Inner products are evaluated modulo the probe (prefix/suffix
products per channel), never as big integers.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .dyadic import Dyadic
from .errors import BasisMismatch, EmptyBasis, EvenBasis, NotCoprime
from .natnum import bitlen
from .primes import is_prime
from .smallmod import invmod, prod_mod_loop, rem_small

_interned: dict[tuple[int, ...], "PrimeBasis"] = {}
_interned_lock = threading.Lock()


def _skip_products_mod(moduli: tuple[int, ...], a: int) -> tuple[list[int], int]:
    """([prod of moduli except i] rem a for each i, prod of all rem a)."""
    k = len(moduli)
    pre = [1] * (k + 1)
    for i, m in enumerate(moduli):
        pre[i + 1] = pre[i] * (m % a) % a
    suf = [1] * (k + 1)
    for i in range(k - 1, -1, -1):
        suf[i] = suf[i + 1] * (moduli[i] % a) % a
    return [pre[i] * suf[i + 1] % a for i in range(k)], pre[k]


def _compute_h(moduli: tuple[int, ...]) -> tuple[int, ...]:
    k = len(moduli)
    if k <= 64:
        out = []
        for i, m in enumerate(moduli):
            rest = prod_mod_loop((moduli[j] for j in range(k) if j != i), m)
            out.append(invmod(rest, m))
        return tuple(out)
    # column sweep; products stay below 2**62 for moduli < 2**31
    mv = np.asarray(moduli, dtype=np.int64)
    grid = np.remainder(mv[None, :], mv[:, None])
    np.fill_diagonal(grid, 1)
    prod = np.ones(k, dtype=np.int64)
    for j in range(k):
        prod = prod * grid[:, j] % mv
    return tuple(invmod(int(p), int(m)) for p, m in zip(prod, mv))


@dataclass(frozen=True)
class PrimeBasis:
    """Immutable, interned sequence of distinct primes with cached inverses.

    h_i is the inverse modulo m_i of the product of the other moduli.
    """

    moduli: tuple[int, ...]
    h: tuple[int, ...] = field(repr=False)

    @staticmethod
    def of(moduli) -> "PrimeBasis":
        key = tuple(int(m) for m in moduli)
        with _interned_lock:
            hit = _interned.get(key)
        if hit is not None:
            return hit
        if len(set(key)) != len(key):
            raise ValueError(f"duplicate moduli in {key}")
        for m in key:
            if not is_prime(m):
                raise ValueError(f"basis entry {m} is not prime")
        made = PrimeBasis(key, _compute_h(key))
        with _interned_lock:
            return _interned.setdefault(key, made)

    @property
    def k(self) -> int:
        return len(self.moduli)

    @cached_property
    def mass(self) -> int:
        """Sum of bitlen(m_i)."""
        return sum(bitlen(m) for m in self.moduli)

    @cached_property
    def reduced_mass(self) -> int:
        """Sum of (bitlen(m_i) - 1): the capacity bound for faithful values."""
        return self.mass - self.k

    @cached_property
    def n_star(self) -> int:
        """Precision above which rank and extensions are constant."""
        return bitlen(self.k) + 2 + self.mass

    def extended(self, extra) -> "PrimeBasis":
        extra = tuple(int(a) for a in extra)
        if set(extra) & set(self.moduli):
            raise NotCoprime(f"{extra} meets basis {self.moduli}")
        return PrimeBasis.of(self.moduli + extra)

    def __hash__(self) -> int:
        return hash(self.moduli)


@dataclass(frozen=True)
class Residues:
    basis: PrimeBasis
    values: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.values) != self.basis.k:
            raise ValueError("value count does not match basis length")
        for v, m in zip(self.values, self.basis.moduli):
            if not 0 <= v < m:
                raise ValueError(f"residue {v} out of range for modulus {m}")

    def is_zero(self) -> bool:
        return all(v == 0 for v in self.values)


@dataclass(frozen=True)
class Shadow:
    S: int
    r: int
    xi: Dyadic
    n: int


def from_nat(x: int, basis: PrimeBasis) -> Residues:
    """Residue representation of a natural on the given basis."""
    return Residues(basis, tuple(rem_small(x, m) for m in basis.moduli))


def residues_of(values, basis: PrimeBasis) -> Residues:
    return Residues(basis, tuple(int(v) for v in values))


def ones(basis: PrimeBasis) -> Residues:
    return Residues(basis, (1,) * basis.k)


def zeros(basis: PrimeBasis) -> Residues:
    return Residues(basis, (0,) * basis.k)


def shadow(x: Residues, n: int | None = None) -> Shadow:
    """Exact S_n, rank estimate, and dyadic xi at precision n (default n_star)."""
    basis = x.basis
    if n is None:
        n = basis.n_star
    if n < 1:
        raise ValueError("precision must be >= 1")
    S = 0
    for v, h, m in zip(x.values, basis.h, basis.moduli):
        t = (v * h) << n
        S += -(-t // m)
    r = S >> n
    assert r <= sum(basis.moduli), "rank estimate exceeded its proven bound"
    return Shadow(S, r, Dyadic(S & ((1 << n) - 1), n), n)


def rank(x: Residues) -> int:
    """The stabilized rank r_{n_star}."""
    return shadow(x).r


def stabilized(x: Residues):
    """Stabilized rank plus a closure computing basis extensions with it."""
    r = rank(x)
    return r, lambda a: _extend_with_rank(x, r, a)


def _extend_with_rank(x: Residues, r: int, a: int) -> int:
    basis = x.basis
    skip, total = _skip_products_mod(basis.moduli, a)
    acc = 0
    for v, h, c in zip(x.values, basis.h, skip):
        acc = (acc + v * (h * c % a)) % a
    return (acc - total * r) % a


def extend(x: Residues, a: int) -> int:
    """Canonical residue of the represented value modulo a probe prime a.

    Probes inside the basis return the stored residue unchanged.
    """
    return _extend_with_rank(x, rank(x), a)


def scale_extend(x: Residues, a_new) -> Residues:
    """Multiply by prod(a_new) and extend: values (prod(a_new)*x rem m, 0...)
    on the appended basis.  Leaves xi unchanged."""
    ext = x.basis.extended(tuple(a_new))
    scaled = []
    for v, m in zip(x.values, x.basis.moduli):
        f = 1
        for a in a_new:
            f = f * (a % m) % m
        scaled.append(v * f % m)
    return Residues(ext, tuple(scaled) + (0,) * len(tuple(a_new)))


def basis_extend(x: Residues, a_new) -> Residues:
    """Extension of x to the appended basis, representing the same value."""
    a_new = tuple(int(a) for a in a_new)
    ext = x.basis.extended(a_new)
    r = rank(x)
    extra = tuple(_extend_with_rank(x, r, a) for a in a_new)
    return Residues(ext, x.values + extra)


def add(x: Residues, y: Residues, n: int | None = None) -> tuple[Residues, int]:
    """Componentwise sum with its carry: represents X + Y - c*prod(m), c in {0,1}.

    The carry is read off the xi shadows at stabilization precision, where
    the three-way carry of the naive argument provably collapses to two.
    """
    if x.basis is not y.basis:
        raise BasisMismatch("residue vectors on different bases")
    basis = x.basis
    z = Residues(
        basis, tuple((a + b) % m for a, b, m in zip(x.values, y.values, basis.moduli))
    )
    gap = shadow(x, n).xi + shadow(y, n).xi - shadow(z, n).xi
    c = 1 if gap >= Dyadic(1, 1) else 0
    return z, c


def half_odd(basis: PrimeBasis) -> Residues:
    """Residues of the exact half of 1 + prod(m) on an odd basis."""
    if basis.k == 0:
        raise EmptyBasis("half of the empty basis is undefined")
    if 2 in basis.moduli:
        raise EvenBasis("basis must be odd")
    return Residues(basis, tuple(invmod(2, m) for m in basis.moduli))


def same_basis_mul(x: Residues, y: Residues) -> Residues:
    """Componentwise modular product on a shared basis."""
    if x.basis is not y.basis:
        raise BasisMismatch("residue vectors on different bases")
    return Residues(
        x.basis,
        tuple(a * b % m for a, b, m in zip(x.values, y.values, x.basis.moduli)),
    )


def mul(x: Residues, y: Residues) -> Residues:
    """Product of values held on disjoint bases, on the merged basis.

    Both operands are extended to the merged basis and multiplied
    componentwise; the e shadows multiply exactly and the xi shadows
    multiply within 2**-n * (k + l).
    """
    if set(x.basis.moduli) & set(y.basis.moduli):
        raise NotCoprime("bases intersect")
    merged = x.basis.extended(y.basis.moduli)
    ex = basis_extend(x, y.basis.moduli)
    ry = rank(y)
    y_on_m = tuple(_extend_with_rank(y, ry, m) for m in x.basis.moduli)
    ey = Residues(merged, y_on_m + y.values)
    return same_basis_mul(ex, ey)


def to_items(x: Residues) -> list[int]:
    """Flat sequence for serialization: moduli then values."""
    return list(x.basis.moduli) + list(x.values)


def from_items(items) -> Residues:
    items = list(items)
    if len(items) % 2:
        raise ValueError("expected an even-length moduli+values sequence")
    k = len(items) // 2
    return Residues(PrimeBasis.of(items[:k]), tuple(items[k:]))
