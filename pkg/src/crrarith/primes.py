"""Prime supply: sieving, the two prime-mass sums, basis selection, and the
auxiliary prime grid used by the reconstruction procedure."""

from __future__ import annotations

import threading
from dataclasses import dataclass

import numpy as np

from .errors import LimitTooSmall, SupplyExhausted
from .natnum import bitlen

_MR_WITNESSES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


@dataclass(frozen=True)
class PrimeTable:
    """All primes <= limit, ascending."""

    limit: int
    primes: tuple[int, ...]

    def __contains__(self, n: int) -> bool:
        if n > self.limit:
            raise ValueError(f"{n} beyond table limit {self.limit}")
        i = np.searchsorted(self._arr, n)
        return i < len(self.primes) and self.primes[i] == n

    @property
    def _arr(self) -> np.ndarray:
        return np.asarray(self.primes, dtype=np.int64)


def sieve(limit: int) -> PrimeTable:
    """Complete table of primes <= limit (Eratosthenes)."""
    if limit < 2:
        raise LimitTooSmall(f"sieve limit must be >= 2, got {limit}")
    mask = np.ones(limit + 1, dtype=bool)
    mask[:2] = False
    for p in range(2, int(limit**0.5) + 1):
        if mask[p]:
            mask[p * p :: p] = False
    return PrimeTable(limit, tuple(int(p) for p in np.nonzero(mask)[0]))


# module-wide growing sieve, protected for concurrent lookups
_cache_lock = threading.Lock()
_cached: PrimeTable = sieve(1 << 10)


def _ensure(limit: int) -> PrimeTable:
    global _cached
    with _cache_lock:
        if _cached.limit < limit:
            grown = _cached.limit
            while grown < limit:
                grown *= 2
            _cached = sieve(grown)
        return _cached


def primes_upto(limit: int) -> np.ndarray:
    """Ascending int64 array of all primes <= limit (cached, grows by doubling)."""
    t = _ensure(max(limit, 2))
    arr = t._arr
    return arr[: int(np.searchsorted(arr, limit, side="right"))]


def is_prime(n: int) -> bool:
    """Deterministic primality: trial division below 2**32, Miller-Rabin above."""
    if n < 2:
        return False
    if n < 1 << 32:
        if n < 4:
            return True
        if n % 2 == 0:
            return False
        d = 3
        while d * d <= n:
            if n % d == 0:
                return False
            d += 2
        return True
    d = n - 1
    s = (d & -d).bit_length() - 1
    d >>= s
    for a in _MR_WITNESSES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def prime_mass(x: int) -> int:
    """Sum over primes p <= x of (bitlen(p) - 1)."""
    if x < 0:
        raise ValueError("x must be >= 0")
    if x < 2:
        return 0
    ps = primes_upto(x)
    if len(ps) == 0:
        return 0
    bl = np.frexp(ps.astype(np.float64))[1]  # exact for p < 2**53
    return int((bl - 1).sum())


def mertens_mass(x: int) -> int:
    """Sum over primes p <= x and powers p**i <= x of floor(x / p**i)."""
    if x < 1:
        raise ValueError("x must be >= 1")
    total = 0
    for p in primes_upto(x):
        pi = int(p)
        while pi <= x:
            total += x // pi
            pi *= int(p)
    return total


def basis_for_bits(
    target: int, exclude: frozenset[int] | set[int] = frozenset(), odd_only: bool = False
):
    """Shortest prefix of ascending eligible primes whose mass strictly
    exceeds target; returns a PrimeBasis.

    Mass is the sum of (bitlen(p) - 1).  The sieve grows by doubling until
    the prefix exists.
    """
    from .crr import PrimeBasis  # deferred: crr imports this module

    return PrimeBasis.of(basis_primes(target, exclude, odd_only))


def basis_primes(
    target: int, exclude: frozenset[int] | set[int] = frozenset(), odd_only: bool = False
) -> tuple[int, ...]:
    """Moduli underlying basis_for_bits, as a plain tuple."""
    if target < 0:
        raise ValueError("target must be >= 0")
    excluded = set(exclude)
    if odd_only:
        excluded.add(2)
    limit = 1 << 10
    while True:
        chosen: list[int] = []
        mass = 0
        for p in primes_upto(limit):
            p = int(p)
            if p in excluded:
                continue
            chosen.append(p)
            mass += bitlen(p) - 1
            if mass > target:
                return tuple(chosen)
        limit *= 2
        if limit > 1 << 34:
            raise SupplyExhausted(f"no basis of mass > {target} below {limit}")


@dataclass(frozen=True)
class PrimeGrid:
    """Rows of distinct odd primes, disjoint from an excluded basis, each row
    of minimal length with row mass strictly above 2*s."""

    s: int
    rows: tuple[tuple[int, ...], ...]

    @property
    def all_primes(self) -> tuple[int, ...]:
        return tuple(p for row in self.rows for p in row)


def build_grid(basis) -> PrimeGrid:
    """Grid for the reconstruction of residues on `basis` (s = 2 + mass of
    the basis; rows partition an ascending run of odd primes coprime to it)."""
    moduli = set(basis.moduli)
    s = 2 + basis.mass
    limit = 1 << 10
    while True:
        rows: list[tuple[int, ...]] = []
        row: list[int] = []
        row_mass = 0
        for p in primes_upto(limit):
            p = int(p)
            if p == 2 or p in moduli:
                continue
            row.append(p)
            row_mass += bitlen(p) - 1
            if row_mass > 2 * s:
                rows.append(tuple(row))
                row = []
                row_mass = 0
                if len(rows) == s:
                    return PrimeGrid(s, tuple(rows))
        limit *= 2
        if limit > 1 << 34:
            raise SupplyExhausted(f"cannot build a {s}-row grid below {limit}")
