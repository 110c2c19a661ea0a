"""Machine-word modular arithmetic and division of big naturals by small primes.

"Small" means squaring stays within double-width native words; the guard
constant below enforces it.  Big-by-small division goes through the
power-of-two quotient construction (divmod_small); the independent Horner
path (rem_small) must agree with it on odd primes.
"""

from __future__ import annotations

from collections.abc import Iterable, Iterator, Sequence

from .errors import EvenModulus, NotCoprime, RangeError

#: moduli must stay below this so products fit double-width words
SMALL_MOD_LIMIT = 1 << 32

_CHUNK = 32
_CHUNK_MASK = (1 << _CHUNK) - 1


def _check_mod(m: int) -> int:
    if m < 2:
        raise ValueError(f"modulus must be >= 2, got {m}")
    if m > SMALL_MOD_LIMIT:
        raise RangeError(f"modulus {m} exceeds SMALL_MOD_LIMIT")
    return m


def mulmod(a: int, b: int, m: int) -> int:
    _check_mod(m)
    return (a * b) % m


def _egcd(a: int, b: int) -> tuple[int, int, int]:
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    return a, x0, y0


def invmod(a: int, m: int) -> int:
    """Inverse of a modulo m; raises NotCoprime when gcd(a, m) != 1."""
    _check_mod(m)
    g, x, _ = _egcd(a % m, m)
    if g != 1:
        raise NotCoprime(f"gcd({a}, {m}) = {g}")
    return x % m


def pow2_quotient(n: int, m: int) -> tuple[int, int]:
    """Quotient and remainder of 2**n by an odd modulus m.

    The quotient is assembled bit by bit from the parities of 2**j rem m,
    so 2**n == m*q + r holds with r == 2**n rem m.
    """
    if m == 2 or m % 2 == 0:
        raise EvenModulus(f"modulus must be odd, got {m}")
    _check_mod(m)
    if n < 0:
        raise ValueError("n must be >= 0")
    q = 0
    p = 1  # 2**j rem m
    for _ in range(n):
        p += p
        if p >= m:
            p -= m
        q = (q << 1) | (p & 1)
    return q, p


def pow2_quotient_range(n_max: int, m: int) -> Iterator[tuple[int, int, int]]:
    """Yield (n, q, r) of pow2_quotient for every n in [0, n_max]."""
    if m == 2 or m % 2 == 0:
        raise EvenModulus(f"modulus must be odd, got {m}")
    _check_mod(m)
    q = 0
    p = 1
    yield 0, 0, 1
    for n in range(1, n_max + 1):
        p += p
        if p >= m:
            p -= m
        q = (q << 1) | (p & 1)
        yield n, q, p


def divmod_small(x: int, m: int) -> tuple[int, int]:
    """Divide a natural by a small odd prime via the 2**n quotients.

    m == 2 is handled by a bit shift.  q is the sum of the per-bit
    quotients plus the small-number division of the leftover sum of
    remainders.
    """
    if x < 0:
        raise ValueError("x must be a natural")
    if m == 2:
        return x >> 1, x & 1
    if m % 2 == 0:
        raise EvenModulus(f"modulus must be 2 or odd, got {m}")
    _check_mod(m)
    q_total = 0
    small = x & 1
    q = 0
    p = 1
    for n in range(1, x.bit_length()):
        p += p
        if p >= m:
            p -= m
        q = (q << 1) | (p & 1)
        if (x >> n) & 1:
            q_total += q
            small += p
    return q_total + small // m, small % m


def rem_small(x: int, m: int) -> int:
    """x rem m by a Horner scan over the bits of x (radix 2**32 chunks)."""
    if x < 0:
        raise ValueError("x must be a natural")
    _check_mod(m)
    if x < m:
        return x
    shift = (1 << _CHUNK) % m
    r = 0
    for pos in range(((x.bit_length() - 1) // _CHUNK) * _CHUNK, -1, -_CHUNK):
        r = (r * shift + ((x >> pos) & _CHUNK_MASK)) % m
    return r


def prod_mod_loop(items: Iterable[int], m: int) -> int:
    """Left fold of mulmod over items, starting at 1 rem m."""
    _check_mod(m)
    y = 1 % m
    for a in items:
        y = (y * a) % m
    return y


def prod_mod_prefixes(items: Sequence[int], m: int) -> list[int]:
    """Witness prefix sequence y_0 = 1 rem m, y_{i+1} = y_i * a_i rem m."""
    _check_mod(m)
    y = 1 % m
    out = [y]
    for a in items:
        y = (y * a) % m
        out.append(y)
    return out


def gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return a


__all__ = [
    "SMALL_MOD_LIMIT",
    "mulmod",
    "invmod",
    "pow2_quotient",
    "pow2_quotient_range",
    "divmod_small",
    "rem_small",
    "prod_mod_loop",
    "prod_mod_prefixes",
    "gcd",
]
