"""Multiplicative groups modulo primes and prime powers.

Orders and generators, the "good prime" machinery that makes d-th roots
well defined, modular powering driven by a residue representation of the
exponent (extended to composite moduli by prime-power splitting and
classical recombination), and the vanishing-polynomial coefficient table
extracted from one big shifted product.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import gcd

import numpy as np

from .errors import (
    InvariantViolation,
    NotBijective,
    OrderMismatch,
    PeriodNotFound,
    RangeError,
    SupplyExhausted,
)
from .natnum import bitlen
from .primes import is_prime, primes_upto
from .reconstruct import rec_plus
from .smallmod import invmod

try:  # compiled kernels for the bulk powering paths; pure numpy otherwise
    import numba

    _HAVE_NUMBA = True
except ImportError:  # pragma: no cover
    numba = None
    _HAVE_NUMBA = False


def powmod(a: int, r: int, m: int) -> int:
    """Square-and-multiply oracle for everything in this module."""
    if m < 1:
        raise ValueError("modulus must be >= 1")
    if m == 1:
        return 0
    a %= m
    out = 1
    while r:
        if r & 1:
            out = out * a % m
        a = a * a % m
        r >>= 1
    return out


def _factorize(n: int) -> dict[int, int]:
    out: dict[int, int] = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1 if d == 2 else 2
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def order(a: int, m: int) -> int:
    """Least t > 0 with a**t == 1 modulo a prime m; divides every such exponent."""
    if not 0 < a < m:
        raise ValueError("need 0 < a < m")
    t = m - 1
    if powmod(a, t, m) != 1:
        raise ValueError(f"{m} is not prime: Fermat fails for {a}")
    for p in _factorize(t):
        while t % p == 0 and powmod(a, t // p, m) == 1:
            t //= p
    return t


def power_order(a: int, r: int, m: int) -> int:
    """Order of a**r: order(a) / gcd(order(a), r)."""
    if r == 0:
        return 1
    t = order(a, m)
    return t // gcd(t, r)


def lcm_order_element(a: int, a2: int, m: int) -> int:
    """Some b whose order is lcm(order(a), order(a2)), by prime splitting."""
    t = order(a, m)
    t2 = order(a2, m)
    if t == 1:
        return a2
    if gcd(t, t2) == 1:
        return a * a2 % m
    p = min(_factorize(t))
    e = e2 = 0
    s, s2 = t, t2
    while s % p == 0:
        s //= p
        e += 1
    while s2 % p == 0:
        s2 //= p
        e2 += 1
    b = lcm_order_element(powmod(a, p**e, m), powmod(a2, p**e2, m), m)
    c = powmod(a, s, m) if e >= e2 else powmod(a2, s2, m)
    return b * c % m


def bad_primes(m: int, bound: int) -> list[int]:
    """Primes d <= bound for which x -> x**d is not a bijection modulo m,
    each certified by an exhibited nontrivial d-th root of unity."""
    out = []
    for d in primes_upto(bound):
        d = int(d)
        if (m - 1) % d:
            continue  # trivial kernel: x**d = 1 with x**(m-1) = 1 forces x = 1
        w = _root_of_unity(m, d)
        if powmod(w, d, m) != 1 or w == 1:
            raise InvariantViolation(f"witness for bad prime {d} failed")
        out.append(d)
    return out


def _root_of_unity(m: int, d: int) -> int:
    """Some x != 1 with x**d == 1 (d a prime dividing m - 1)."""
    e = (m - 1) // d
    for y in range(2, m):
        x = powmod(y, e, m)
        if x != 1:
            return x
    raise InvariantViolation(f"no element of order {d} modulo {m}")


@dataclass(frozen=True)
class GoodPrimeSet:
    """Ascending primes d_i with x -> x**d_i bijective on the unit group,
    enough of them that their product d exceeds the modulus, enabling
    residue arithmetic on exponents."""

    m: int
    group_order: int
    d_list: tuple[int, ...]
    d: int
    tilde: tuple[int, ...]  # d / d_i

    @property
    def k(self) -> int:
        return len(self.d_list)


def _is_good(d: int, modulus: int, group_order: int) -> bool:
    # trivial kernel iff d is coprime to the group order
    return d != modulus and gcd(d, group_order) == 1


@lru_cache(maxsize=1024)
def _good_primes_for_group(modulus: int, group_order: int, cap: int) -> GoodPrimeSet:
    target = bitlen(modulus)
    limit = 256
    while True:
        chosen: list[int] = []
        mass = 0
        for p in primes_upto(min(limit, cap)):
            p = int(p)
            if not _is_good(p, modulus, group_order):
                continue
            chosen.append(p)
            mass += bitlen(p) - 1
            if mass >= target:
                d = 1
                for q in chosen:
                    d *= q
                if d <= modulus:
                    raise InvariantViolation("product of good primes not above modulus")
                return GoodPrimeSet(
                    modulus, group_order, tuple(chosen), d, tuple(d // q for q in chosen)
                )
        if limit >= cap:
            raise SupplyExhausted(f"not enough good primes below {cap} for {modulus}")
        limit *= 2


def good_primes(m: int, cap: int = 10**6) -> GoodPrimeSet:
    """Minimal ascending prefix of good primes with mass >= bitlen(m), m prime."""
    return _good_primes_for_group(m, m - 1, cap)


def _root_via_exponent(y: int, d: int, modulus: int, group_order: int) -> int:
    x = powmod(y, invmod(d % group_order, group_order), modulus)
    if powmod(x, d, modulus) != y:
        raise InvariantViolation("root verification failed")
    return x


def root_d(y: int, d: int, m: int, method: str = "exponent") -> int:
    """The unique x with x**d == y modulo a prime m, for a good prime d."""
    if not 0 < y < m:
        raise ValueError("need 0 < y < m")
    if not _is_good(d, m, m - 1):
        raise NotBijective(f"x -> x**{d} is not a bijection modulo {m}")
    if method == "exponent":
        return _root_via_exponent(y, d, m, m - 1)
    if method == "search":
        for x in range(1, m):
            if powmod(x, d, m) == y:
                return x
        raise InvariantViolation(f"no {d}-th root of {y} modulo {m}")
    raise ValueError(f"unknown method {method!r}")


def _exp_parts(r: int, gps: GoodPrimeSet) -> tuple[list[int], int]:
    u_vec = [r * invmod(td % di, di) % di for td, di in zip(gps.tilde, gps.d_list)]
    num = r - sum(u * td for u, td in zip(u_vec, gps.tilde))
    u, rem = divmod(num, gps.d)
    if rem:
        raise InvariantViolation("fractional-power exponent did not divide out")
    if not -gps.k <= u <= 2:
        raise InvariantViolation(f"integral exponent {u} outside [-k, 2]")
    return u_vec, u


def exp_frac(
    a: int, r: int, gps: GoodPrimeSet, roots: tuple[int, ...] | None = None
) -> int:
    """The fractional power a**(r/d) for r <= 2d, via the exponent residues
    u_i(r) and the integral correction u(r) in [-k, 2]."""
    m = gps.m
    if not 0 < a < m:
        raise ValueError("need 0 < a < m")
    if r < 0 or r > 2 * gps.d:
        raise RangeError(f"r = {r} outside [0, 2d]")
    if roots is None:
        roots = tuple(
            _root_via_exponent(a, di, m, gps.group_order) for di in gps.d_list
        )
    u_vec, u = _exp_parts(r, gps)
    out = powmod(a, u, m) if u >= 0 else powmod(invmod(a, m), -u, m)
    for root, ui in zip(roots, u_vec):
        out = out * powmod(root, ui, m) % m
    return out


class _FracPowers:
    """Fractional powers of one base, with the period found by collision scan
    over a hash-indexed table of values."""

    def __init__(self, a: int, gps: GoodPrimeSet, scan_cap: int):
        self.a = a
        self.gps = gps
        self.roots = tuple(
            _root_via_exponent(a, di, gps.m, gps.group_order) for di in gps.d_list
        )
        self.period = self._find_period(scan_cap)

    def value(self, x: int) -> int:
        return exp_frac(self.a, x % self.period, self.gps, self.roots)

    def _find_period(self, scan_cap: int) -> int:
        seen: dict[int, int] = {}
        for x in range(scan_cap + 1):
            v = exp_frac(self.a, x, self.gps, self.roots)
            if v in seen:
                return x - seen[v]
            seen[v] = x
        raise PeriodNotFound(f"no collision among fractional powers below {scan_cap}")


def _vec_powmod(base: np.ndarray, exp: int, m: int) -> np.ndarray:
    out = np.ones_like(base)
    b = base % m
    while exp:
        if exp & 1:
            out = out * b % m
        b = b * b % m
        exp >>= 1
    return out


def _coeff_arrays(gps: GoodPrimeSet):
    """(c_i, tilde_i, d_i) int64 arrays: u_i(x) = x * c_i rem d_i."""
    c = np.asarray(
        [invmod(td % di, di) for td, di in zip(gps.tilde, gps.d_list)], dtype=np.int64
    )
    return c, np.asarray(gps.tilde, dtype=np.int64), np.asarray(gps.d_list, dtype=np.int64)


def _power_prefixes(a: int, gps: GoodPrimeSet):
    """Per-root power tables, the integral-correction powers a**[-k, 2], and
    the roots themselves."""
    m = gps.m
    roots = tuple(_root_via_exponent(a, di, m, gps.group_order) for di in gps.d_list)
    ptab = np.zeros((gps.k, max(gps.d_list)), dtype=np.int64)
    for i, (di, root) in enumerate(zip(gps.d_list, roots)):
        p = 1
        for e in range(di):
            ptab[i, e] = p
            p = p * root % m
    a_inv = invmod(a, m)
    upow = np.empty(gps.k + 3, dtype=np.int64)  # a**e for e in [-k, 2]
    upow[gps.k] = 1
    for e in range(1, 3):
        upow[gps.k + e] = upow[gps.k + e - 1] * a % m
    for e in range(1, gps.k + 1):
        upow[gps.k - e] = upow[gps.k - e + 1] * a_inv % m
    return ptab, upow, roots


if _HAVE_NUMBA:
    # modular reductions in the hot loops use the float-reciprocal trick:
    # exact for moduli below 2**26 as products stay under 2**52

    @numba.njit(cache=True)
    def _nb_powmod(a, e, m):  # pragma: no cover - compiled
        out = 1
        b = a % m
        while e:
            if e & 1:
                out = out * b % m
            b = b * b % m
            e >>= 1
        return out

    @numba.njit(cache=True, inline="always")
    def _nb_redc(v, m, invm):  # pragma: no cover - compiled
        q = np.int64(np.float64(v) * invm)
        r = v - q * m
        if r < 0:
            r += m
        elif r >= m:
            r -= m
        return r

    @numba.njit(cache=True)
    def _nb_fill_table(m, uqk, u_idx, ptab, upow, T):  # pragma: no cover
        """Fill T[x] = a**(x/d); returns the first x > 0 with value 1, or 0."""
        X = T.shape[0]
        k = u_idx.shape[0]
        invm = 1.0 / m
        for x in range(X):
            v = upow[uqk[x]]
            for i in range(k):
                v = _nb_redc(v * ptab[i, u_idx[i, x]], m, invm)
            T[x] = v
            if x > 0 and v == 1:
                return x
        return 0

    @numba.njit(cache=True)
    def _nb_find_period(m, d, c, invd, tilde, dlist, ptab, upow, x_max):  # pragma: no cover
        """Least x > 0 whose fractional power is 1, streaming (no table)."""
        k = dlist.shape[0]
        invm = 1.0 / m
        for x in range(1, x_max + 1):
            num = x
            v = np.int64(1)
            for i in range(k):
                prod = x * c[i]
                u_i = prod - dlist[i] * np.int64(np.float64(prod) * invd[i])
                if u_i < 0:
                    u_i += dlist[i]
                elif u_i >= dlist[i]:
                    u_i -= dlist[i]
                num -= u_i * tilde[i]
                v = _nb_redc(v * ptab[i, u_i], m, invm)
            uq = num // d + k
            if uq < 0 or uq >= k + 3:
                return -1
            v = _nb_redc(v * upow[uq], m, invm)
            if v == 1:
                return x
        return 0

    @numba.njit(cache=True)
    def _nb_grid_verify(m, d, uqk, u_idx, dlist, e_inv, r_count, flags):  # pragma: no cover
        """flags[a] = 1 when the table path disagrees with literal iterated
        multiplication on {a} x [0, min(t, r_count)].

        Both sides repeat with period t (the walk index by construction, the
        reference by associativity once its value at t is 1, which the r = t
        comparison against T[0] = 1 enforces), so the literal window closes
        the whole [0, r_count) grid by induction.
        """
        k = dlist.shape[0]
        X = u_idx.shape[1]
        invm = 1.0 / m
        maxd = 0
        for i in range(k):
            if dlist[i] > maxd:
                maxd = dlist[i]
        ptab = np.empty((k, maxd), dtype=np.int64)
        upow = np.empty(k + 3, dtype=np.int64)
        T = np.empty(X, dtype=np.int64)
        for a in range(1, m):
            for i in range(k):
                root = _nb_powmod(a, e_inv[i], m)
                p = np.int64(1)
                for e in range(dlist[i]):
                    ptab[i, e] = p
                    p = _nb_redc(p * root, m, invm)
            upow[k] = 1
            upow[k + 1] = a % m
            upow[k + 2] = _nb_redc(np.int64(a) * a, m, invm)
            ainv = _nb_powmod(a, m - 2, m)
            acc = np.int64(1)
            for e in range(1, k + 1):
                acc = _nb_redc(acc * ainv, m, invm)
                upow[k - e] = acc
            t = 0
            for x in range(X):
                v = upow[uqk[x]]
                for i in range(k):
                    v = _nb_redc(v * ptab[i, u_idx[i, x]], m, invm)
                T[x] = v
                if x > 0 and v == 1:
                    t = x
                    break
            if t == 0 or T[0] != 1:
                flags[a] = 1
                continue
            step = d % t
            ref = np.int64(1)
            idx = 0
            for _ in range(min(t + 1, r_count)):
                if T[idx] != ref:
                    flags[a] = 1
                    break
                ref = _nb_redc(ref * a, m, invm)
                idx += step
                if idx >= t:
                    idx -= t


def _exp_index_tables(gps: GoodPrimeSet, x_max: int) -> tuple[np.ndarray, np.ndarray]:
    """Shifted integral exponents and per-root residue indices for x <= x_max."""
    c, tilde, dlist = _coeff_arrays(gps)
    xs = np.arange(x_max + 1, dtype=np.int64)
    u_idx = np.empty((gps.k, x_max + 1), dtype=np.int16)
    num = xs.copy()
    for i in range(gps.k):
        ui = xs * int(c[i]) % int(dlist[i])
        u_idx[i] = ui
        num -= ui * int(tilde[i])
    uq, ur = np.divmod(num, gps.d)
    if np.any(ur) or np.any((uq < -gps.k) | (uq > 2)):
        raise InvariantViolation("exponent residue split failed")
    return (uq + gps.k).astype(np.int8), u_idx


def _frac_power_table(
    a: int, gps: GoodPrimeSet, x_max: int
) -> tuple[int, np.ndarray]:
    """Period t and the table of a**(x/d) for x < t, computed in bulk."""
    m = gps.m
    if _HAVE_NUMBA:
        uqk, u_idx = _exp_index_tables(gps, x_max)
        ptab, upow, _ = _power_prefixes(a, gps)
        T = np.empty(x_max + 1, dtype=np.int64)
        t = int(_nb_fill_table(m, uqk, u_idx, ptab, upow, T))
        if t == 0:
            raise PeriodNotFound(f"no collision among fractional powers below {x_max}")
        return t, T[:t]
    roots = tuple(_root_via_exponent(a, di, m, gps.group_order) for di in gps.d_list)
    xs = np.arange(x_max + 1, dtype=np.int64)
    acc = np.ones(x_max + 1, dtype=np.int64)
    u_num = xs.copy()
    for di, td, root in zip(gps.d_list, gps.tilde, roots):
        u_i = xs * invmod(td % di, di) % di
        powers = np.empty(di, dtype=np.int64)
        powers[0] = 1
        for e in range(1, di):
            powers[e] = powers[e - 1] * root % m
        acc = acc * powers[u_i] % m
        u_num = u_num - u_i * td
    uq, ur = np.divmod(u_num, gps.d)
    if np.any(ur) or np.any((uq < -gps.k) | (uq > 2)):
        raise InvariantViolation("exponent residue split failed")
    a_inv = invmod(a, m)
    upow = np.empty(gps.k + 3, dtype=np.int64)  # a**e for e in [-k, 2]
    upow[gps.k] = 1
    for e in range(1, 3):
        upow[gps.k + e] = upow[gps.k + e - 1] * a % m
    for e in range(1, gps.k + 1):
        upow[gps.k - e] = upow[gps.k - e + 1] * a_inv % m
    table = acc * upow[uq + gps.k] % m
    hits = np.nonzero(table[1:] == 1)[0]
    if len(hits) == 0:
        raise PeriodNotFound(f"no collision among fractional powers below {x_max}")
    t = int(hits[0]) + 1
    return t, table[:t]


def verify_power_grid(m: int, r_mult: int = 4) -> int:
    """Check powm_crr's table path against literal iterated multiplication
    for every base a < m and every exponent r < r_mult * m.

    Returns the number of grid points verified; raises on any mismatch.
    """
    if m < 3 or not is_prime(m):
        raise ValueError(f"modulus must be an odd prime, got {m}")
    gps = good_primes(m)
    r_count = r_mult * m
    if _HAVE_NUMBA:
        uqk, u_idx = _exp_index_tables(gps, 2 * m)
        dlist = np.asarray(gps.d_list, dtype=np.int64)
        e_inv = np.asarray(
            [invmod(di % (m - 1), m - 1) for di in gps.d_list], dtype=np.int64
        )
        flags = np.zeros(m, dtype=np.int8)
        _nb_grid_verify(m, gps.d, uqk, u_idx, dlist, e_inv, r_count, flags)
        bad = np.nonzero(flags)[0]
        if len(bad):
            raise InvariantViolation(f"powering grid mismatch at m={m}, a={int(bad[0])}")
        return (m - 1) * r_count
    block = max(1, (1 << 21) // r_count)
    for lo in range(1, m, block):
        a_vec = np.arange(lo, min(lo + block, m), dtype=np.int64)
        F = crr_power_block(m, a_vec, r_count)
        ref = np.ones(len(a_vec), dtype=np.int64)
        for r in range(r_count):
            if not np.array_equal(F[:, r], ref):
                raise InvariantViolation(f"powering grid mismatch at m={m}")
            ref = ref * a_vec % m
    return (m - 1) * r_count


#: below this modulus the hash-scan reference path is used; above it the
#: bulk table sweep (identical values, fewer interpreter trips)
_SCAN_TABLE_CUTOVER = 64


def _find_period(a: int, gps: GoodPrimeSet, ptab, upow) -> int:
    """Least x > 0 with a**(x/d) == 1, scanned up to 2m without a table."""
    x_max = 2 * gps.m
    c, tilde, dlist = _coeff_arrays(gps)
    invd = 1.0 / dlist.astype(np.float64)
    t = int(_nb_find_period(gps.m, gps.d, c, invd, tilde, dlist, ptab, upow, x_max))
    if t == -1:
        raise InvariantViolation("exponent residue split failed")
    if t == 0:
        raise PeriodNotFound(f"no collision among fractional powers below {x_max}")
    return t


def _unit_pow(a: int, r: int, modulus: int, group_order: int, cap: int = 10**6) -> int:
    """a**r on the unit group of `modulus` via exponent residues."""
    gps = _good_primes_for_group(modulus, group_order, cap)
    if modulus <= _SCAN_TABLE_CUTOVER or not _HAVE_NUMBA:
        if modulus <= _SCAN_TABLE_CUTOVER:
            fp = _FracPowers(a, gps, 2 * modulus)
            return fp.value((r % fp.period) * gps.d % fp.period)
        t, table = _frac_power_table(a, gps, 2 * modulus)
        return int(table[(r % t) * gps.d % t])
    ptab, upow, roots = _power_prefixes(a, gps)
    t = _find_period(a, gps, ptab, upow)
    x0 = (r % t) * (gps.d % t) % t
    return exp_frac(a, x0, gps, roots)


def powm_crr(a: int, r: int, m: int, cap: int = 10**6) -> int:
    """a**r modulo an odd prime m through exponent residues and d-th roots.

    Equals the square-and-multiply value for every r.  Zero base follows
    the usual convention 0**0 = 1.
    """
    if m < 3 or not is_prime(m):
        raise ValueError(f"modulus must be an odd prime, got {m}")
    if not 0 <= a < m:
        raise ValueError("need 0 <= a < m")
    if a == 0:
        return 1 if r == 0 else 0
    return _unit_pow(a, r, m, m - 1, cap)


def powm_crr_period(a: int, m: int) -> int:
    """Observed period of the fractional powers of a; only a**(t/d) == 1 is
    promised about it."""
    gps = good_primes(m)
    if m <= _SCAN_TABLE_CUTOVER:
        return _FracPowers(a, gps, 2 * m).period
    if not _HAVE_NUMBA:
        return _frac_power_table(a, gps, 2 * m)[0]
    ptab, upow, _ = _power_prefixes(a, gps)
    return _find_period(a, gps, ptab, upow)


def crr_power_block(m: int, a_values, r_count: int) -> np.ndarray:
    """Matrix of a**r (rows: bases, columns: r < r_count) computed through
    the exponent-residue route in bulk; the batch twin of powm_crr."""
    if m < 3 or not is_prime(m):
        raise ValueError(f"modulus must be an odd prime, got {m}")
    gps = good_primes(m)
    a_vec = np.asarray(a_values, dtype=np.int64)
    if np.any((a_vec <= 0) | (a_vec >= m)):
        raise ValueError("bases must lie in [1, m)")
    V = len(a_vec)
    x_max = 2 * m
    xs = np.arange(x_max + 1, dtype=np.int64)
    u_idx = []
    u_num = xs.copy()
    for di, td in zip(gps.d_list, gps.tilde):
        ui = xs * invmod(td % di, di) % di
        u_idx.append(ui)
        u_num = u_num - ui * td
    uq, ur = np.divmod(u_num, gps.d)
    if np.any(ur) or np.any((uq < -gps.k) | (uq > 2)):
        raise InvariantViolation("exponent residue split failed")
    a_inv = _vec_powmod(a_vec, m - 2, m)
    upow = np.empty((V, gps.k + 3), dtype=np.int64)
    upow[:, gps.k] = 1
    for e in range(1, 3):
        upow[:, gps.k + e] = upow[:, gps.k + e - 1] * a_vec % m
    for e in range(1, gps.k + 1):
        upow[:, gps.k - e] = upow[:, gps.k - e + 1] * a_inv % m
    T = upow[:, uq + gps.k]
    for i, di in enumerate(gps.d_list):
        roots = _vec_powmod(a_vec, invmod(di % (m - 1), m - 1), m)
        ptab = np.empty((V, di), dtype=np.int64)
        ptab[:, 0] = 1
        for e in range(1, di):
            ptab[:, e] = ptab[:, e - 1] * roots % m
        T = T * ptab[:, u_idx[i]] % m
    first_one = np.argmax(T[:, 1:] == 1, axis=1)
    if np.any(T[np.arange(V), first_one + 1] != 1):
        raise PeriodNotFound("a base had no fractional-power collision")
    periods = first_one.astype(np.int64) + 1
    r_idx = (np.arange(r_count, dtype=np.int64)[None, :] * gps.d) % periods[:, None]
    return np.take_along_axis(T, r_idx, axis=1)


def powm_composite(a: int, r: int, m: int, cap: int = 10**6) -> int:
    """a**r rem m for any m >= 1: prime-power split, p-adic handling of
    non-units, exponent-residue powering of units, classical recombination."""
    if m < 1:
        raise ValueError("modulus must be >= 1")
    if m == 1:
        return 0
    if not 0 <= a < m:
        raise ValueError("need 0 <= a < m")
    comp_mods = []
    comp_vals = []
    for p, e in sorted(_factorize(m).items()):
        pe = p**e
        a_pe = a % pe
        if r == 0:
            val = 1 % pe
        elif a_pe == 0:
            val = 0
        else:
            u = 0
            reduced = a_pe
            while reduced % p == 0:
                reduced //= p
                u += 1
            if u and u * r >= e:
                val = 0
            elif pe == 2:
                val = 1
            else:
                phi = (p - 1) * p ** (e - 1)
                unit = _unit_pow(reduced, r, pe, phi, cap)
                val = powmod(p, u * r, pe) * unit % pe if u else unit
        comp_mods.append(pe)
        comp_vals.append(val)
    return rec_plus(comp_vals, comp_mods)


def generator(m: int) -> int:
    """Least generator of the multiplicative group modulo a prime."""
    if m == 2:
        return 1
    for g in range(2, m):
        if order(g, m) == m - 1:
            return g
    raise InvariantViolation(f"no generator modulo {m}")


@dataclass(frozen=True)
class IndepSeq:
    """A maximal-order element g plus independent companions of prime-power
    order; the combined power map is a bijection onto the unit group."""

    m: int
    g: int
    t: int
    gens: tuple[int, ...]
    exps: tuple[int, ...]

    @property
    def generating_set(self) -> tuple[int, ...]:
        """Repeated squares of the generators: subset products reach everything."""
        out = [powmod(self.g, 1 << j, self.m) for j in range(bitlen(self.t))]
        for g_i, t_i in zip(self.gens, self.exps):
            out.extend(powmod(g_i, 1 << j, self.m) for j in range(bitlen(t_i)))
        return tuple(out)

    def decompose(self, a: int) -> tuple[int, ...]:
        """Subset of the generating set whose product is a."""
        if not 0 < a < self.m:
            raise ValueError("need 0 < a < m")
        if self.m == 2:
            return ()
        e = dlog_table(self.m, self.g)[a]
        xs = self.generating_set
        return tuple(xs[j] for j in range(bitlen(self.t)) if (e >> j) & 1)


@lru_cache(maxsize=32)
def dlog_table(m: int, g: int) -> dict[int, int]:
    """Discrete logs of every unit to base g (g a generator), as one table."""
    table: dict[int, int] = {}
    v = 1
    for e in range(m - 1):
        table.setdefault(v, e)
        v = v * g % m
    return table


def indep_seq(m: int, threshold: int = 2) -> IndepSeq:
    """Maximal-order element with independent prime-power companions.

    For a prime modulus the maximal-order element alone spans the whole
    group (asserted here by an exhaustive image count), so the companion
    sequence comes out empty; the threshold constrains companions only.
    """
    if threshold < 2:
        raise ValueError("threshold must be >= 2")
    if m == 2:
        return IndepSeq(2, 1, 1, (), ())
    g = 1
    t_best = 1
    for cand in range(2, m):
        t = order(cand, m)
        if t > t_best:
            g, t_best = cand, t
        if t_best == m - 1:
            break
    image = set()
    v = 1
    for _ in range(t_best):
        image.add(v)
        v = v * g % m
    if len(image) != m - 1:
        raise InvariantViolation(
            f"maximal order {t_best} does not span the group modulo {m}"
        )
    return IndepSeq(m, g, t_best, (), ())


def vanishing_poly(m: int, p: int, a: int) -> list[list[int]]:
    """Coefficient rows C[i] (i <= p) of the expanded products of shifted
    linear factors, read off n-bit blocks of one big integer product.

    Requires order(a) == p.  Row i holds the coefficients of
    prod_{j<i}(x + alpha_j) with alpha_j = (-a**j) rem m; row p reduces
    modulo m to x**p - 1.
    """
    if order(a, m) != p:
        raise OrderMismatch(f"order of {a} modulo {m} is not {p}")
    n = p * bitlen(m)
    mask = (1 << n) - 1
    alphas = [(-powmod(a, j, m)) % m for j in range(p)]
    rows = [[1]]
    big = 1
    for i in range(1, p + 1):
        big *= (1 << n) + alphas[i - 1]
        row = []
        v = big
        for _ in range(i + 1):
            row.append(v & mask)
            v >>= n
        if v:
            raise InvariantViolation("coefficient overflowed its block")
        rows.append(row)
    return rows
