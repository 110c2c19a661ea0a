"""Arbitrary-precision naturals and the schoolbook verification oracle.

Naturals are plain Python ints (non-negative); all external contracts are
in bits.  The oracle operations recompute products and quotients limb by
limb so that every residue-side computation in this library can be checked
against an arithmetic path that shares no code with it.
"""

from __future__ import annotations

from .errors import DivisorZero

Nat = int

LT, EQ, GT = -1, 0, 1

_LIMB_BITS = 32
_LIMB_MASK = (1 << _LIMB_BITS) - 1


def _check_nat(a: int) -> int:
    if not isinstance(a, int) or a < 0:
        raise ValueError(f"not a natural number: {a!r}")
    return a


def bitlen(a: Nat) -> int:
    """Least n with a < 2**n; bitlen(0) == 0."""
    return _check_nat(a).bit_length()


def add(a: Nat, b: Nat) -> Nat:
    return _check_nat(a) + _check_nat(b)


def cmp_nat(a: Nat, b: Nat) -> int:
    """Total order on naturals: one of LT, EQ, GT."""
    _check_nat(a)
    _check_nat(b)
    if a < b:
        return LT
    if a > b:
        return GT
    return EQ


def _limbs(a: int) -> list[int]:
    """Little-endian base-2**32 digits; [] for zero."""
    out = []
    while a:
        out.append(a & _LIMB_MASK)
        a >>= _LIMB_BITS
    return out


def _from_limbs(limbs: list[int]) -> int:
    v = 0
    for d in reversed(limbs):
        v = (v << _LIMB_BITS) | d
    return v


def oracle_mul(a: Nat, b: Nat) -> Nat:
    """Exact product by schoolbook long multiplication over 32-bit limbs.

    Independent oracle: must not be routed through any residue-side code.
    """
    _check_nat(a)
    _check_nat(b)
    if a == 0 or b == 0:
        return 0
    xs = _limbs(a)
    ys = _limbs(b)
    acc = [0] * (len(xs) + len(ys))
    for i, x in enumerate(xs):
        carry = 0
        for j, y in enumerate(ys):
            cur = acc[i + j] + x * y + carry
            acc[i + j] = cur & _LIMB_MASK
            carry = cur >> _LIMB_BITS
        k = i + len(ys)
        while carry:
            cur = acc[k] + carry
            acc[k] = cur & _LIMB_MASK
            carry = cur >> _LIMB_BITS
            k += 1
    return _from_limbs(acc)


def oracle_divmod(y: Nat, x: Nat) -> tuple[Nat, Nat]:
    """Long division: returns (q, r) with y == q*x + r and r < x."""
    _check_nat(y)
    _check_nat(x)
    if x == 0:
        raise DivisorZero("division by zero")
    if y < x:
        return 0, y
    if x <= _LIMB_MASK:
        # short division, one limb at a time
        q_limbs = []
        rem = 0
        for d in reversed(_limbs(y)):
            cur = (rem << _LIMB_BITS) | d
            q_limbs.append(cur // x)
            rem = cur % x
        q_limbs.reverse()
        return _from_limbs(q_limbs), rem
    # binary long division for wide divisors
    q = 0
    rem = 0
    for i in range(y.bit_length() - 1, -1, -1):
        rem = (rem << 1) | ((y >> i) & 1)
        if rem >= x:
            rem -= x
            q |= 1 << i
    return q, rem


def nat_to_dec(a: Nat) -> str:
    return str(_check_nat(a))


def nat_to_hex(a: Nat) -> str:
    """Lower-case hex without prefix; no leading zeros except "0"."""
    return format(_check_nat(a), "x")


def nat_from_dec(s: str) -> Nat:
    if not s.isdigit() or (len(s) > 1 and s[0] == "0"):
        raise ValueError(f"not a canonical decimal natural: {s!r}")
    return int(s, 10)


def nat_from_hex(s: str) -> Nat:
    t = s.removeprefix("0x")
    if not t or t.strip("0123456789abcdef") or (len(t) > 1 and t[0] == "0"):
        raise ValueError(f"not a canonical lower-case hex natural: {s!r}")
    return int(t, 16)


def nat_from_str(s: str) -> Nat:
    """Parse decimal, or hex when prefixed with 0x."""
    if s.startswith("0x"):
        return nat_from_hex(s)
    return nat_from_dec(s)
