"""Residue-to-binary reconstruction.

Two routes:

* ``rec`` extracts the bits of the represented value by repeated exact
  halving, entirely in residue arithmetic.  Each halving multiplies by the
  residue form of (1 + prod(row))/2 for a fresh row of auxiliary primes,
  then strips the auxiliary part; the bit b_t falls out of y_t - 2*y_{t+1},
  which is provably the residue form of one of -1, 0, 1, 2.
* ``rec_plus`` is the classical weighted-sum reconstruction for arbitrary
  pairwise-coprime moduli (big multiply/divide; not the low-depth path),
  generalized by ``rec_lcm`` to arbitrary moduli.

All per-step constants of ``rec`` depend only on the basis and are cached
in a plan; the per-value work is int64 vector arithmetic, so a batch of
residue vectors reconstructs in one pass.  Ranks are taken at the
stabilization precision of each intermediate basis via exact base-2**32
long division.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import gcd

import numpy as np

from .crr import PrimeBasis, Residues, Shadow, from_nat, shadow
from .dyadic import Dyadic
from .errors import (
    EmptyBasis,
    EvenBasis,
    Inconsistent,
    InvariantViolation,
    LengthBound,
    NotPairwiseCoprime,
    RangeError,
)
from .natnum import bitlen
from .primes import PrimeGrid, build_grid
from .smallmod import invmod

#: rec supports desk-scale moduli only; int64 kernels need headroom
_MAX_CHANNEL_MOD = 1 << 25


def _inv_any(a: int, m: int) -> int:
    g, x, _ = _ext_gcd(a % m, m)
    if g != 1:
        raise NotPairwiseCoprime(f"gcd({a}, {m}) = {g}")
    return x % m


def _ext_gcd(a: int, b: int) -> tuple[int, int, int]:
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    return a, x0, y0


# ---------------------------------------------------------------------------
# per-basis plan


@dataclass(frozen=True)
class _Step:
    row: tuple[int, ...]
    half: np.ndarray  # residues of the exact half of 1 + prod(row), on the row
    mods_b: np.ndarray  # moduli of the working basis before this extension
    h_b: np.ndarray  # cached inverses for the working basis
    n_b: int  # stabilization precision of the working basis
    probe_coeff: np.ndarray  # (l, C) extension coefficients per new prime
    probe_total: np.ndarray  # (l,) product of the working basis mod new prime
    half_ext: np.ndarray  # e(row; half; c) for every channel of the extended basis
    # strip-auxiliary data (grid prefix before this step)
    mods_g: np.ndarray
    h_g: np.ndarray
    n_g: int
    y_coeff: np.ndarray  # (k, tl) extension coefficients grid -> basis prime
    y_total: np.ndarray  # (k,) product of grid prefix mod basis prime
    y_inv: np.ndarray  # (k,) inverse of that product


@dataclass(frozen=True)
class _Plan:
    basis: PrimeBasis
    s: int
    grid: PrimeGrid
    steps: tuple[_Step, ...]  # s entries drive extensions; entry s strips only
    final_mods: np.ndarray


def _skip_mod(mods: list[int], a: int) -> tuple[list[int], int]:
    k = len(mods)
    pre = [1] * (k + 1)
    for i, m in enumerate(mods):
        pre[i + 1] = pre[i] * (m % a) % a
    suf = [1] * (k + 1)
    for i in range(k - 1, -1, -1):
        suf[i] = suf[i + 1] * (mods[i] % a) % a
    return [pre[i] * suf[i + 1] % a for i in range(k)], pre[k]


def _grid_step_data(k: int, mods_m: list[int], mods_g: list[int], h_g: list[int]):
    y_coeff = np.zeros((k, len(mods_g)), dtype=np.int64)
    y_total = np.zeros(k, dtype=np.int64)
    y_inv = np.zeros(k, dtype=np.int64)
    for i, m in enumerate(mods_m):
        skip, total = _skip_mod(mods_g, m)
        y_coeff[i] = [h * c % m for h, c in zip(h_g, skip)]
        y_total[i] = total
        y_inv[i] = _inv_any(total, m)
    return y_coeff, y_total, y_inv


@lru_cache(maxsize=64)
def _plan_for(basis: PrimeBasis) -> _Plan:
    if basis.k == 0:
        raise EmptyBasis("cannot reconstruct on an empty basis")
    if 2 in basis.moduli:
        raise EvenBasis("reconstruction requires an odd basis")
    grid = build_grid(basis)
    s = grid.s
    top = max(max(basis.moduli), max(grid.all_primes))
    if top >= _MAX_CHANNEL_MOD:
        raise RangeError(f"modulus {top} beyond the supported reconstruction scale")
    mods_m = list(basis.moduli)
    k = basis.k

    mods_b = list(basis.moduli)
    h_b = list(basis.h)
    mass_b = basis.mass
    mods_g: list[int] = []
    h_g: list[int] = []
    mass_g = 0

    if len(mods_b) * top * top >= 1 << 62:
        raise RangeError("basis too wide for int64 reconstruction kernels")

    steps = []
    for t in range(s):
        row = grid.rows[t]
        l = len(row)
        half_basis = PrimeBasis.of(row)
        half_vals = tuple(invmod(2, p) for p in row)
        half_res = Residues(half_basis, half_vals)
        r_half = shadow(half_res).r

        n_b = bitlen(len(mods_b)) + 2 + mass_b
        probe_coeff = np.zeros((l, len(mods_b)), dtype=np.int64)
        probe_total = np.zeros(l, dtype=np.int64)
        base_mod_row = []  # [B_t] rem a per new prime, reused for fresh h
        for j, a in enumerate(row):
            skip, total = _skip_mod(mods_b, a)
            probe_coeff[j] = [h * c % a for h, c in zip(h_b, skip)]
            probe_total[j] = total
            base_mod_row.append(total)

        y_data = _grid_step_data(k, mods_m, mods_g, h_g)

        # extension of the half vector to every channel of the extended basis
        ext_mods = mods_b + list(row)
        half_ext = np.zeros(len(ext_mods), dtype=np.int64)
        for c, mc in enumerate(ext_mods):
            if mc in half_basis.moduli:
                half_ext[c] = half_vals[row.index(mc)]
            else:
                skip, total = _skip_mod(list(row), mc)
                acc = 0
                for v, h, cf in zip(half_vals, half_basis.h, skip):
                    acc = (acc + v * (h * cf % mc)) % mc
                half_ext[c] = (acc - total * r_half) % mc

        steps.append(
            _Step(
                row=row,
                half=np.asarray(half_vals, dtype=np.int64),
                mods_b=np.asarray(mods_b, dtype=np.int64),
                h_b=np.asarray(h_b, dtype=np.int64),
                n_b=n_b,
                probe_coeff=probe_coeff,
                probe_total=probe_total,
                half_ext=half_ext,
                mods_g=np.asarray(mods_g, dtype=np.int64),
                h_g=np.asarray(h_g, dtype=np.int64),
                n_g=bitlen(len(mods_g)) + 2 + mass_g,
                y_coeff=y_data[0],
                y_total=y_data[1],
                y_inv=y_data[2],
            )
        )

        # update cached inverses for the extended bases
        for c, mc in enumerate(mods_b):
            rowprod = 1
            for p in row:
                rowprod = rowprod * (p % mc) % mc
            h_b[c] = h_b[c] * _inv_any(rowprod, mc) % mc
        for c, mc in enumerate(mods_g):
            rowprod = 1
            for p in row:
                rowprod = rowprod * (p % mc) % mc
            h_g[c] = h_g[c] * _inv_any(rowprod, mc) % mc
        row_skip = {}
        for j, a in enumerate(row):
            skip, _ = _skip_mod(list(row), a)
            row_skip[a] = skip[j]
        old_grid = list(mods_g)
        for j, a in enumerate(row):
            h_new = _inv_any(base_mod_row[j] * row_skip[a] % a, a)
            mods_b.append(a)
            h_b.append(h_new)
            # for the grid basis the product excludes the basis primes
            g_part = 1
            for m in old_grid:
                g_part = g_part * (m % a) % a
            h_g.append(_inv_any(g_part * row_skip[a] % a, a))
            mods_g.append(a)
        row_mass = sum(bitlen(p) for p in row)
        mass_b += row_mass
        mass_g += row_mass
        if len(mods_b) * top * top >= 1 << 62:
            raise RangeError("extended basis too wide for int64 kernels")

    y_data = _grid_step_data(k, mods_m, mods_g, h_g)
    steps.append(
        _Step(
            row=(),
            half=np.zeros(0, dtype=np.int64),
            mods_b=np.asarray(mods_b, dtype=np.int64),
            h_b=np.asarray(h_b, dtype=np.int64),
            n_b=bitlen(len(mods_b)) + 2 + mass_b,
            probe_coeff=np.zeros((0, len(mods_b)), dtype=np.int64),
            probe_total=np.zeros(0, dtype=np.int64),
            half_ext=np.zeros(0, dtype=np.int64),
            mods_g=np.asarray(mods_g, dtype=np.int64),
            h_g=np.asarray(h_g, dtype=np.int64),
            n_g=bitlen(len(mods_g)) + 2 + mass_g,
            y_coeff=y_data[0],
            y_total=y_data[1],
            y_inv=y_data[2],
        )
    )
    return _Plan(
        basis=basis,
        s=s,
        grid=grid,
        steps=tuple(steps),
        final_mods=np.asarray(mods_b, dtype=np.int64),
    )


# ---------------------------------------------------------------------------
# exact batched rank at a 32-bit-aligned precision >= the stabilized one


def _batch_rank(values: np.ndarray, h: np.ndarray, mods: np.ndarray, n: int) -> np.ndarray:
    """floor(2**-n' * sum_c ceil(2**n' * v_c * h_c / m_c)) with n' = n rounded
    up to a multiple of 32 (the rank is constant above stabilization)."""
    if values.shape[1] == 0:
        return np.zeros(values.shape[0], dtype=np.int64)
    nch = -(-n // 32)
    v = values * h
    q0 = v // mods
    rem = v - q0 * mods
    total = q0.sum(axis=1)
    carry = np.zeros(values.shape[0], dtype=np.int64)
    digit_sums = []
    for _ in range(nch):
        cur = rem << 32
        d = cur // mods
        rem = cur - d * mods
        digit_sums.append(d.sum(axis=1))
    digit_sums[-1] += (rem > 0).sum(axis=1)  # ceiling adjustment
    for j in range(nch - 1, -1, -1):
        carry = (digit_sums[j] + carry) >> 32
    return total + carry


def _batch_extend(
    values: np.ndarray, coeff: np.ndarray, total: int, a: int, r: np.ndarray
) -> np.ndarray:
    acc = values @ coeff
    return (acc - total * r) % a


# ---------------------------------------------------------------------------
# traces


@dataclass(frozen=True)
class RecStepTrace:
    t: int
    b: int | None  # None on the final strip-only step
    w_channels: tuple[int, ...]
    w_values: tuple[int, ...]
    y: Residues
    z: tuple[int, ...] | None
    xi_y: Dyadic | None


@dataclass(frozen=True)
class RecTrace:
    s: int
    grid: PrimeGrid
    steps: tuple[RecStepTrace, ...]
    bits: tuple[int, ...]


def _shadow_arrays(values, h, mods, n) -> Shadow:
    S = 0
    for v, hh, m in zip(values.tolist(), h.tolist(), mods.tolist()):
        t = (v * hh) << n
        S += -(-t // m)
    return Shadow(S, S >> n, Dyadic(S & ((1 << n) - 1), n), n)


def _rec_core(plan: _Plan, W: np.ndarray, collect):
    """Shared driver: runs the halving loop over a (V, k) batch.

    ``collect`` is None for plain batches, else a callback receiving
    (t, W_before, Y_t) used by the traced single-vector path.
    """
    basis = plan.basis
    k = basis.k
    mods_m = np.asarray(basis.moduli, dtype=np.int64)
    V = W.shape[0]
    ys = []
    for t in range(plan.s + 1):
        st = plan.steps[t]
        # strip the auxiliary primes: y_t = (w|m - extension of w|grid) / [grid]
        if t == 0:
            Y = W.copy()
        else:
            WG = W[:, k:]
            rG = _batch_rank(WG, st.h_g, st.mods_g, st.n_g)
            Y = np.empty((V, k), dtype=np.int64)
            for i in range(k):
                m = int(mods_m[i])
                e_i = _batch_extend(WG, st.y_coeff[i], int(st.y_total[i]), m, rG)
                Y[:, i] = (W[:, i] - e_i) * int(st.y_inv[i]) % m
        ys.append(Y)
        if collect is not None:
            collect(t, W, Y)
        if t == plan.s:
            break
        # extend w to the next row and fold in the half factor
        rB = _batch_rank(W, st.h_b, st.mods_b, st.n_b)
        l = len(st.row)
        new_cols = np.empty((V, l), dtype=np.int64)
        for j, a in enumerate(st.row):
            new_cols[:, j] = _batch_extend(
                W, st.probe_coeff[j], int(st.probe_total[j]), int(a), rB
            )
        W = np.concatenate([W, new_cols], axis=1)
        ext_mods = plan.steps[t + 1].mods_b
        W = W * st.half_ext % ext_mods

    if not np.all(ys[plan.s] == 0):
        raise InvariantViolation("auxiliary strip did not terminate at zero")

    bits = np.empty((plan.s, V), dtype=np.int64)
    zs = []
    for t in range(plan.s):
        Z = (ys[t] - 2 * ys[t + 1]) % mods_m
        zs.append(Z)
        is_neg1 = np.all(Z == mods_m - 1, axis=1)
        b = np.where(is_neg1, -1, Z[:, 0])
        ok = is_neg1 | np.all(Z == b[:, None] % mods_m, axis=1)
        if not np.all(ok):
            raise InvariantViolation("step difference is not a constant vector")
        if not np.all((b >= -1) & (b <= 2)):
            raise InvariantViolation("extracted bit outside {-1, 0, 1, 2}")
        if k == 1 and basis.moduli[0] == 3 and not np.all((b == 0) | (b == 1)):
            # on the degenerate basis <3> the -1/2 ambiguity must not arise
            raise InvariantViolation("degenerate basis produced a non-{0,1} bit")
        bits[t] = b

    if plan.s < 62:
        vals = np.zeros(V, dtype=np.int64)
        for t in range(plan.s - 1, -1, -1):
            vals = 2 * vals + bits[t]
        values = vals
    else:
        acc = [0] * V
        for t in range(plan.s - 1, -1, -1):
            for i in range(V):
                acc[i] = 2 * acc[i] + int(bits[t, i])
        values = np.array(acc, dtype=object)

    if np.any(values < 0):
        raise InvariantViolation("reconstructed a negative value")
    if plan.s < 62:
        too_big = bool(np.any(values >> np.int64(basis.mass)))
    else:
        too_big = any(v >> basis.mass for v in values)
    if too_big:
        raise InvariantViolation("reconstructed value exceeds 2**mass")
    return values, bits, ys, zs


def rec_batch(basis: PrimeBasis, vectors: np.ndarray) -> np.ndarray:
    """Reconstruct every row of a (V, k) residue matrix at once."""
    plan = _plan_for(basis)
    W = np.ascontiguousarray(np.asarray(vectors, dtype=np.int64))
    if W.ndim != 2 or W.shape[1] != basis.k:
        raise ValueError("vectors must be (V, k)")
    values, _, _, _ = _rec_core(plan, W, None)
    return values


def rec(x: Residues, verify_windows: bool = False) -> tuple[int, RecTrace]:
    """Bit-extraction reconstruction of a residue vector on an odd prime basis.

    Returns the unique natural below 2**mass with these residues, plus the
    step trace.  With ``verify_windows`` the exact dyadic error windows of
    the halving analysis are recomputed and asserted at every step.
    """
    plan = _plan_for(x.basis)
    basis = x.basis
    W = np.asarray(x.values, dtype=np.int64)[None, :]
    collected: list[tuple[int, np.ndarray, np.ndarray]] = []

    def collect(t, Wt, Yt):
        collected.append((t, Wt[0].copy(), Yt[0].copy()))

    values, bits, ys, zs = _rec_core(plan, W, collect)
    value = int(values[0])

    n = basis.n_star
    xi_x = shadow(x, n).xi
    xi_one = shadow(Residues(basis, (1,) * basis.k), n).xi
    steps = []
    xi_list = []
    for t, wt, yt in collected:
        st = plan.steps[t]
        y_res = Residues(basis, tuple(int(v) for v in yt))
        xi_y = shadow(y_res, n).xi if verify_windows else None
        xi_list.append(xi_y)
        steps.append(
            RecStepTrace(
                t=t,
                b=int(bits[t, 0]) if t < plan.s else None,
                w_channels=tuple(int(m) for m in st.mods_b),
                w_values=tuple(int(v) for v in wt),
                y=y_res,
                z=tuple(int(v) for v in zs[t][0]) if t < plan.s else None,
                xi_y=xi_y,
            )
        )

    if verify_windows:
        _verify_windows(plan, basis, n, xi_x, xi_one, xi_list, bits[:, 0], collected)

    return value, RecTrace(
        s=plan.s,
        grid=plan.grid,
        steps=tuple(steps),
        bits=tuple(int(b) for b in bits[:, 0]),
    )


def _verify_windows(plan, basis, n, xi_x, xi_one, xi_list, bits, collected):
    """Exact-dyadic checks of the halving analysis along a traced run."""
    k = basis.k
    s = plan.s
    ulp_n = Dyadic(1, n)
    for t in range(s + 1):
        xi_y = xi_list[t]
        # decay window: xi(y_t) in [2^-t xi - (k 2^-n + xi(1)), 2^-t xi + (k 2^-n + 2^-2s)]
        ideal = xi_x.half_pow(t)
        lo = ideal - (ulp_n.scale_int(k) + xi_one)
        hi = ideal + (ulp_n.scale_int(k) + Dyadic(1, 2 * s))
        if not (lo <= xi_y <= hi):
            raise InvariantViolation(f"xi decay window violated at step {t}")
    for t in range(s):
        # step identity: xi(y_t) = 2 xi(y_{t+1}) + b_t xi(1) within 3k 2^-n
        lhs = xi_list[t]
        rhs = xi_list[t + 1] + xi_list[t + 1] + xi_one.scale_int(int(bits[t]))
        diff = lhs - rhs
        bound = ulp_n.scale_int(3 * k)
        if not (-bound <= diff <= bound):
            raise InvariantViolation(f"bit-step identity violated at step {t}")
    # product windows: xi multiplies within 2^-n' (k+l) at each half-fold
    for t in range(s):
        st = plan.steps[t]
        nxt = plan.steps[t + 1]
        n2 = nxt.n_b
        w_t = collected[t][1]
        w_t1 = collected[t + 1][1]
        xi_w = _shadow_arrays(w_t, st.h_b, st.mods_b, n2).xi
        half_basis = PrimeBasis.of(st.row)
        xi_half = shadow(Residues(half_basis, tuple(int(v) for v in st.half)), n2).xi
        xi_w1 = _shadow_arrays(w_t1, nxt.h_b, nxt.mods_b, n2).xi
        diff = xi_w1 - xi_w * xi_half
        bound = Dyadic(len(st.mods_b) + len(st.row), n2)
        if not (-bound <= diff <= bound):
            raise InvariantViolation(f"product window violated at step {t}")


def rec_round_trip(x_value: int, basis: PrimeBasis) -> int:
    """rec applied to the residues of a short-enough natural returns it."""
    if bitlen(x_value) >= basis.reduced_mass:
        raise LengthBound(
            f"bitlen {bitlen(x_value)} not below capacity {basis.reduced_mass}"
        )
    value, _ = rec(from_nat(x_value, basis))
    if value != x_value:
        raise InvariantViolation(f"round trip returned {value} for {x_value}")
    return value


# ---------------------------------------------------------------------------
# classical reconstruction


def rec_plus(values, moduli) -> int:
    """Classical weighted reconstruction: the unique X below prod(moduli)
    with the given residues.  Pairwise-coprime moduli; primality not needed.

    Big multiply/divide via the schoolbook oracle; not the low-depth route.
    """
    from .natnum import oracle_divmod, oracle_mul

    values = [int(v) for v in values]
    moduli = [int(m) for m in moduli]
    if len(values) != len(moduli):
        raise ValueError("values and moduli differ in length")
    for m in moduli:
        if m == 0:
            raise NotPairwiseCoprime("zero modulus")
    k = len(moduli)
    for i in range(k):
        for j in range(i + 1, k):
            if gcd(moduli[i], moduli[j]) != 1:
                raise NotPairwiseCoprime(f"gcd({moduli[i]}, {moduli[j]}) != 1")
    total = 1
    for m in moduli:
        total = oracle_mul(total, m)
    acc = 0
    for v, m in zip(values, moduli):
        rest = oracle_divmod(total, m)[0]
        weight = oracle_mul(_inv_any(oracle_divmod(rest, m)[1], m), rest)
        acc += oracle_mul(v, weight)
    return oracle_divmod(acc, total)[1]


@lru_cache(maxsize=16)
def _classical_weights(basis: PrimeBasis) -> tuple[tuple[int, ...], int]:
    k = basis.k
    pre = [1] * (k + 1)
    for i, m in enumerate(basis.moduli):
        pre[i + 1] = pre[i] * m
    suf = [1] * (k + 1)
    for i in range(k - 1, -1, -1):
        suf[i] = suf[i + 1] * basis.moduli[i]
    total = pre[k]
    weights = tuple(
        basis.h[i] * (pre[i] * suf[i + 1]) % total for i in range(k)
    )
    return weights, total


def classical_value(x: Residues) -> int:
    """rec_plus specialized to a prime basis: cached weights, native big-int
    arithmetic (the pipeline's bulk reconstruction; equal to rec_plus)."""
    weights, total = _classical_weights(x.basis)
    acc = 0
    for v, w in zip(x.values, weights):
        acc += v * w
    return acc % total


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


def rec_lcm(values, moduli) -> int:
    """Reconstruction over arbitrary moduli: the unique X below lcm(moduli)
    with the given residues, provided they are pairwise consistent."""
    values = [int(v) for v in values]
    moduli = [int(m) for m in moduli]
    for m in moduli:
        if m == 0:
            raise ValueError("zero modulus")
    k = len(moduli)
    for i in range(k):
        for j in range(i + 1, k):
            g = gcd(moduli[i], moduli[j])
            if (values[i] - values[j]) % g:
                raise Inconsistent(
                    f"residues {values[i]}, {values[j]} clash modulo gcd {g}"
                )
    powers: dict[int, tuple[int, int]] = {}  # p -> (e, channel)
    for i, m in enumerate(moduli):
        for p, e in _factorize(m).items():
            if p not in powers or e > powers[p][0]:
                powers[p] = (e, i)
    comp_mods = []
    comp_vals = []
    for p, (e, i) in sorted(powers.items()):
        pe = p**e
        comp_mods.append(pe)
        comp_vals.append(values[i] % pe)
    if not comp_mods:
        return 0
    return rec_plus(comp_vals, comp_mods)
