"""Command-line front end: batch products, modular powering, residue
encode/decode/trace, and benchmarking.  Exit codes: 0 ok, 1 internal
invariant violation, 2 usage error."""

from __future__ import annotations

import argparse
import json
import os
import random
import sys
import time

from . import seqcode
from .crr import PrimeBasis, Residues, from_nat, shadow
from .errors import CRRArithError, InvariantViolation
from .groups import powm_composite, powm_crr, powmod
from .natnum import nat_from_str, nat_to_hex, oracle_divmod, oracle_mul
from .pipeline import imul
from .primes import is_prime
from .reconstruct import rec

_SEED_ENV = "CRR_ARITH_SEED"


class _UsageError(Exception):
    pass


def _emit(value: int, fmt: str) -> None:
    if fmt == "hex":
        print(nat_to_hex(value))
    elif fmt == "json":
        print(json.dumps({"value": str(value)}))
    else:
        print(value)


def _parse_basis(spec: str) -> PrimeBasis:
    try:
        moduli = tuple(int(p) for p in spec.split(","))
    except ValueError as e:
        raise _UsageError(f"bad basis {spec!r}: {e}") from None
    if 2 in moduli:
        raise _UsageError("basis must be odd")
    if len(set(moduli)) != len(moduli):
        raise _UsageError("basis must not repeat primes")
    try:
        return PrimeBasis.of(moduli)
    except ValueError as e:
        raise _UsageError(str(e)) from None


def _cmd_imul(args) -> int:
    if args.infile:
        factors = seqcode.read_file(args.infile)
        if args.factors:
            raise _UsageError("give factors either inline or with --in, not both")
    else:
        factors = [nat_from_str(f) for f in args.factors]
    table = imul(
        factors,
        table=args.table,
        parallelism=args.parallel,
        reconstruction=args.path,
    )
    if args.outfile:
        seqcode.write_file(args.outfile, table.prefix_row)
    if args.table:
        print(
            json.dumps(
                {
                    "n": table.n,
                    "entries": {f"{u},{v}": str(x) for (u, v), x in sorted(table.entries.items())},
                }
            )
        )
    else:
        _emit(table.product, args.format)
    return 0


def _cmd_powm(args) -> int:
    a, r, m = (nat_from_str(s) for s in (args.a, args.r, args.m))
    if m < 1:
        raise _UsageError("modulus must be >= 1")
    if a >= m:
        raise _UsageError(f"base {a} must be below the modulus {m}")
    path = args.path
    if path == "auto":
        path = "crr" if m > 2 and is_prime(m) else "composite"
    if path == "crr":
        value = powm_crr(a, r, m, cap=args.sieve_cap)
    elif path == "composite":
        value = powm_composite(a, r, m, cap=args.sieve_cap)
    else:
        value = powmod(a, r, m)
    _emit(value, args.format)
    return 0


def _cmd_crr(args) -> int:
    basis = _parse_basis(args.basis)
    if args.action == "encode":
        x = nat_from_str(args.payload)
        print(",".join(str(v) for v in from_nat(x, basis).values))
        return 0
    try:
        values = tuple(int(v) for v in args.payload.split(","))
        residues = Residues(basis, values)
    except ValueError as e:
        raise _UsageError(str(e)) from None
    if args.action == "decode":
        _emit(rec(residues)[0], args.format)
        return 0
    # trace
    if args.precision is not None and args.precision < basis.n_star:
        raise _UsageError(
            f"precision override {args.precision} below stabilization {basis.n_star}"
        )
    _, trace = rec(residues, verify_windows=True)
    n = args.precision or basis.n_star
    for step in trace.steps:
        xi = shadow(step.y, n).xi
        print(
            json.dumps(
                {"t": step.t, "b": step.b, "xi_num": str(xi.num), "xi_prec": xi.prec}
            )
        )
    return 0


def _cmd_bench(args) -> int:
    rng = random.Random(args.seed)
    per_factor = max(1, args.bits // args.count)
    factors = [rng.getrandbits(per_factor) | 1 for _ in range(args.count)]
    t0 = time.perf_counter()
    table = imul(factors, parallelism=1)
    t_seq = time.perf_counter() - t0
    t0 = time.perf_counter()
    acc = 1
    for f in factors:
        acc = oracle_mul(acc, f)
    t_oracle = time.perf_counter() - t0
    report = {
        "bits": args.bits,
        "count": args.count,
        "parallel": args.parallel,
        "imul_seconds": round(t_seq, 6),
        "oracle_seconds": round(t_oracle, 6),
        "equal": table.product == acc,
    }
    if args.parallel > 1:
        t0 = time.perf_counter()
        table_par = imul(factors, parallelism=args.parallel)
        t_par = time.perf_counter() - t0
        report["parallel_seconds"] = round(t_par, 6)
        report["speedup"] = round(t_seq / t_par, 3) if t_par > 0 else None
        report["parallel_identical"] = table_par.prefix_row == table.prefix_row
    print(json.dumps(report))
    return 0


def _cmd_selftest(args) -> int:
    rng = random.Random(args.seed)
    checks = 0
    for _ in range(20):
        x = rng.getrandbits(rng.randrange(1, 512))
        m = 3
        while not is_prime(m):
            m = rng.randrange(3, 1 << 16) | 1
        from .smallmod import divmod_small

        assert divmod_small(x, m) == oracle_divmod(x, m)
        checks += 1
    for _ in range(10):
        items = [rng.getrandbits(16) for _ in range(rng.randrange(0, 8))]
        assert seqcode.decode(seqcode.encode(items)) == items
        checks += 1
    for _ in range(10):
        m = 3
        while not is_prime(m):
            m = rng.randrange(3, 1 << 10) | 1
        a, r = rng.randrange(0, m), rng.randrange(0, 4 * m)
        assert powm_crr(a, r, m) == powmod(a, r, m) == powm_composite(a, r, m)
        checks += 1
    for _ in range(5):
        fs = [rng.getrandbits(24) for _ in range(6)]
        acc = 1
        for f in fs:
            acc = oracle_mul(acc, f)
        assert imul(fs).product == acc
        checks += 1
    print(f"selftest ok ({checks} checks, seed {args.seed})")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="crrarith",
        description="exact residue-representation arithmetic toolkit",
    )
    parser.add_argument(
        "--format", choices=("dec", "hex", "json"), default="dec", help="scalar output format"
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("imul", help="iterated product of naturals")
    p.add_argument("factors", nargs="*", help="factors (decimal or 0x hex)")
    p.add_argument("--table", action="store_true", help="emit the full run table as JSON")
    p.add_argument("--path", choices=("auto", "bits", "classical"), default="auto")
    p.add_argument("--parallel", type=int, default=1)
    p.add_argument("--in", dest="infile", help="read factors from a sequence file")
    p.add_argument("--out", dest="outfile", help="write prefix products to a sequence file")
    p.set_defaults(func=_cmd_imul)

    p = sub.add_parser("powm", help="modular powering a^r rem m")
    p.add_argument("a")
    p.add_argument("r")
    p.add_argument("m")
    p.add_argument("--path", choices=("auto", "crr", "composite", "oracle"), default="auto")
    p.add_argument("--sieve-cap", type=int, default=10**6, help="prime search cap")
    p.set_defaults(func=_cmd_powm)

    p = sub.add_parser("crr", help="residue encode/decode/trace")
    p.add_argument("action", choices=("encode", "decode", "trace"))
    p.add_argument("--basis", required=True, help="comma-separated odd primes")
    p.add_argument("--precision", type=int, default=None)
    p.add_argument("payload", help="natural (encode) or comma-separated residues")
    p.set_defaults(func=_cmd_crr)

    p = sub.add_parser("bench", help="time the pipeline against the schoolbook oracle")
    p.add_argument("--bits", type=int, default=4096, help="total bits across factors")
    p.add_argument("--count", type=int, default=32, help="number of factors")
    p.add_argument("--parallel", type=int, default=1)
    p.add_argument("--seed", type=int, default=None)
    p.set_defaults(func=_cmd_bench)

    p = sub.add_parser("selftest", help="seeded randomized cross-checks")
    p.add_argument("--seed", type=int, default=None)
    p.set_defaults(func=_cmd_selftest)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if hasattr(args, "seed") and args.seed is None:
        args.seed = int(os.environ.get(_SEED_ENV, "20260809"))
    try:
        return args.func(args)
    except _UsageError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except ValueError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except (InvariantViolation, AssertionError) as e:
        print(f"internal invariant violated: {e}", file=sys.stderr)
        return 1
    except CRRArithError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
