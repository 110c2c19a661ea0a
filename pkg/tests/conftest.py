import os
import random

import pytest

SEED = int(os.environ.get("CRR_ARITH_SEED", "20260809"))


@pytest.fixture
def rng():
    return random.Random(SEED)


def random_prime(rng, lo: int, hi: int, odd: bool = True) -> int:
    from crrarith.primes import is_prime

    while True:
        p = rng.randrange(lo, hi)
        if odd:
            p |= 1
        if is_prime(p) and (not odd or p > 2):
            return p


def random_odd_basis(rng, count: int, lo: int = 3, hi: int = 1 << 14) -> tuple[int, ...]:
    """Distinct odd primes, ascending."""
    out: set[int] = set()
    while len(out) < count:
        out.add(random_prime(rng, lo, hi))
    return tuple(sorted(out))
