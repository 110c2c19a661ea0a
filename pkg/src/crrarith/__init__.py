"""Exact arithmetic in Chinese remainder representation.

Residue bases with computable rank/approximation/extension shadows, the
bit-extraction reconstruction procedure, division of big naturals by
small primes, prime supply, and modular powering through residue-coded
exponents; everything validated against a schoolbook bignum oracle.
"""

from .crr import (
    PrimeBasis,
    Residues,
    Shadow,
    add,
    basis_extend,
    extend,
    from_nat,
    half_odd,
    mul,
    rank,
    same_basis_mul,
    scale_extend,
    shadow,
    stabilized,
)
from .dyadic import Dyadic
from .groups import (
    GoodPrimeSet,
    IndepSeq,
    bad_primes,
    crr_power_block,
    exp_frac,
    generator,
    good_primes,
    indep_seq,
    lcm_order_element,
    order,
    power_order,
    powm_composite,
    powm_crr,
    powm_crr_period,
    powmod,
    root_d,
    vanishing_poly,
    verify_power_grid,
)
from .natnum import (
    EQ,
    GT,
    LT,
    Nat,
    add as nat_add,
    bitlen,
    cmp_nat,
    nat_from_str,
    nat_to_dec,
    nat_to_hex,
    oracle_divmod,
    oracle_mul,
)
from .pipeline import ProductTable, choose_basis, div, imul, imulm_via_generator, imulm_via_indep
from .primes import PrimeGrid, PrimeTable, basis_for_bits, build_grid, is_prime, mertens_mass, prime_mass, sieve
from .reconstruct import RecTrace, rec, rec_batch, rec_lcm, rec_plus, rec_round_trip
from .seqcode import SeqCode, decode, encode
from .smallmod import (
    divmod_small,
    invmod,
    mulmod,
    pow2_quotient,
    prod_mod_loop,
    prod_mod_prefixes,
    rem_small,
)

__version__ = "0.1.0"
