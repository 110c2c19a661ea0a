"""Exception types shared across the library."""


class CRRArithError(Exception):
    """Base class for all library errors."""


class DivisorZero(CRRArithError):
    """Division by zero requested."""


class Malformed(CRRArithError):
    """A sequence code violates the ruler invariants."""


class LimitTooSmall(CRRArithError):
    """Sieve limit below 2."""


class NotCoprime(CRRArithError):
    """Operands required to be coprime are not."""


class EvenModulus(CRRArithError):
    """An odd modulus was required."""


class BasisMismatch(CRRArithError):
    """Residue vectors bound to different bases."""


class EvenBasis(CRRArithError):
    """A basis containing 2 where an odd basis is required."""


class EmptyBasis(CRRArithError):
    """A nonempty basis is required."""


class LengthBound(CRRArithError):
    """Input exceeds the length precondition of a reconstruction."""


class NotPairwiseCoprime(CRRArithError):
    """Moduli required to be pairwise coprime are not."""


class Inconsistent(CRRArithError):
    """Residues violate the pairwise congruence condition."""


class NotBijective(CRRArithError):
    """The power map for this exponent is not a bijection."""


class RangeError(CRRArithError):
    """Argument outside the supported range."""


class OrderMismatch(CRRArithError):
    """Element does not have the stated multiplicative order."""


class SupplyExhausted(CRRArithError):
    """Prime search hit its cap without satisfying the requirement."""


class PeriodNotFound(CRRArithError):
    """No period collision within the guaranteed window."""


class InvariantViolation(CRRArithError):
    """An internal invariant proven to hold was observed to fail (bug)."""
