"""Exception types shared by all quadcoset modules.

Every precondition violation raises a subclass of :class:`QuadCosetError`
whose class name identifies the violated precondition; the CLI maps these
to exit code 2.  Internal consistency failures raise
:class:`InternalCheckError` (exit code 1).
"""


class QuadCosetError(Exception):
    """Base class for precondition violations."""


class SingularGram(QuadCosetError):
    """Gram matrix has determinant zero."""


class NotComplete(QuadCosetError):
    """Constant term of the polynomial is not Q(v) for the solved shift."""


class NotPositiveDefinite(QuadCosetError):
    """Gram matrix is not positive definite."""


class NotUnimodular(QuadCosetError):
    """Change-of-basis matrix does not have determinant +-1."""


class NotPrimitive(QuadCosetError):
    """Values of the coset do not generate the unit ideal."""


class NotReduced(QuadCosetError):
    """Coset does not satisfy the Minkowski reduction invariants."""


class NotIntegralLattice(QuadCosetError):
    """Lattice norm ideal is not contained in the integers."""


class DenominatorAtP(QuadCosetError):
    """Gram entries have denominators divisible by the working prime."""


class PrimeDividesNorm(QuadCosetError):
    """The working prime divides the lattice norm ideal."""


class PrimeDividesConductor(QuadCosetError):
    """The working prime divides the coset conductor."""


class EvenPrime(QuadCosetError):
    """Operation is defined for odd primes only."""


class BehavesWellAtP(QuadCosetError):
    """Descent requires a coset that does not behave well at the prime."""


class InternalCheckError(AssertionError):
    """A quantity the theory guarantees failed to hold; indicates a bug."""
