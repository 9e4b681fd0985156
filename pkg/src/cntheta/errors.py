"""Exception hierarchy.

Every error a caller can provoke with a bad input derives from
:class:`DomainError`; the CLI maps those to exit code 1.
"""


class DomainError(ValueError):
    """Input lies outside the region where a formula applies."""


class NotSquarefree(DomainError):
    pass


class BadPrimeFactor(DomainError):
    """A prime p = 3 (mod 4) divides the input."""


class FourDividesN(DomainError):
    pass


class NoRoot(DomainError):
    """No square root of -1 exists for the requested modulus."""


class NonPositiveInput(DomainError):
    pass


class NonPositiveIm(DomainError):
    """A theta series was asked for at a point with Im(tau) <= 0."""


class OutOfDomain(DomainError):
    pass


class VanishingLValue(DomainError):
    """The Sha formula was requested for a curve whose L-value vanishes."""


class PreconditionViolated(DomainError):
    pass


class AllCoefficientsBelowThreshold(DomainError):
    """Every Cauchy coefficient was below threshold, even after escalation."""
