"""Exception hierarchy for jordan-subdiff.

Validation problems derive from ``JordanError`` (a ``ValueError``); numerical
breakdown of the eigensolver is an ``EigensolverError``. The CLI maps the first
family to exit code 2 and the second to exit code 3.
"""


class JordanError(ValueError):
    """Base class for invalid inputs and violated preconditions."""


class DescriptorMismatch(JordanError):
    """Two elements (or an element and a frame) live in different algebras."""


class NonCommuting(JordanError):
    """The elements do not operator commute, so no common Jordan frame exists."""


class NotIdempotent(JordanError):
    """An element expected to satisfy c∘c = c does not."""


class NotEigenIdempotent(JordanError):
    """An element is not a primitive idempotent with x∘c = σc."""


class DomainViolation(JordanError):
    """A point lies outside the domain of the function being queried."""


class EmptySubdifferential(JordanError):
    """The queried subdifferential is empty, so its distance to 0 is +inf."""


class NotASubgradient(JordanError):
    """A vector is not a member of the requested subdifferential."""


class InsufficientSamples(JordanError):
    """Too few accepted samples to fit a KL exponent."""


class SizeCapExceeded(JordanError):
    """An oracle input is larger than the oracle supports."""


class IndexOutOfRange(JordanError):
    """An eigenvalue index outside 1..r."""


class SchemaError(JordanError):
    """A JSON document does not match the element or function-id schema."""


class EigensolverError(ArithmeticError):
    """The Jacobi eigensolver exceeded its sweep cap."""
