"""Exception types shared by every module of the toolkit."""


class MatchingToolkitError(ValueError):
    """Base class; ``code`` is a short stable identifier used in reports."""

    code = "error"


class InvalidCarrier(MatchingToolkitError):
    code = "invalid-carrier"


class CarrierMismatch(MatchingToolkitError):
    code = "carrier-mismatch"


class NotEnumerable(MatchingToolkitError):
    code = "not-enumerable"


class InvalidArgument(MatchingToolkitError):
    code = "invalid-argument"


class MalformedMap(MatchingToolkitError):
    code = "malformed-map"


class NotInvertibleInPlace(MatchingToolkitError):
    code = "not-invertible-in-place"


class InvalidPair(MatchingToolkitError):
    code = "invalid-pair"


class InvalidRestriction(MatchingToolkitError):
    code = "invalid-restriction"


class BudgetExceeded(MatchingToolkitError):
    code = "budget-exceeded"


class ConstructionUnavailable(MatchingToolkitError):
    code = "construction-unavailable"


class InvalidOrder(MatchingToolkitError):
    code = "invalid-order"


class InvalidWindow(MatchingToolkitError):
    code = "invalid-window"


class InvalidModulus(MatchingToolkitError):
    code = "invalid-modulus"


class InvalidTower(MatchingToolkitError):
    code = "invalid-tower"


class InvalidBasis(MatchingToolkitError):
    code = "invalid-basis"


class UnsupportedField(MatchingToolkitError):
    code = "unsupported-field"


class CertificateFormatError(MatchingToolkitError):
    code = "malformed-certificate"


class Budget:
    """Node counter for backtracking searches.

    ``limit=None`` means unlimited. The same instance may be threaded through
    nested searches so that they draw from one pool.
    """

    def __init__(self, limit=None):
        self.limit = limit
        self.used = 0

    def tick(self, n=1):
        self.used += n
        if self.limit is not None and self.used > self.limit:
            raise BudgetExceeded(f"node budget {self.limit} exhausted")

    @classmethod
    def coerce(cls, budget):
        if isinstance(budget, Budget):
            return budget
        return cls(budget)
