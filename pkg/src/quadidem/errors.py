"""Exception hierarchy shared by every module in the package."""


class QuadIdemError(ValueError):
    """Base class; every error raised on bad mathematical input derives from it."""

    code = "error"


class NotSquareFree(QuadIdemError):
    code = "not_square_free"


class DegenerateD(QuadIdemError):
    code = "degenerate_d"


class NotInRing(QuadIdemError):
    code = "not_in_ring"


class NotDivisible(QuadIdemError):
    code = "not_divisible"


class ContextMismatch(QuadIdemError):
    code = "context_mismatch"


class ImaginaryRing(QuadIdemError):
    """Raised for D < 0 where the unit group is finite.

    ``torsion`` holds a generator of the (finite) unit group of the maximal order.
    """

    code = "imaginary_ring"

    def __init__(self, message, torsion=None):
        super().__init__(message)
        self.torsion = torsion


class NotPrime(QuadIdemError):
    code = "not_prime"


class InvalidSetting(QuadIdemError):
    code = "invalid_setting"


class NormNotDivisible(InvalidSetting):
    code = "norm_not_divisible"


class NormMismatch(QuadIdemError):
    code = "norm_mismatch"


class OddPrimeRequired(QuadIdemError):
    code = "odd_prime_required"


class NotAUnit(QuadIdemError):
    code = "not_a_unit"


class DegenerateForm(QuadIdemError):
    code = "degenerate_form"
