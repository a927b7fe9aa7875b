"""Exception hierarchy.

Every domain failure derives from :class:`LocalCoeffError`; the CLI maps
those to exit code 1 and :class:`InputError` to exit code 2.
"""


class LocalCoeffError(Exception):
    pass


class InputError(LocalCoeffError):
    """Malformed input document or parameters that fail schema validation."""


class DimensionMismatch(LocalCoeffError):
    pass


class NoSolution(LocalCoeffError):
    pass


class NotAComplex(LocalCoeffError):
    pass


class NotABicomplex(LocalCoeffError):
    pass


class ConvergenceMismatch(LocalCoeffError):
    def __init__(self, message, degree=None):
        super().__init__(message)
        self.degree = degree


class GroupMismatch(LocalCoeffError):
    pass


class NotCyclic(LocalCoeffError):
    pass


class CategoryMismatch(LocalCoeffError):
    pass


class UnknownObject(LocalCoeffError):
    pass


class NotFree(LocalCoeffError):
    pass


class NotFunctorial(LocalCoeffError):
    pass


class BadParams(LocalCoeffError):
    pass


class BadPrimes(BadParams):
    pass


class ObjectMismatch(LocalCoeffError):
    pass


class ProductNotAvailable(LocalCoeffError):
    pass
