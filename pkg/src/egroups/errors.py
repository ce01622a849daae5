"""Exception types raised across the package."""


class EGroupsError(Exception):
    pass


class NotPrime(EGroupsError):
    pass


class BadCharacteristic(EGroupsError):
    """Characteristic 2 or 3 is outside the supported range."""


class ReducibleModulus(EGroupsError):
    pass


class ZeroPolynomial(EGroupsError):
    pass


class NotSkew(EGroupsError):
    pass


class SingularTransform(EGroupsError):
    pass


class NotAFlex(EGroupsError):
    pass


class SingularAfterNormalize(EGroupsError):
    """Normalization reached (a, b) with 4a^3 + 27b^2 = 0."""

    def __init__(self, a, b):
        super().__init__(f"normalized coefficients are singular: a={a}, b={b}")
        self.a = a
        self.b = b


class SingularCurve(EGroupsError):
    pass


class PointNotOnCurve(EGroupsError):
    pass


class PointAtInfinity(EGroupsError):
    pass


class NotTwoTorsion(EGroupsError):
    pass


class NotThreeTorsion(EGroupsError):
    pass


class TooLarge(EGroupsError):
    pass


class DimensionMismatch(EGroupsError):
    pass


class NoPointFound(EGroupsError):
    """No curve point matched; signals an upstream normalization bug."""


class UnexpectedDimension(EGroupsError):
    pass


class DescentFailure(EGroupsError):
    """A matrix expected to be defined over the base field is not."""
