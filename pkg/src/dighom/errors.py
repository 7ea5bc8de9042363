"""Exception types shared across the package.

Everything raised deliberately by the library derives from DighomError so
callers (and the CLI) can tell input/precondition problems apart from bugs.
"""


class DighomError(Exception):
    pass


class ParseError(DighomError):
    """An input file or document does not match the documented format."""


class DimensionMismatch(DighomError):
    """Points of different ambient dimensions were mixed."""


class PointNotInImage(DighomError):
    """A point was required to belong to an image (or subset) and does not."""


class EmptyImage(DighomError):
    """The operation is undefined on the empty image."""


class NotContinuous(DighomError):
    """A map or corner table violates c1-continuity.

    When raised for a corner table, `pair` holds the offending corner pair.
    """

    def __init__(self, message, pair=None):
        super().__init__(message)
        self.pair = pair


class NotAComplex(DighomError):
    """Boundary composed with boundary is nonzero."""


class NotSubcomplex(DighomError):
    """A sub-basis is not closed under the boundary operator."""


class ShapeMismatch(DighomError):
    """Matrix shapes do not line up with the bases they should act on."""


class NoSuchFace(DighomError):
    """Face index out of range for the cube's dimension."""


class IndexOutOfRange(DighomError):
    """An operator index lies outside 1..q."""


class NotCompatible(DighomError):
    """Two cubes are not corner-wise equal-or-adjacent."""


class NotInjective(DighomError):
    """Orientation data only exists for injective cubes."""


class PreconditionViolated(DighomError):
    """An operation's documented precondition does not hold."""


class UnclassifiableCube(DighomError):
    """A cube's injective-face pattern matches no classification type.

    Raising this would falsify the classification theorem; the test suite
    asserts it never fires on enumerated cubes.
    """


class BudgetExceeded(DighomError):
    """Enumeration produced more cubes than the caller allowed.

    Attributes: degree (the cube dimension being enumerated) and count
    (the budget that was reached).
    """

    def __init__(self, degree, count):
        super().__init__(
            f"enumeration budget exceeded at degree {degree} (budget {count})"
        )
        self.degree = degree
        self.count = count
