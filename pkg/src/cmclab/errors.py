"""Exception types shared by the modules. All derive from ``CmclabError``."""


class CmclabError(Exception):
    pass


class DomainError(CmclabError, ValueError):
    """A point or parameter lies outside the model or surface domain."""


class StencilError(DomainError):
    """A finite-difference stencil leaves the domain."""


class ParameterError(CmclabError, ValueError):
    """Invalid family parameters."""


class DegeneracyError(CmclabError, ArithmeticError):
    """The immersion is not regular (tangent vectors of rank < 2)."""


class ConditioningError(CmclabError, ArithmeticError):
    """A metric determinant is too small for a reliable curvature evaluation."""


class ZeroQError(CmclabError, ArithmeticError):
    """log q requested at a zero of q."""


class ShapeError(CmclabError, ValueError):
    """A polynomial has the wrong parity or degree for a derivative rule."""


class IdentityMismatch(CmclabError, AssertionError):
    """An exact polynomial identity failed."""


class UnreachableBucket(CmclabError, ValueError):
    """A pair of classes that cannot come from a PMC surface."""
