"""Exception hierarchy shared by all gentle_serre modules."""


class GentleSerreError(Exception):
    """Base class for all library errors."""


class PresentationSyntaxError(GentleSerreError):
    """Input file is not syntactically a presentation (bad JSON, missing field)."""


class NotGentle(GentleSerreError):
    """Presentation violates a gentleness condition.

    Carries a human-readable description of which condition failed and where.
    """


class InfiniteDimensional(GentleSerreError):
    """The algebra has a relation-free cycle, so the path basis is infinite."""


class CartanNotUnimodular(GentleSerreError):
    """det C is not +-1; the Coxeter pipeline needs finite global dimension."""


class NotTriviallyGraded(GentleSerreError):
    """Operation requires all arrow degrees to be zero."""


class MissingWinding(GentleSerreError):
    """A mixed boundary component has no winding number."""


class DiscNotCovered(GentleSerreError):
    """Serre dimensions are not defined for the disc."""


class NotPolynomial(GentleSerreError):
    """(t-1)-exponent is too negative: the product is not divisible."""


class FullyStoppedUnsupported(GentleSerreError):
    """Coxeter polynomial from surface data needs all components mixed."""


class GenusNotIntegral(GentleSerreError):
    """Internal consistency failure: Euler characteristic gives non-integer genus."""


class AlgebraMismatch(GentleSerreError):
    """Two twisted complexes live over different algebras."""


class EmptyComplex(GentleSerreError):
    """Operation undefined on the zero complex."""


class InfiniteGlobalDimension(GentleSerreError):
    """A perfect replacement did not terminate within the resolution cutoff."""


class BudgetExceeded(GentleSerreError):
    """A configured step or size limit was hit during iteration."""


class EngineLimitation(GentleSerreError):
    """The algebraic engine cannot realise this functor application exactly."""
