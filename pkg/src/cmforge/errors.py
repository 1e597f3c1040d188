"""Exception types shared across cmforge modules."""


class CMForgeError(Exception):
    """Base class for all cmforge errors."""


class RecognitionFailure(CMForgeError):
    """A floating value could not be identified with an exact target.

    Usually means the working precision upstream was too low; callers with
    a retry ladder catch this and recompute at higher precision.
    """

    def __init__(self, message, residual=None):
        super().__init__(message)
        self.residual = residual


class ReductionFailure(CMForgeError):
    """A q-series could not be rewritten as a polynomial in the j-series.

    Signals that the truncation budget was too small: the residual series
    kept a nonzero coefficient where an exact reduction must produce zero.
    """


class BudgetTooSmall(ReductionFailure):
    """Modular-polynomial construction ran out of valid series terms."""


class UnsupportedLevel(CMForgeError):
    """Transformation level outside the exactly supported range."""


class SquareLevel(CMForgeError):
    """Operation requires a non-square transformation level."""


class ConductorDivisor(CMForgeError):
    """Prime divides the conductor, so the splitting type is undefined."""


class NoSquareRoot(CMForgeError):
    """No square root of the discriminant exists modulo 4p (inert prime)."""


class NonSquarefree(CMForgeError):
    """Polynomial is not squarefree modulo p; pick another prime."""


class PoleAtLatticePoint(CMForgeError):
    """Elliptic function evaluated at a lattice point."""


class ClassNumberNotOne(CMForgeError):
    """Ray class machinery is implemented only for class-number-one fields."""


class CacheError(CMForgeError):
    """Malformed or incompatible cache file."""
