# backend/latmin/errors.py
from typing import Optional


class LatminError(Exception):
    """Base class for every numerical failure raised by latmin"""


class DomainError(LatminError, ValueError):
    """Input outside the upper half-plane or another operation domain"""


class BudgetExceeded(LatminError):
    """Series needed more than max_terms terms to meet rel_tol"""

    def __init__(self, needed: int, max_terms: int, where: str = "series"):
        self.needed = needed
        self.max_terms = max_terms
        super().__init__(
            f"{where} needs {needed} terms but the budget allows {max_terms}; "
            "canonicalize the point or raise max_terms"
        )


class NonConvergence(LatminError):
    """Reduction loop hit its iteration cap"""


class BranchAmbiguity(LatminError):
    """Argument continuation jumped by more than pi/2 between samples"""


class OnLattice(LatminError, ValueError):
    """Green's function queried at (or too close to) a lattice point"""


class InvalidParams(LatminError, ValueError):
    """Species parameters violate the volume or interaction constraints"""


class NotDisjoint(LatminError):
    """Discs of the assembly overlap or touch"""

    def __init__(self, message: str, max_omega_scale: Optional[float] = None):
        self.max_omega_scale = max_omega_scale
        super().__init__(message)


class DegenerateInteraction(LatminError):
    """Interaction quadratic form is not positive"""


class OutOfRange(LatminError, ValueError):
    """Mix weight outside the branch where the operation is defined"""


class BracketFailure(LatminError):
    """No sign change inside the root bracket"""


class GridBeatsFormula(LatminError):
    """A grid point beats the closed-form maximizer"""


class Unclassified(LatminError):
    """Maximizer lies on neither critical locus"""
