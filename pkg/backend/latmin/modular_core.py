# backend/latmin/modular_core.py
import logging
import math
from enum import Enum
from typing import List, Tuple, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator

from latmin.errors import BudgetExceeded, DomainError, NonConvergence

logger = logging.getLogger(__name__)

TWO_PI = 2.0 * math.pi

# Boundary inequalities of the fundamental set are accepted with this slack
BOUNDARY_SLACK = 1e-12
MAX_REDUCTION_STEPS = 10_000


class UhpPoint(BaseModel):
    """A point z = x + iy of the upper half-plane"""

    model_config = ConfigDict(frozen=True)

    x: float
    y: float

    @field_validator("x")
    @classmethod
    def _finite_x(cls, v: float) -> float:
        if not math.isfinite(v):
            raise ValueError("x must be finite")
        return v

    @field_validator("y")
    @classmethod
    def _positive_y(cls, v: float) -> float:
        if not math.isfinite(v) or v <= 0.0:
            raise ValueError(f"y must be finite and positive, got {v}")
        return v

    @classmethod
    def from_complex(cls, z: complex) -> "UhpPoint":
        try:
            return cls(x=float(z.real), y=float(z.imag))
        except ValidationError as exc:
            raise DomainError(f"{z} is not in the upper half-plane") from exc

    @property
    def z(self) -> complex:
        return complex(self.x, self.y)

    @property
    def modulus(self) -> float:
        return abs(self.z)

    @property
    def arg(self) -> float:
        return math.atan2(self.y, self.x)

    def __str__(self) -> str:
        return f"{self.x!r}{'+' if self.y >= 0 else '-'}{abs(self.y)!r}i"


class SeriesBudget(BaseModel):
    """Truncation control shared by every q-series and product"""

    model_config = ConfigDict(frozen=True)

    rel_tol: float = Field(1e-14, gt=0.0, lt=1e-6)
    max_terms: int = Field(4096, ge=16)

    def terms_for(self, decay: float, where: str = "series", power: int = 0) -> int:
        """Terms needed when the n-th term behaves like n**power exp(-decay n)"""
        if not decay > 0.0:
            raise BudgetExceeded(self.max_terms + 1, self.max_terms, where)
        # stop once ratio**n < rel_tol * (1 - ratio)
        gap = -math.expm1(-decay)
        needed = max(1, math.ceil(-math.log(self.rel_tol * gap) / decay))
        if power:
            needed += math.ceil(power * math.log(needed + 1.0) / decay)
        if needed > self.max_terms:
            raise BudgetExceeded(needed, self.max_terms, where)
        return needed

    def doubled(self) -> "SeriesBudget":
        return SeriesBudget(rel_tol=self.rel_tol, max_terms=2 * self.max_terms)


DEFAULT_BUDGET = SeriesBudget()


class Generator(str, Enum):
    T2 = "T2"
    T2INV = "T2inv"
    S = "S"
    R = "R"


_INVERSES = {
    Generator.T2: Generator.T2INV,
    Generator.T2INV: Generator.T2,
    Generator.S: Generator.S,
    Generator.R: Generator.R,
}


class GroupWord(BaseModel):
    """Generators applied left to right to reach the reduced point"""

    model_config = ConfigDict(frozen=True)

    generators: Tuple[Generator, ...] = ()

    def __len__(self) -> int:
        return len(self.generators)

    def apply(self, z: "PointLike") -> UhpPoint:
        w = as_uhp_complex(z)
        for g in self.generators:
            w = _apply(w, g)
        return UhpPoint.from_complex(w)

    def __str__(self) -> str:
        return "[" + ", ".join(g.value for g in self.generators) + "]"


PointLike = Union[UhpPoint, complex, float]


def as_uhp_complex(z: PointLike) -> complex:
    """Coerce to a complex number strictly inside the upper half-plane"""
    w = z.z if isinstance(z, UhpPoint) else complex(z)
    if not (math.isfinite(w.real) and math.isfinite(w.imag)) or w.imag <= 0.0:
        raise DomainError(f"{w} is not in the upper half-plane")
    return w


def e_of(z):
    """e(z) = exp(2 pi i z); accepts scalars or arrays"""
    if isinstance(z, UhpPoint):
        z = z.z
    value = np.exp(2j * np.pi * np.asarray(z, dtype=complex))
    return complex(value) if value.ndim == 0 else value


def eta4(z: PointLike, budget: SeriesBudget = DEFAULT_BUDGET) -> complex:
    """Fourth power of the Dedekind eta function, e(z/6) prod (1 - e(nz))^4"""
    w = as_uhp_complex(z)
    n_terms = budget.terms_for(TWO_PI * w.imag, where="eta4")
    n = np.arange(1, n_terms + 1)
    factors = 1.0 - np.exp(2j * np.pi * n * w)
    return complex(e_of(w / 6.0) * np.prod(factors**4))


def log_abs_im_eta(w, budget: SeriesBudget = DEFAULT_BUDGET):
    """log|Im(w) eta4(w)| evaluated term-wise in log space.

    Vectorized over arrays of w; the number of terms is set by the smallest
    imaginary part, so callers with small Im w should reduce first.
    """
    w = np.asarray(w, dtype=complex)
    y = w.imag
    if np.any(y <= 0.0):
        raise DomainError("log|Im(w) eta4(w)| needs Im w > 0")
    n_terms = budget.terms_for(TWO_PI * float(np.min(y)), where="log|Im eta4|")
    n = np.arange(1, n_terms + 1).reshape((-1,) + (1,) * w.ndim)
    tail = np.log(np.abs(1.0 - np.exp(2j * np.pi * n * w))).sum(axis=0)
    value = np.log(y) - np.pi * y / 3.0 + 4.0 * tail
    return float(value) if value.ndim == 0 else value


def reduce_modular(z: PointLike) -> complex:
    """Reduce z under z -> z+1 and z -> -1/z into |Re z| <= 1/2, |z| >= 1.

    |Im(z) eta4(z)| is invariant under the full modular group, so this is the
    reduction used before evaluating it.
    """
    w = as_uhp_complex(z)
    for _ in range(MAX_REDUCTION_STEPS):
        w -= round(w.real)
        if abs(w) < 1.0 - BOUNDARY_SLACK:
            w = -1.0 / w
            continue
        return w
    raise NonConvergence(f"modular reduction of {z} did not settle")


def inverse_generator(g: Generator) -> Generator:
    return _INVERSES[Generator(g)]


def _apply(w: complex, g: Generator) -> complex:
    if g is Generator.T2:
        return w + 2.0
    if g is Generator.T2INV:
        return w - 2.0
    if g is Generator.S:
        return -1.0 / w
    if g is Generator.R:
        return -w.conjugate()
    raise ValueError(f"Unknown generator: {g}")


def apply_generator(z: PointLike, g: Generator) -> UhpPoint:
    """Image of z under one generator of the group"""
    return UhpPoint.from_complex(_apply(as_uhp_complex(z), Generator(g)))


def in_fundamental_set(z: PointLike, slack: float = BOUNDARY_SLACK) -> bool:
    """0 <= Re z <= 1 and |z| >= 1, up to slack"""
    w = as_uhp_complex(z)
    return -slack <= w.real <= 1.0 + slack and abs(w) >= 1.0 - slack


def canonicalize(z: PointLike) -> Tuple[UhpPoint, GroupWord]:
    """Reduce z into the closed fundamental set and record the group word"""
    w = as_uhp_complex(z)
    word: List[Generator] = []

    for _ in range(MAX_REDUCTION_STEPS):
        shift = round(w.real / 2.0)
        if shift > 0:
            word.extend([Generator.T2INV] * shift)
        elif shift < 0:
            word.extend([Generator.T2] * (-shift))
        w -= 2.0 * shift
        if abs(w) < 1.0 - BOUNDARY_SLACK:
            w = -1.0 / w
            word.append(Generator.S)
            continue
        break
    else:
        raise NonConvergence(f"canonicalize({z}) exceeded {MAX_REDUCTION_STEPS} steps")

    if w.real < 0.0:
        w = -w.conjugate()
        word.append(Generator.R)

    logger.debug("canonicalize %s -> %s with %d generators", z, w, len(word))
    return UhpPoint.from_complex(w), GroupWord(generators=tuple(word))
