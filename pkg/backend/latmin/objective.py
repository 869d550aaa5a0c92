# backend/latmin/objective.py
import logging
import math
from typing import Tuple, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, field_validator

from latmin.errors import BranchAmbiguity, DomainError
from latmin.modular_core import (
    BOUNDARY_SLACK,
    DEFAULT_BUDGET,
    Generator,
    GroupWord,
    PointLike,
    SeriesBudget,
    UhpPoint,
    apply_generator,
    as_uhp_complex,
    canonicalize,
    eta4,
    log_abs_im_eta,
    reduce_modular,
)
from latmin.series_derivatives import SpeciesTag, axis_derivative, gradient_series

logger = logging.getLogger(__name__)

# Points with Im w below this are reduced before the log-eta series
DIRECT_MIN_IM = 0.5
# Evaluation this close to the real axis is allowed but logged
SINGULAR_FLAG_Y = 0.05
ARG_PATH_STEP = 0.01


class MixWeight(BaseModel):
    """The weight b of f_1 in f_b; any real b is allowed, [0, 1] is physical"""

    model_config = ConfigDict(frozen=True)

    b: float

    @field_validator("b")
    @classmethod
    def _finite(cls, v: float) -> float:
        if not math.isfinite(v):
            raise ValueError("b must be finite")
        return v

    @property
    def physical(self) -> bool:
        return 0.0 <= self.b <= 1.0

    @property
    def dual(self) -> "MixWeight":
        return MixWeight(b=1.0 - self.b)


WeightLike = Union[MixWeight, float]


def weight_value(b: WeightLike) -> float:
    return b.b if isinstance(b, MixWeight) else float(b)


def _log_abs_im_eta_reduced(w, budget: SeriesBudget):
    if np.ndim(w) == 0:
        return log_abs_im_eta(reduce_modular(complex(w)), budget)
    w = np.array(w, dtype=complex)
    if np.any(w.imag <= 0.0):
        raise DomainError("f_b needs points in the upper half-plane")
    low = w.imag < DIRECT_MIN_IM
    if np.any(low):
        w[low] = [reduce_modular(v) for v in w[low]]
    return log_abs_im_eta(w, budget)


def _points(z):
    if isinstance(z, UhpPoint) or np.ndim(z) == 0:
        w = as_uhp_complex(z)
        if w.imag < SINGULAR_FLAG_Y:
            logger.warning("evaluating at %s, close to the real axis", w)
        return w
    return np.asarray(z, dtype=complex)


def f_component(j: SpeciesTag, z, budget: SeriesBudget = DEFAULT_BUDGET):
    """f_1(z) = log|Im z eta(z)| or f_0(z) = log|Im((z+1)/2) eta((z+1)/2)|.

    Accepts a single point or an array of points.
    """
    w = _points(z)
    if SpeciesTag(j) is SpeciesTag.ZERO:
        w = (w + 1.0) / 2.0
    return _log_abs_im_eta_reduced(w, budget)


def f_b(b: WeightLike, z, budget: SeriesBudget = DEFAULT_BUDGET):
    """f_b = b f_1 + (1 - b) f_0"""
    weight = weight_value(b)
    w = _points(z)
    if weight == 1.0:
        return f_component(SpeciesTag.ONE, w, budget)
    if weight == 0.0:
        return f_component(SpeciesTag.ZERO, w, budget)
    return weight * f_component(SpeciesTag.ONE, w, budget) + (1.0 - weight) * f_component(
        SpeciesTag.ZERO, w, budget
    )


def grad_f_b(b: WeightLike, z: PointLike, budget: SeriesBudget = DEFAULT_BUDGET) -> Tuple[float, float]:
    """(X_b, Y_b), the gradient of f_b at z"""
    weight = weight_value(b)
    w = _points(z)
    x1, y1 = gradient_series(SpeciesTag.ONE, w, budget)
    x0, y0 = gradient_series(SpeciesTag.ZERO, w, budget)
    return weight * x1 + (1.0 - weight) * x0, weight * y1 + (1.0 - weight) * y0


def pull_back_gradient(z: PointLike, word: GroupWord, gradient: Tuple[float, float]) -> Tuple[float, float]:
    """Gradient at z of a group-invariant function, given its gradient at word.apply(z).

    Works on h = f_x - i f_y: a holomorphic step w = g(z) gives h(z) = h(w) g'(z),
    the reflection gives h(z) = -conj(h(w)).
    """
    points = [as_uhp_complex(z)]
    for g in word.generators:
        points.append(apply_generator(points[-1], g).z)

    h = complex(gradient[0], -gradient[1])
    for g, source in zip(reversed(word.generators), reversed(points[:-1])):
        if g is Generator.S:
            h = h / (source * source)
        elif g is Generator.R:
            h = -h.conjugate()
    return h.real, -h.imag


def grad_f_b_reduced(b: WeightLike, z: PointLike, budget: SeriesBudget = DEFAULT_BUDGET) -> Tuple[float, float]:
    """(X_b, Y_b) at z, summed at the canonical representative and carried back"""
    canonical, word = canonicalize(z)
    if not len(word):
        return grad_f_b(b, canonical, budget)
    logger.debug("gradient at %s taken at %s via %s", as_uhp_complex(z), canonical, word)
    return pull_back_gradient(z, word, grad_f_b(b, canonical, budget))


def axis_gradient(b: WeightLike, y, budget: SeriesBudget = DEFAULT_BUDGET, order: int = 0):
    """Y_b(yi) (or its y-derivatives) from the axis series"""
    weight = weight_value(b)
    return weight * axis_derivative(SpeciesTag.ONE, order, y, budget) + (1.0 - weight) * axis_derivative(
        SpeciesTag.ZERO, order, y, budget
    )


def dual_point(z: PointLike) -> UhpPoint:
    """w = (z - 1)/(z + 1), which exchanges f_b and f_(1-b)"""
    w = as_uhp_complex(z)
    x, y = w.real, w.imag
    denom = (x + 1.0) ** 2 + y * y
    return UhpPoint(x=(x * x + y * y - 1.0) / denom, y=2.0 * y / denom)


def in_half_region(z: PointLike, slack: float = BOUNDARY_SLACK) -> bool:
    """0 <= Re z <= 1/2 and |z| >= 1"""
    w = as_uhp_complex(z)
    return -slack <= w.real <= 0.5 + slack and abs(w) >= 1.0 - slack


def arg_z_eta(z: PointLike, budget: SeriesBudget = DEFAULT_BUDGET, step: float = ARG_PATH_STEP) -> float:
    """Continuous branch of arg(z eta(z)) with value pi/2 at i.

    Continued along the segment from i, summing the argument increments of
    consecutive samples.
    """
    target = as_uhp_complex(z)
    if not in_half_region(target):
        raise DomainError(f"{target} is outside 0 <= Re z <= 1/2, |z| >= 1")

    n_steps = max(16, math.ceil(abs(target - 1j) / step))
    path = 1j + (target - 1j) * np.linspace(0.0, 1.0, n_steps + 1)
    values = np.array([w * eta4(w, budget) for w in path])
    increments = np.angle(values[1:] / values[:-1])
    if np.any(np.abs(increments) > math.pi / 2.0):
        raise BranchAmbiguity(f"argument jumped by more than pi/2 on the path to {target}")
    return math.pi / 2.0 + float(np.sum(increments))


def circle_transfer(b: WeightLike, u: float, budget: SeriesBudget = DEFAULT_BUDGET) -> Tuple[float, float]:
    """Gradient of f_b at u + i sqrt(1 - u^2) predicted from Y_(1-b) on the axis"""
    if not -1.0 < u < 1.0:
        raise DomainError(f"u must lie in (-1, 1), got {u}")
    weight = weight_value(b)
    s = math.sqrt(1.0 - u * u) / (1.0 - u)
    y_dual = axis_gradient(1.0 - weight, s, budget)
    return s * y_dual, -u / (1.0 - u) * y_dual
