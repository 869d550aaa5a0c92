# backend/latmin/series_derivatives.py
import logging
import math
from enum import Enum
from typing import List, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from latmin.errors import DomainError
from latmin.modular_core import DEFAULT_BUDGET, PointLike, SeriesBudget, as_uhp_complex

logger = logging.getLogger(__name__)

SQRT3 = math.sqrt(3.0)

# Below this distance from y = 1 the quotient Y0/Y1 is taken from its Taylor
# expansion at 1, where both Y0 and Y1 vanish.
LHOSPITAL_WINDOW = 1e-4

# Eulerian polynomials E_k(u) appearing in the k-th y-derivative
_EULERIAN = {
    0: lambda u: u,
    1: lambda u: u,
    2: lambda u: u + u * u,
    3: lambda u: u + 4.0 * u * u + u**3,
}


class SpeciesTag(str, Enum):
    ONE = "one"
    ZERO = "zero"

    @property
    def rate(self) -> float:
        """Exponential rate c: terms decay like exp(-c n y)"""
        return 2.0 * math.pi if self is SpeciesTag.ONE else math.pi

    @property
    def alternating(self) -> bool:
        return self is SpeciesTag.ZERO


class AxisDerivative(BaseModel):
    model_config = ConfigDict(frozen=True)

    order: int = Field(..., ge=0, le=3)
    value: float


def _signs(tag: SpeciesTag, n: np.ndarray) -> np.ndarray:
    if tag.alternating:
        return np.where(n % 2 == 0, 1.0, -1.0)
    return np.ones_like(n, dtype=float)


def _truncated_sum(terms: np.ndarray, alternating: bool, rel_tol: float) -> np.ndarray:
    """Sum along axis 0, cutting an alternating series at its tail bound"""
    if not alternating or terms.ndim != 1 or terms.size < 2:
        return terms.sum(axis=0)
    magnitudes = np.abs(terms)
    if np.any(np.diff(magnitudes) > 0.0):
        # terms not decreasing, the geometric count is the safe bound
        return terms.sum()
    partial = np.cumsum(terms)
    stop = np.nonzero(magnitudes[1:] < rel_tol * np.abs(partial[:-1]))[0]
    return partial[stop[0]] if stop.size else partial[-1]


def axis_series_terms(j: SpeciesTag, order: int, y, n_terms: int) -> np.ndarray:
    """First n_terms summands of the order-th axis series, stacked on axis 0"""
    tag = SpeciesTag(j)
    if order not in _EULERIAN:
        raise ValueError(f"order must be 0..3, got {order}")
    y_arr = np.asarray(y, dtype=float)
    c = tag.rate
    n = np.arange(1, n_terms + 1, dtype=float).reshape((-1,) + (1,) * y_arr.ndim)
    u = _signs(tag, n) * np.exp(-c * n * y_arr)
    return 4.0 * c ** (order + 1) * n ** (order + 1) * _EULERIAN[order](u) / (1.0 - u) ** (order + 1)


def axis_derivative(
    j: SpeciesTag,
    order: int,
    y,
    budget: SeriesBudget = DEFAULT_BUDGET,
):
    """Y_j(yi) (order 0) or its order-th y-derivative on the imaginary axis.

    Uses the closed series in r = exp(-pi y); for j = ONE the terms carry
    r^(2n), for j = ZERO they carry (-r)^n.
    """
    tag = SpeciesTag(j)
    if order not in _EULERIAN:
        raise ValueError(f"order must be 0..3, got {order}")
    y_arr = np.asarray(y, dtype=float)
    if np.any(y_arr <= 0.0):
        raise DomainError("axis derivatives need y > 0")

    c = tag.rate
    n_terms = budget.terms_for(c * float(np.min(y_arr)), where=f"axis derivative ({tag.value})", power=order + 1)
    terms = axis_series_terms(tag, order, y_arr, n_terms)
    alternating = tag.alternating and y_arr.ndim == 0 and float(y_arr) > 1.0
    series = _truncated_sum(terms.reshape(-1) if y_arr.ndim == 0 else terms, alternating, budget.rel_tol)

    if order == 0:
        head = 1.0 / y_arr - c / 6.0
    else:
        head = math.factorial(order) / y_arr ** (order + 1)
    value = (-1.0) ** order * (head + series)
    return float(value) if np.ndim(value) == 0 else value


def axis_jet(j: SpeciesTag, y: float, budget: SeriesBudget = DEFAULT_BUDGET) -> List[AxisDerivative]:
    """All axis derivatives of Y_j at yi, orders 0..3"""
    return [AxisDerivative(order=k, value=axis_derivative(j, k, y, budget)) for k in range(4)]


def gradient_series(
    j: SpeciesTag,
    z: PointLike,
    budget: SeriesBudget = DEFAULT_BUDGET,
) -> Tuple[float, float]:
    """(X_j, Y_j): the x- and y-partials of f_1 (ONE) or f_0 (ZERO) at z"""
    tag = SpeciesTag(j)
    w = as_uhp_complex(z)
    x, y = w.real, w.imag
    c = tag.rate

    n_terms = budget.terms_for(c * y, where=f"gradient series ({tag.value})", power=1)
    n = np.arange(1, n_terms + 1, dtype=float)
    # cos(pi n (x+1)) = (-1)^n cos(pi n x), same for sin
    sign = _signs(tag, n)
    theta = c * n * x
    rho = np.exp(-c * n * y)
    cos_t = sign * np.cos(theta)
    sin_t = sign * np.sin(theta)
    denom = 1.0 + rho * rho - 2.0 * rho * cos_t

    amplitude = 4.0 * c * n * rho / denom
    x_part = float(np.sum(amplitude * sin_t))
    y_part = 1.0 / y - c / 6.0 + float(np.sum(amplitude * (cos_t - rho)))
    return x_part, y_part


def difference_series(order: int, y: float, budget: SeriesBudget = DEFAULT_BUDGET) -> float:
    """d(y) = Y_0(yi) - Y_1(yi) and its first two derivatives over odd indices"""
    if order not in (0, 1, 2):
        raise ValueError(f"order must be 0..2, got {order}")
    if y <= 0.0:
        raise DomainError("difference series needs y > 0")

    n_terms = budget.terms_for(2.0 * math.pi * y, where="difference series", power=order + 1)
    m = 2.0 * np.arange(1, n_terms + 1) - 1.0
    v = np.exp(-math.pi * m * y)

    if order == 0:
        return math.pi / 6.0 - float(np.sum(4.0 * math.pi * m * v / (1.0 + v)))
    if order == 1:
        return float(np.sum(4.0 * math.pi**2 * m**2 * v / (1.0 + v) ** 2))
    return float(np.sum(4.0 * math.pi**3 * m**3 * (v * v - v) / (1.0 + v) ** 3))


def ratio_Y0_over_Y1(y: float, budget: SeriesBudget = DEFAULT_BUDGET) -> float:
    """Y_0(yi) / Y_1(yi) on [1, sqrt 3], with the L'Hospital limit at y = 1"""
    if not 1.0 <= y <= SQRT3:
        raise DomainError(f"ratio Y0/Y1 is defined on [1, sqrt(3)], got {y}")

    h = y - 1.0
    if h < LHOSPITAL_WINDOW:
        # Y_j(1 + h) = Y_j' h + Y_j'' h^2/2 + Y_j''' h^3/6, with Y_j(i) = 0
        weights = [h ** (k - 1) / math.factorial(k) for k in (1, 2, 3)]
        num = sum(w * axis_derivative(SpeciesTag.ZERO, k, 1.0, budget) for w, k in zip(weights, (1, 2, 3)))
        den = sum(w * axis_derivative(SpeciesTag.ONE, k, 1.0, budget) for w, k in zip(weights, (1, 2, 3)))
        return num / den

    return axis_derivative(SpeciesTag.ZERO, 0, y, budget) / axis_derivative(SpeciesTag.ONE, 0, y, budget)
