# backend/latmin/minimizer.py
import logging
import math
from enum import Enum
from functools import lru_cache
from typing import List, Optional, Tuple

import numpy as np
import pandas as pd
from joblib import Parallel, delayed
from pydantic import BaseModel, ConfigDict, model_validator
from scipy.optimize import brentq

from latmin.assembly_energy import (
    DiscAssembly,
    SpeciesParams,
    check_disjoint,
    max_omega_scale,
    mix_weight,
    optimal_scale,
)
from latmin.errors import BracketFailure, GridBeatsFormula, NotDisjoint, OutOfRange, Unclassified
from latmin.lattice_green import LatticeBasis
from latmin.modular_core import DEFAULT_BUDGET, PointLike, SeriesBudget, UhpPoint, as_uhp_complex
from latmin.objective import SpeciesTag, f_b, f_component
from latmin.series_derivatives import SQRT3, axis_derivative, ratio_Y0_over_Y1

logger = logging.getLogger(__name__)

CLASSIFY_TOL = 1e-9
GRID_SLACK = 1e-9
ROOT_XTOL = 1e-12
ROOT_BRACKET_LOW = 1.0 + 1e-8
GRID_Y_MAX = 4.0


class LatticeKind(str, Enum):
    RECTANGULAR = "Rectangular"
    SQUARE = "Square"
    RHOMBIC = "Rhombic"
    HEXAGONAL = "Hexagonal"


class LatticeClass(BaseModel):
    """Lattice type with its shape parameter (side ratio or acute angle)"""

    model_config = ConfigDict(frozen=True)

    kind: LatticeKind
    param: Optional[float] = None

    @model_validator(mode="after")
    def _param_matches_kind(self) -> "LatticeClass":
        if self.kind is LatticeKind.RECTANGULAR:
            if self.param is None or self.param < 1.0:
                raise ValueError("rectangular lattices need a side ratio >= 1")
        elif self.kind is LatticeKind.RHOMBIC:
            if self.param is None or not 0.0 < self.param < math.pi / 2.0:
                raise ValueError("rhombic lattices need an acute angle in (0, pi/2)")
        elif self.param is not None:
            raise ValueError(f"{self.kind.value} lattices carry no parameter")
        return self

    def __str__(self) -> str:
        if self.param is None:
            return self.kind.value
        return f"{self.kind.value}({self.param!r})"


class PhasePoint(BaseModel):
    model_config = ConfigDict(frozen=True)

    b: float
    z_star: UhpPoint
    klass: LatticeClass
    f_value: float


class MinimalAssembly(BaseModel):
    model_config = ConfigDict(frozen=True)

    b: float
    z_star: UhpPoint
    assembly: DiscAssembly
    t_alpha: float
    energy: float
    klass: LatticeClass

    def as_tuple(self) -> Tuple[DiscAssembly, float, float, LatticeClass]:
        return self.assembly, self.t_alpha, self.energy, self.klass


@lru_cache(maxsize=None)
def threshold_B(budget: SeriesBudget = DEFAULT_BUDGET) -> float:
    """B = d/(d - e) with d, e the y-derivatives of Y_0, Y_1 at i"""
    d = axis_derivative(SpeciesTag.ZERO, 1, 1.0, budget)
    e = axis_derivative(SpeciesTag.ONE, 1, 1.0, budget)
    threshold = d / (d - e)
    logger.debug("threshold B = %.16g (d=%.16g, e=%.16g)", threshold, d, e)
    return threshold


def q_of_b(b: float, budget: SeriesBudget = DEFAULT_BUDGET) -> float:
    """Root q_b in (1, sqrt 3] of Y_b(yi) for 0 <= b < B"""
    threshold = threshold_B(budget)
    if not 0.0 <= b < threshold:
        raise OutOfRange(f"q_b is defined for 0 <= b < B={threshold:.6f}, got {b}")
    if b == 0.0:
        return SQRT3

    # Y_b = Y_1 (b + (1 - b) Y_0/Y_1) and Y_1 < 0 on (1, sqrt 3]
    def scaled_gradient(y: float) -> float:
        return b + (1.0 - b) * ratio_Y0_over_Y1(y, budget)

    low, high = scaled_gradient(ROOT_BRACKET_LOW), scaled_gradient(SQRT3)
    if not (low < 0.0 < high):
        raise BracketFailure(f"no sign change of Y_b on [{ROOT_BRACKET_LOW}, sqrt 3] for b={b}")
    root = brentq(scaled_gradient, ROOT_BRACKET_LOW, SQRT3, xtol=ROOT_XTOL)
    logger.debug("q_b(%.6g) = %.15g", b, root)
    return float(root)


def p_of_b(b: float, budget: SeriesBudget = DEFAULT_BUDGET) -> float:
    """p_b = (q^2 - 1)/(q^2 + 1) with q = q_(1-b), for 1 - B < b <= 1"""
    if not b <= 1.0 or not 1.0 - b < threshold_B(budget):
        raise OutOfRange(f"p_b is defined for 1 - B < b <= 1, got {b}")
    q = q_of_b(1.0 - b, budget)
    return (q * q - 1.0) / (q * q + 1.0)


def classify(z_star: PointLike) -> LatticeClass:
    """Lattice type of tau = z_star"""
    w = as_uhp_complex(z_star)
    on_axis = abs(w.real) <= CLASSIFY_TOL or abs(w.real - 1.0) <= CLASSIFY_TOL
    on_circle = abs(abs(w) - 1.0) <= CLASSIFY_TOL

    if on_axis:
        ratio = max(w.imag, 1.0 / w.imag)
        if ratio - 1.0 <= CLASSIFY_TOL:
            return LatticeClass(kind=LatticeKind.SQUARE)
        return LatticeClass(kind=LatticeKind.RECTANGULAR, param=ratio)

    if on_circle:
        angle = math.atan2(w.imag, abs(w.real))
        if abs(angle - math.pi / 3.0) <= CLASSIFY_TOL:
            return LatticeClass(kind=LatticeKind.HEXAGONAL)
        if abs(angle - math.pi / 2.0) <= CLASSIFY_TOL:
            return LatticeClass(kind=LatticeKind.SQUARE)
        return LatticeClass(kind=LatticeKind.RHOMBIC, param=angle)

    raise Unclassified(f"{w} is neither on Re z = 0 nor on |z| = 1")


def grid_points(n: int) -> np.ndarray:
    """n x n grid of [0, 1] x [1, 4] restricted to |z| >= 1"""
    xs = np.linspace(0.0, 1.0, n)
    ys = np.linspace(1.0, GRID_Y_MAX, n)
    zz = xs[None, :] + 1j * ys[:, None]
    return zz[np.abs(zz) >= 1.0]


@lru_cache(maxsize=8)
def _grid_components(budget: SeriesBudget, n: int) -> Tuple[np.ndarray, np.ndarray]:
    points = grid_points(n)
    return f_component(SpeciesTag.ONE, points, budget), f_component(SpeciesTag.ZERO, points, budget)


def grid_maximum(b: float, budget: SeriesBudget = DEFAULT_BUDGET, n: int = 161) -> Tuple[complex, float]:
    """Best grid point of f_b over the fundamental set below y = 4"""
    f1, f0 = _grid_components(budget, n)
    values = b * f1 + (1.0 - b) * f0
    best = int(np.argmax(values))
    return complex(grid_points(n)[best]), float(values[best])


def maximize_f_b(
    b: float,
    budget: SeriesBudget = DEFAULT_BUDGET,
    grid: int = 161,
    check_grid: bool = True,
) -> PhasePoint:
    """Maximizer of f_b over the fundamental set, from the branch formulas"""
    if not 0.0 <= b <= 1.0:
        raise OutOfRange(f"b must lie in [0, 1], got {b}")
    threshold = threshold_B(budget)

    if b < threshold:
        z_star = complex(0.0, q_of_b(b, budget))
    elif 1.0 - b < threshold:
        p = p_of_b(b, budget)
        z_star = complex(p, math.sqrt(1.0 - p * p))
    else:
        z_star = 1j

    f_value = float(f_b(b, z_star, budget))
    if check_grid:
        best_z, best_value = grid_maximum(b, budget, grid)
        if best_value > f_value + GRID_SLACK:
            raise GridBeatsFormula(f"grid point {best_z} gives {best_value!r} > f_b(z*)={f_value!r} at b={b}")

    return PhasePoint(b=b, z_star=UhpPoint.from_complex(z_star), klass=classify(z_star), f_value=f_value)


def phase_grid(b_min: float, b_max: float, step: float) -> List[float]:
    if not 0.0 <= b_min <= b_max <= 1.0:
        raise OutOfRange(f"need 0 <= b_min <= b_max <= 1, got [{b_min}, {b_max}]")
    if not step > 0.0:
        raise OutOfRange(f"step must be positive, got {step}")
    count = int(math.floor((b_max - b_min) / step + 1e-9)) + 1
    return [min(b_min + k * step, b_max) for k in range(count)]


def phase_diagram(
    b_min: float,
    b_max: float,
    step: float,
    budget: SeriesBudget = DEFAULT_BUDGET,
    n_jobs: int = 1,
    grid: int = 161,
) -> List[PhasePoint]:
    """One phase point per b on the grid b_min, b_min + step, ..., b_max"""
    bs = phase_grid(b_min, b_max, step)
    logger.info("phase sweep over %d values of b with n_jobs=%d", len(bs), n_jobs)
    points = Parallel(n_jobs=n_jobs)(delayed(maximize_f_b)(b, budget, grid) for b in bs)
    return list(points)


def minimal_assembly(p: SpeciesParams, budget: SeriesBudget = DEFAULT_BUDGET) -> MinimalAssembly:
    """Least-energy disc assembly: b -> z* -> unit basis -> optimal scale"""
    b = mix_weight(p).b
    point = maximize_f_b(b, budget)
    basis = LatticeBasis.unit_area(point.z_star)

    unit_assembly = DiscAssembly.build(basis, p)
    if not check_disjoint(unit_assembly):
        scale = max_omega_scale(unit_assembly)
        raise NotDisjoint(
            f"optimal {point.klass} assembly overlaps; omegas must shrink by a factor {scale:.6g}",
            max_omega_scale=scale,
        )

    t_alpha, energy = optimal_scale(basis, p, budget)
    logger.info("minimal assembly for b=%.6g: %s, t=%.6g, energy=%.12g", b, point.klass, t_alpha, energy)
    return MinimalAssembly(
        b=b,
        z_star=point.z_star,
        assembly=unit_assembly.scaled(t_alpha),
        t_alpha=t_alpha,
        energy=energy,
        klass=point.klass,
    )


PHASE_COLUMNS = ["b", "re_zstar", "im_zstar", "class", "param", "f_value"]


def phase_table(points: List[PhasePoint]) -> pd.DataFrame:
    """Phase points as rows; param is missing for Square and Hexagonal"""
    rows = [
        {
            "b": p.b,
            "re_zstar": p.z_star.x,
            "im_zstar": p.z_star.y,
            "class": p.klass.kind.value,
            "param": p.klass.param,
            "f_value": p.f_value,
        }
        for p in points
    ]
    return pd.DataFrame(rows, columns=PHASE_COLUMNS)
