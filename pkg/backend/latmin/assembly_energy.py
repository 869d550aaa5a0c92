# backend/latmin/assembly_energy.py
import logging
import math
from itertools import product
from typing import Dict, List, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, ValidationError, model_validator

from latmin.errors import DegenerateInteraction, DomainError, InvalidParams, NotDisjoint
from latmin.lattice_green import LatticeBasis, green_value, half_period_values
from latmin.modular_core import DEFAULT_BUDGET, SeriesBudget
from latmin.objective import MixWeight, WeightLike, weight_value

logger = logging.getLogger(__name__)

PSD_SLACK = 1e-12

# Disc centers in cell coordinates: species 1 twice, then species 2 twice
CENTER_COORDINATES = ((0.75, 0.25), (0.25, 0.75), (0.25, 0.25), (0.75, 0.75))
CENTER_SPECIES = (1, 1, 2, 2)


class SpeciesParams(BaseModel):
    """Volume fractions and interaction matrix of the two species"""

    model_config = ConfigDict(frozen=True)

    omega1: float = Field(..., gt=0.0)
    omega2: float = Field(..., gt=0.0)
    g11: float = Field(..., gt=0.0)
    g12: float = Field(..., ge=0.0)
    g22: float = Field(..., gt=0.0)

    @model_validator(mode="after")
    def _constraints(self) -> "SpeciesParams":
        if not self.omega1 + self.omega2 < 1.0:
            raise ValueError(f"omega1 + omega2 must be < 1, got {self.omega1 + self.omega2}")
        if self.g11 * self.g22 - self.g12**2 < -PSD_SLACK * self.g11 * self.g22:
            raise ValueError("interaction matrix must satisfy g11 g22 >= g12^2")
        return self

    @classmethod
    def create(cls, omega1: float, omega2: float, g11: float, g12: float, g22: float) -> "SpeciesParams":
        try:
            return cls(omega1=omega1, omega2=omega2, g11=g11, g12=g12, g22=g22)
        except ValidationError as exc:
            raise InvalidParams(str(exc)) from exc

    def gamma(self, j: int, k: int) -> float:
        return {(1, 1): self.g11, (2, 2): self.g22}.get((j, k), self.g12)

    def omega(self, j: int) -> float:
        return self.omega1 if j == 1 else self.omega2

    def swapped(self) -> "SpeciesParams":
        return SpeciesParams(omega1=self.omega2, omega2=self.omega1, g11=self.g22, g12=self.g12, g22=self.g11)


class DiscAssembly(BaseModel):
    """Four discs per cell: (xi1, xi1') of species 1 and (xi2, xi2') of species 2"""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    basis: LatticeBasis
    r1: float = Field(..., gt=0.0)
    r2: float = Field(..., gt=0.0)
    centers: Tuple[complex, complex, complex, complex]

    @classmethod
    def with_radii(cls, basis: LatticeBasis, r1: float, r2: float) -> "DiscAssembly":
        centers = tuple(basis.point(t1, t2) for t1, t2 in CENTER_COORDINATES)
        return cls(basis=basis, r1=r1, r2=r2, centers=centers)

    @classmethod
    def build(cls, basis: LatticeBasis, params: SpeciesParams) -> "DiscAssembly":
        """Radii r_j = sqrt(omega_j |D| / (2 pi))"""
        r1 = math.sqrt(params.omega1 * basis.area / (2.0 * math.pi))
        r2 = math.sqrt(params.omega2 * basis.area / (2.0 * math.pi))
        return cls.with_radii(basis, r1, r2)

    def radius(self, species: int) -> float:
        return self.r1 if species == 1 else self.r2

    def scaled(self, t: float) -> "DiscAssembly":
        return DiscAssembly.with_radii(self.basis.scaled(t), t * self.r1, t * self.r2)


def mix_weight(p: SpeciesParams) -> MixWeight:
    """b = 2 g12 w1 w2 / (g11 w1^2 + g22 w2^2), always in [0, 1]"""
    try:
        SpeciesParams.model_validate(p.model_dump())
    except ValidationError as exc:
        raise InvalidParams(str(exc)) from exc
    b = 2.0 * p.g12 * p.omega1 * p.omega2 / (p.g11 * p.omega1**2 + p.g22 * p.omega2**2)
    return MixWeight(b=min(1.0, b))


def _gauss_reduced(a1: complex, a2: complex) -> Tuple[complex, complex]:
    """Lagrange-Gauss reduction, same lattice with a short nearly orthogonal basis"""
    if abs(a2) < abs(a1):
        a1, a2 = a2, a1
    while True:
        a2 = a2 - round((a2 / a1).real) * a1
        if abs(a2) >= abs(a1):
            return a1, a2
        a1, a2 = a2, a1


def separation_ratio(a: DiscAssembly) -> float:
    """Smallest center distance over radius sum across all pairs and translates"""
    b1, b2 = _gauss_reduced(a.basis.a1, a.basis.a2)
    rel = b2 / b1
    shifts = np.array([m * b1 + n * b2 for m, n in product(range(-2, 3), repeat=2)])
    ratio = math.inf
    for i, j in product(range(4), repeat=2):
        if j < i:
            continue
        diff = a.centers[i] - a.centers[j]
        w = diff / b1
        s2 = w.imag / rel.imag
        s1 = w.real - s2 * rel.real
        diff = diff - round(s1) * b1 - round(s2) * b2
        distances = np.abs(diff + shifts)
        if i == j:
            distances = distances[distances > 0.0]
        radii = a.radius(CENTER_SPECIES[i]) + a.radius(CENTER_SPECIES[j])
        ratio = min(ratio, float(np.min(distances)) / radii)
    return ratio


def check_disjoint(a: DiscAssembly) -> bool:
    """True iff no two discs overlap or touch, across all lattice translates"""
    return separation_ratio(a) > 1.0


def max_omega_scale(a: DiscAssembly) -> float:
    """Factor on both omegas at which the closest discs would touch"""
    return separation_ratio(a) ** 2


def _require_unit_area(basis: LatticeBasis) -> None:
    if not basis.is_unit_area:
        raise DomainError(f"basis must have unit cell area, got {basis.area}")


def f_tilde(basis: LatticeBasis, b: WeightLike, budget: SeriesBudget = DEFAULT_BUDGET) -> float:
    """H(0) + G((a1+a2)/2) + b (G(a1/2) + G(a2/2))"""
    _require_unit_area(basis)
    hp = half_period_values(basis, budget)
    return hp.H0 + hp.G_mid + weight_value(b) * (hp.G_half1 + hp.G_half2)


def disc_constants(r_j: float, r_k: float, area: float, same: bool) -> Tuple[float, float]:
    """(c, c') correction terms of the disc integrals of G beyond the point values"""
    cross = math.pi**2 * (r_j**2 * r_k**4 + r_j**4 * r_k**2) / (8.0 * area)
    if not same:
        return cross, cross
    r = r_j
    self_term = (
        math.pi * r**4 / 8.0
        - math.pi * r**4 / 2.0 * math.log(2.0 * math.pi * r / math.sqrt(area))
        + math.pi**2 * r**6 / (4.0 * area)
    )
    return self_term, cross


def _checked_assembly(basis: LatticeBasis, p: SpeciesParams) -> DiscAssembly:
    _require_unit_area(basis)
    assembly = DiscAssembly.build(basis, p)
    if not check_disjoint(assembly):
        scale = max_omega_scale(assembly)
        raise NotDisjoint(
            f"discs overlap for tau={basis.tau}; omegas must shrink by a factor {scale:.6g}",
            max_omega_scale=scale,
        )
    return assembly


def interaction_F(basis: LatticeBasis, p: SpeciesParams, budget: SeriesBudget = DEFAULT_BUDGET) -> float:
    """Interaction energy of the disc assembly on a unit-area basis"""
    assembly = _checked_assembly(basis, p)
    r1, r2, area = assembly.r1, assembly.r2, basis.area
    b = mix_weight(p)

    c11, c11p = disc_constants(r1, r1, area, same=True)
    c22, c22p = disc_constants(r2, r2, area, same=True)
    c12, c12p = disc_constants(r1, r2, area, same=False)

    weight = p.g11 * math.pi**2 * r1**4 + p.g22 * math.pi**2 * r2**4
    return (
        weight * f_tilde(basis, b, budget)
        + p.g11 * (c11 + c11p)
        + p.g22 * (c22 + c22p)
        + 2.0 * p.g12 * (c12 + c12p)
    )


def interaction_terms(basis: LatticeBasis, p: SpeciesParams, budget: SeriesBudget = DEFAULT_BUDGET) -> Dict[str, float]:
    """Term-by-term pieces of the interaction energy, keyed by species pair"""
    assembly = _checked_assembly(basis, p)
    hp = half_period_values(basis, budget)
    r1, r2, area = assembly.r1, assembly.r2, basis.area
    c11, c11p = disc_constants(r1, r1, area, same=True)
    c22, c22p = disc_constants(r2, r2, area, same=True)
    c12, c12p = disc_constants(r1, r2, area, same=False)
    pi_sq = math.pi**2
    return {
        "11": p.g11 * (pi_sq * r1**4 * (hp.H0 + hp.G_mid) + c11 + c11p),
        "22": p.g22 * (pi_sq * r2**4 * (hp.H0 + hp.G_mid) + c22 + c22p),
        "12": 2.0 * p.g12 * (pi_sq * r1**2 * r2**2 * (hp.G_half1 + hp.G_half2) + c12 + c12p),
    }


def disc_nodes(center: complex, radius: float, n_radial: int = 8, n_angular: int = 24, offset: float = 0.0):
    """Product Gauss rule on a disc: Legendre in radius, uniform in angle"""
    x, w = np.polynomial.legendre.leggauss(n_radial)
    rho = radius * (x + 1.0) / 2.0
    rho_weights = radius / 2.0 * w * rho
    theta = 2.0 * math.pi * (np.arange(n_angular) + offset) / n_angular
    nodes = center + rho[:, None] * np.exp(1j * theta[None, :])
    weights = rho_weights[:, None] * np.full(n_angular, 2.0 * math.pi / n_angular)[None, :]
    return nodes.ravel(), weights.ravel()


def interaction_F_quadrature(
    basis: LatticeBasis,
    p: SpeciesParams,
    budget: SeriesBudget = DEFAULT_BUDGET,
    n_radial: int = 8,
    n_angular: int = 24,
) -> float:
    """Interaction energy by quadrature of G over all 16 ordered disc pairs.

    Within one disc the log kernel is integrated exactly and only the smooth
    remainder G + log|d|/(2pi) goes through the quadrature.
    """
    assembly = _checked_assembly(basis, p)
    discs: List[Tuple[int, complex, float]] = [
        (s, c, assembly.radius(s)) for s, c in zip(CENTER_SPECIES, assembly.centers)
    ]

    total = 0.0
    for (i, (sj, cj, rj)), (k, (sk, ck, rk)) in product(enumerate(discs), repeat=2):
        gamma = p.gamma(sj, sk)
        if i == k:
            nodes_a, w_a = disc_nodes(cj, rj, n_radial, n_angular)
            nodes_b, w_b = disc_nodes(cj, rj, n_radial, n_angular, offset=0.5)
            diff = nodes_a[:, None] - nodes_b[None, :]
            smooth = green_value(basis, diff, budget) + np.log(np.abs(diff)) / (2.0 * math.pi)
            log_part = -math.pi * rj**4 * (math.log(rj) - 0.25) / 2.0
            integral = float(w_a @ smooth @ w_b) + log_part
        else:
            nodes_a, w_a = disc_nodes(cj, rj, n_radial, n_angular)
            nodes_b, w_b = disc_nodes(ck, rk, n_radial, n_angular)
            integral = float(w_a @ green_value(basis, nodes_a[:, None] - nodes_b[None, :], budget) @ w_b)
        total += gamma / 2.0 * integral
    return total


def _perimeter_coefficient(p: SpeciesParams) -> float:
    return 2.0 * math.sqrt(2.0 * math.pi * p.omega1) + 2.0 * math.sqrt(2.0 * math.pi * p.omega2)


def energy_at_scale(basis: LatticeBasis, p: SpeciesParams, t: float, budget: SeriesBudget = DEFAULT_BUDGET) -> float:
    """Energy per cell area of the assembly scaled by t"""
    return _perimeter_coefficient(p) / t + t**2 * interaction_F(basis, p, budget)


def optimal_scale(basis: LatticeBasis, p: SpeciesParams, budget: SeriesBudget = DEFAULT_BUDGET) -> Tuple[float, float]:
    """(t_alpha, energy per cell area) minimizing c1/t + t^2 F"""
    interaction = interaction_F(basis, p, budget)
    if not interaction > 0.0:
        raise DegenerateInteraction(f"interaction form must be positive, got {interaction}")
    form = 2.0 * interaction
    t_alpha = (_perimeter_coefficient(p) / form) ** (1.0 / 3.0)
    half_perimeter = _perimeter_coefficient(p) / 2.0
    energy = 3.0 * half_perimeter ** (2.0 / 3.0) * interaction ** (1.0 / 3.0)
    logger.debug("optimal scale for tau=%s: t=%.6g energy=%.12g", basis.tau, t_alpha, energy)
    return t_alpha, energy
