# backend/latmin/lattice_green.py
import logging
import math
from typing import Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, ValidationError, model_validator
from scipy.special import exp1

from latmin.errors import DomainError, OnLattice
from latmin.modular_core import DEFAULT_BUDGET, PointLike, SeriesBudget, as_uhp_complex

logger = logging.getLogger(__name__)

TWO_PI = 2.0 * math.pi
LATTICE_GUARD = 1e-9
UNIT_AREA_TOL = 1e-12

# Gaussian factors below exp(-EWALD_EXPONENT) are dropped by the Fourier oracle
EWALD_EXPONENT = 40.0


class LatticeBasis(BaseModel):
    """Ordered basis (a1, a2) of a planar lattice with positive orientation"""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    a1: complex
    a2: complex

    @model_validator(mode="after")
    def _positive_orientation(self) -> "LatticeBasis":
        if not (self.a1.conjugate() * self.a2).imag > 0.0:
            raise ValueError("basis must have Im(conj(a1) a2) > 0")
        return self

    @classmethod
    def create(cls, a1: complex, a2: complex) -> "LatticeBasis":
        try:
            return cls(a1=complex(a1), a2=complex(a2))
        except ValidationError as exc:
            raise DomainError(f"({a1}, {a2}) is not a positively oriented basis") from exc

    @classmethod
    def unit_area(cls, tau: PointLike) -> "LatticeBasis":
        """Unit-area basis a1 = 1/sqrt(Im tau), a2 = tau a1"""
        t = as_uhp_complex(tau)
        a1 = 1.0 / math.sqrt(t.imag)
        return cls.create(complex(a1, 0.0), t * a1)

    @property
    def tau(self) -> complex:
        return self.a2 / self.a1

    @property
    def area(self) -> float:
        return (self.a1.conjugate() * self.a2).imag

    @property
    def is_unit_area(self) -> bool:
        return abs(self.area - 1.0) < UNIT_AREA_TOL

    @property
    def matrix(self) -> np.ndarray:
        """Columns are a1 and a2 as real 2-vectors"""
        return np.array([[self.a1.real, self.a2.real], [self.a1.imag, self.a2.imag]])

    def point(self, t1, t2):
        return t1 * self.a1 + t2 * self.a2

    def cell_coordinates(self, zeta) -> Tuple[np.ndarray, np.ndarray]:
        """(t1, t2) with zeta = t1 a1 + t2 a2"""
        w = np.asarray(zeta, dtype=complex) / self.a1
        tau = self.tau
        t2 = w.imag / tau.imag
        return w.real - t2 * tau.real, t2

    def scaled(self, t: float) -> "LatticeBasis":
        return LatticeBasis.create(t * self.a1, t * self.a2)


class HalfPeriodValues(BaseModel):
    model_config = ConfigDict(frozen=True)

    G_mid: float
    G_half1: float
    G_half2: float
    H0: float

    def as_tuple(self) -> Tuple[float, float, float, float]:
        return self.G_mid, self.G_half1, self.G_half2, self.H0


def _product_terms(tau: complex, budget: SeriesBudget, where: str) -> np.ndarray:
    n_terms = budget.terms_for(math.pi * tau.imag, where=where)
    return np.arange(1, n_terms + 1, dtype=float)


def _reduce_to_cell(w: np.ndarray, tau: complex) -> np.ndarray:
    """Shift w = zeta/a1 by lattice vectors so |Im w| <= Im(tau)/2 and |Re w| <= 1/2"""
    w = w - np.round(w.imag / tau.imag) * tau
    return w - np.round(w.real)


def _distance_to_lattice(w: np.ndarray, tau: complex) -> np.ndarray:
    offsets = np.array([m + n * tau for m in (-1, 0, 1) for n in (-1, 0, 1)])
    return np.min(np.abs(w[..., None] - offsets), axis=-1)


def green_value(basis: LatticeBasis, zeta, budget: SeriesBudget = DEFAULT_BUDGET):
    """Periodic Green's function G of -Laplacian with zero cell mean.

    Product formula in w = zeta/a1 after reducing w into the cell; accepts a
    scalar or an array of zeta.
    """
    tau = basis.tau
    w = _reduce_to_cell(np.asarray(zeta, dtype=complex) / basis.a1, tau)
    if np.any(_distance_to_lattice(w, tau) <= LATTICE_GUARD):
        raise OnLattice(f"zeta is within {LATTICE_GUARD}|a1| of a lattice point")

    # |e(w)| can reach exp(pi Im tau), one extra factor covers it
    n_terms = budget.terms_for(TWO_PI * tau.imag, where="green product") + 1
    n = np.arange(1, n_terms + 1, dtype=float).reshape((-1,) + (1,) * w.ndim)
    q = np.exp(2j * np.pi * n * tau)
    e_w = np.exp(2j * np.pi * w)
    log_product = (
        np.log(np.abs(1.0 - e_w))
        + np.log(np.abs(1.0 - q * e_w)).sum(axis=0)
        + np.log(np.abs(1.0 - q / e_w)).sum(axis=0)
    )
    im_w = w.imag
    value = im_w**2 / (2.0 * tau.imag) - im_w / 2.0 + tau.imag / 12.0 - log_product / TWO_PI
    return float(value) if value.ndim == 0 else value


def h_regular(basis: LatticeBasis, zeta, budget: SeriesBudget = DEFAULT_BUDGET):
    """Regular part H = G + (1/2pi) log(2pi|zeta|/sqrt|L|) - |zeta|^2/(4|L|)"""
    zeta = np.asarray(zeta, dtype=complex)
    area = basis.area
    singular = -np.log(TWO_PI * np.abs(zeta) / math.sqrt(area)) / TWO_PI
    value = green_value(basis, zeta, budget) - singular - np.abs(zeta) ** 2 / (4.0 * area)
    return float(value) if np.ndim(value) == 0 else value


def h_regular_at_zero(basis: LatticeBasis, budget: SeriesBudget = DEFAULT_BUDGET) -> float:
    """H(0) = -(1/2pi) log|sqrt(Im tau) e(tau/12) prod (1 - e(n tau))^2|"""
    tau = basis.tau
    n = _product_terms(2.0 * tau, budget, "H(0) product")
    log_prod = float(np.sum(np.log(np.abs(1.0 - np.exp(2j * np.pi * n * tau)))))
    return -math.log(tau.imag) / (4.0 * math.pi) + tau.imag / 12.0 - log_prod / math.pi


def half_period_values(basis: LatticeBasis, budget: SeriesBudget = DEFAULT_BUDGET) -> HalfPeriodValues:
    """Closed forms of G at (a1+a2)/2, a1/2, a2/2 and of H at 0"""
    tau = basis.tau
    n = _product_terms(tau, budget, "half-period products")
    whole = np.exp(2j * np.pi * n * tau)
    half = np.exp(2j * np.pi * (n - 0.5) * tau)

    g_mid = -tau.imag / 24.0 - float(np.sum(np.log(np.abs(1.0 + half)))) / math.pi
    g_half1 = -math.log(2.0) / TWO_PI + tau.imag / 12.0 - float(np.sum(np.log(np.abs(1.0 + whole)))) / math.pi
    g_half2 = -tau.imag / 24.0 - float(np.sum(np.log(np.abs(1.0 - half)))) / math.pi
    return HalfPeriodValues(
        G_mid=g_mid,
        G_half1=g_half1,
        G_half2=g_half2,
        H0=h_regular_at_zero(basis, budget),
    )


def verify_product_identities(tau: PointLike, budget: SeriesBudget = DEFAULT_BUDGET) -> Tuple[float, float]:
    """Residuals of the two eta-product rearrangements at tau"""
    t = as_uhp_complex(tau)
    n = _product_terms(t, budget, "product identities")
    whole = np.exp(2j * np.pi * n * t)
    half = np.exp(2j * np.pi * (n - 0.5) * t)
    shifted = np.exp(2j * np.pi * n * (t + 1.0) / 2.0)

    residual1 = abs(np.prod(1.0 - whole) * np.prod(1.0 + half) - np.prod(1.0 - shifted))
    residual2 = abs(np.prod(1.0 + half) * np.prod(1.0 + whole) * np.prod(1.0 - half) - 1.0)
    return float(residual1), float(residual2)


def fourier_green(basis: LatticeBasis, zeta: complex, cutoff: float = 400.0) -> float:
    """Dual-lattice evaluation of G, independent of the product formula.

    The sum over k in the dual lattice (|k| <= cutoff) is damped by
    exp(-|k|^2/(4a^2)); the damped-out part is added back exactly in real
    space as sum E1(a^2|zeta - l|^2)/(4pi) - 1/(4 a^2 |L|).
    """
    area = basis.area
    alpha_sq = math.pi / area
    m_real = basis.matrix
    dual = np.linalg.inv(m_real).T
    t = np.linalg.solve(m_real, np.array([zeta.real, zeta.imag]))
    t = t - np.round(t)
    zeta_cell = complex(*(m_real @ t))

    # dual space
    k_max = min(cutoff, math.sqrt(4.0 * alpha_sq * EWALD_EXPONENT))
    sigma_dual = float(np.min(np.linalg.svd(dual, compute_uv=False)))
    span = math.ceil(k_max / (TWO_PI * sigma_dual)) + 1
    idx = np.arange(-span, span + 1)
    mm, nn = np.meshgrid(idx, idx, indexing="ij")
    kx = TWO_PI * (mm * dual[0, 0] + nn * dual[0, 1])
    ky = TWO_PI * (mm * dual[1, 0] + nn * dual[1, 1])
    k_sq = kx**2 + ky**2
    keep = (k_sq > 0.0) & (k_sq <= k_max**2)
    phase = TWO_PI * (mm * t[0] + nn * t[1])
    dual_sum = np.sum(np.exp(-k_sq[keep] / (4.0 * alpha_sq)) * np.cos(phase[keep]) / k_sq[keep]) / area

    # real space
    r_max = math.sqrt(EWALD_EXPONENT / alpha_sq)
    sigma_real = float(np.min(np.linalg.svd(m_real, compute_uv=False)))
    span = math.ceil(r_max / sigma_real) + 1
    idx = np.arange(-span, span + 1)
    mm, nn = np.meshgrid(idx, idx, indexing="ij")
    lattice = mm * basis.a1 + nn * basis.a2
    r_sq = np.abs(zeta_cell - lattice) ** 2
    near = r_sq <= r_max**2
    real_sum = float(np.sum(exp1(alpha_sq * r_sq[near]))) / (4.0 * math.pi)

    return float(dual_sum) + real_sum - 1.0 / (4.0 * alpha_sq * area)
