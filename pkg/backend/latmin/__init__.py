"""Minimal two-species periodic disc assemblies: modular objective, phase
diagram and energy pipeline."""

from latmin.assembly_energy import (
    DiscAssembly,
    SpeciesParams,
    check_disjoint,
    interaction_F,
    interaction_F_quadrature,
    mix_weight,
    optimal_scale,
)
from latmin.errors import LatminError
from latmin.lattice_green import LatticeBasis, fourier_green, green_value, half_period_values
from latmin.minimizer import (
    LatticeClass,
    LatticeKind,
    PhasePoint,
    classify,
    maximize_f_b,
    minimal_assembly,
    p_of_b,
    phase_diagram,
    phase_table,
    q_of_b,
    threshold_B,
)
from latmin.modular_core import DEFAULT_BUDGET, GroupWord, SeriesBudget, UhpPoint, canonicalize, eta4
from latmin.objective import MixWeight, f_b, grad_f_b, grad_f_b_reduced
from latmin.series_derivatives import SpeciesTag, axis_derivative
from latmin.verifier import CheckResult, SuiteVerifier, run_suite

__all__ = [
	"CheckResult",
	"DEFAULT_BUDGET",
	"DiscAssembly",
	"GroupWord",
	"LatminError",
	"LatticeBasis",
	"LatticeClass",
	"LatticeKind",
	"MixWeight",
	"PhasePoint",
	"SeriesBudget",
	"SpeciesParams",
	"SpeciesTag",
	"SuiteVerifier",
	"UhpPoint",
	"axis_derivative",
	"canonicalize",
	"check_disjoint",
	"classify",
	"eta4",
	"f_b",
	"fourier_green",
	"grad_f_b",
	"grad_f_b_reduced",
	"green_value",
	"half_period_values",
	"interaction_F",
	"interaction_F_quadrature",
	"maximize_f_b",
	"minimal_assembly",
	"mix_weight",
	"optimal_scale",
	"p_of_b",
	"phase_diagram",
	"phase_table",
	"q_of_b",
	"run_suite",
	"threshold_B",
]
