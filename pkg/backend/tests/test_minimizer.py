# backend/tests/test_minimizer.py
import math

import numpy as np
import pytest

from latmin.assembly_energy import SpeciesParams, check_disjoint, optimal_scale
from latmin.errors import NotDisjoint, OutOfRange, Unclassified
from latmin.lattice_green import LatticeBasis
from latmin.minimizer import (
    PHASE_COLUMNS,
    LatticeClass,
    LatticeKind,
    classify,
    grid_maximum,
    grid_points,
    maximize_f_b,
    minimal_assembly,
    p_of_b,
    phase_diagram,
    phase_grid,
    phase_table,
    q_of_b,
    threshold_B,
)
from latmin.modular_core import canonicalize
from latmin.objective import axis_gradient, dual_point, f_b
from latmin.series_derivatives import SQRT3

HEX = complex(0.5, SQRT3 / 2.0)


def test_threshold_value(budget):
    assert threshold_B(budget) == pytest.approx(0.1867, abs=5e-4)


def test_threshold_stable_under_larger_budget(budget):
    assert threshold_B(budget.doubled()) == pytest.approx(threshold_B(budget), abs=1e-10)


def test_q_at_zero_is_sqrt3(budget):
    assert q_of_b(0.0, budget) == SQRT3


def test_q_is_a_root_of_the_axis_gradient(budget):
    for b in (0.02, 0.1, 0.18):
        q = q_of_b(b, budget)
        assert 1.0 < q < SQRT3
        assert axis_gradient(b, q, budget) == pytest.approx(0.0, abs=1e-9)


def test_q_decreases(budget):
    qs = [q_of_b(b, budget) for b in np.linspace(0.0, threshold_B(budget) - 1e-3, 20)]
    assert np.all(np.diff(qs) < 0.0)


def test_q_out_of_range(budget):
    with pytest.raises(OutOfRange):
        q_of_b(0.5, budget)
    with pytest.raises(OutOfRange):
        q_of_b(-0.1, budget)


def test_p_at_one_is_one_half(budget):
    assert p_of_b(1.0, budget) == pytest.approx(0.5, abs=1e-15)


def test_p_out_of_range(budget):
    with pytest.raises(OutOfRange):
        p_of_b(0.5, budget)


def test_maximizer_at_one_is_hexagonal(budget):
    point = maximize_f_b(1.0, budget)
    assert abs(point.z_star.z - HEX) <= 1e-8
    assert point.klass.kind is LatticeKind.HEXAGONAL


def test_maximizer_at_zero_is_rectangular(budget):
    point = maximize_f_b(0.0, budget)
    assert point.z_star.z == pytest.approx(SQRT3 * 1j)
    assert point.klass == LatticeClass(kind=LatticeKind.RECTANGULAR, param=SQRT3)


def test_maximizer_in_middle_is_square(budget):
    point = maximize_f_b(0.5, budget)
    assert point.z_star.z == 1j
    assert point.klass.kind is LatticeKind.SQUARE
    assert point.f_value == pytest.approx(f_b(0.5, 1j, budget))


def test_maximizer_beats_grid(budget):
    for b in (0.1, 0.5, 0.9):
        point = maximize_f_b(b, budget, check_grid=False)
        _, best = grid_maximum(b, budget)
        assert best <= point.f_value + 1e-9


@pytest.mark.parametrize("b", [0.05, 0.1, 0.15])
def test_maximizers_are_dual(b, budget):
    image, _ = canonicalize(dual_point(maximize_f_b(b, budget).z_star))
    assert abs(image.z - maximize_f_b(1.0 - b, budget).z_star.z) <= 1e-8


def test_phase_classes_coarse_grid(budget):
    points = phase_diagram(0.0, 1.0, 0.25, budget)
    assert [p.klass.kind for p in points] == [
        LatticeKind.RECTANGULAR,
        LatticeKind.SQUARE,
        LatticeKind.SQUARE,
        LatticeKind.SQUARE,
        LatticeKind.HEXAGONAL,
    ]
    assert [p.b for p in points] == [0.0, 0.25, 0.5, 0.75, 1.0]


@pytest.mark.slow
def test_phase_transitions_fine_grid(budget):
    threshold = threshold_B(budget)
    points = phase_diagram(0.0, 1.0, 0.005, budget, n_jobs=2)
    assert len(points) == 201
    for p in points:
        if p.b < threshold - 0.005:
            assert p.klass.kind is LatticeKind.RECTANGULAR
        elif threshold + 0.005 < p.b < 1.0 - threshold - 0.005:
            assert p.klass.kind is LatticeKind.SQUARE
        elif p.b > 1.0 - threshold + 0.005:
            assert p.klass.kind in (LatticeKind.RHOMBIC, LatticeKind.HEXAGONAL)
    assert points[-1].klass.kind is LatticeKind.HEXAGONAL
    ratios = [p.klass.param for p in points if p.klass.kind is LatticeKind.RECTANGULAR]
    angles = [p.klass.param for p in points if p.klass.kind is LatticeKind.RHOMBIC]
    assert np.all(np.diff(ratios) < 0.0)
    assert np.all(np.diff(angles) < 0.0)


def test_phase_grid_counts():
    assert phase_grid(0.0, 1.0, 0.25) == [0.0, 0.25, 0.5, 0.75, 1.0]
    assert len(phase_grid(0.0, 0.1, 0.03)) == 4
    assert phase_grid(0.3, 0.3, 0.1) == [0.3]
    with pytest.raises(OutOfRange):
        phase_grid(0.5, 0.2, 0.1)
    with pytest.raises(OutOfRange):
        phase_grid(0.0, 1.0, 0.0)


def test_phase_table_columns(budget):
    table = phase_table(phase_diagram(0.0, 0.5, 0.5, budget))
    assert list(table.columns) == PHASE_COLUMNS
    assert table["class"].tolist() == ["Rectangular", "Square"]
    assert math.isnan(table["param"].iloc[1])


@pytest.mark.parametrize(
    "z, kind, param",
    [
        (1j, LatticeKind.SQUARE, None),
        (1.0 + 1.0j, LatticeKind.SQUARE, None),
        (HEX, LatticeKind.HEXAGONAL, None),
        (1.5j, LatticeKind.RECTANGULAR, 1.5),
        (0.5j, LatticeKind.RECTANGULAR, 2.0),
        (complex(math.cos(1.2), math.sin(1.2)), LatticeKind.RHOMBIC, 1.2),
    ],
)
def test_classify(z, kind, param):
    klass = classify(z)
    assert klass.kind is kind
    if param is None:
        assert klass.param is None
    else:
        assert klass.param == pytest.approx(param)


def test_classify_rejects_generic_points():
    with pytest.raises(Unclassified):
        classify(0.3 + 1.4j)


def test_lattice_class_validation():
    with pytest.raises(ValueError):
        LatticeClass(kind=LatticeKind.RECTANGULAR, param=0.5)
    with pytest.raises(ValueError):
        LatticeClass(kind=LatticeKind.SQUARE, param=1.0)
    assert str(LatticeClass(kind=LatticeKind.HEXAGONAL)) == "Hexagonal"


def test_grid_points_stay_outside_unit_disc():
    points = grid_points(21)
    assert np.all(np.abs(points) >= 1.0)
    assert np.all((points.real >= 0.0) & (points.real <= 1.0))


def test_minimal_assembly_square(budget):
    params = SpeciesParams(omega1=0.05, omega2=0.04, g11=1.0, g12=0.6, g22=1.2)
    result = minimal_assembly(params, budget)
    assert result.klass.kind is LatticeKind.SQUARE
    t_alpha, energy = optimal_scale(LatticeBasis.unit_area(1j), params, budget)
    assert result.t_alpha == pytest.approx(t_alpha)
    assert result.energy == pytest.approx(energy)
    assert result.assembly.basis.area == pytest.approx(t_alpha**2)
    assert check_disjoint(result.assembly)
    assembly, _, _, klass = result.as_tuple()
    assert klass is result.klass and assembly is result.assembly


def test_minimal_assembly_overlap(budget):
    params = SpeciesParams(omega1=0.3, omega2=0.3, g11=1.0, g12=0.0, g22=1.0)
    with pytest.raises(NotDisjoint) as info:
        minimal_assembly(params, budget)
    assert 0.0 < info.value.max_omega_scale < 1.0


def test_threshold_is_the_root_of_the_blended_slope(budget):
    from latmin.series_derivatives import SpeciesTag, axis_derivative

    threshold = threshold_B(budget)
    d = axis_derivative(SpeciesTag.ZERO, 1, 1.0, budget)
    e = axis_derivative(SpeciesTag.ONE, 1, 1.0, budget)
    assert abs(threshold * e + (1.0 - threshold) * d) < 1e-10


def test_q_near_threshold_approaches_one(budget):
    assert 1.0 < q_of_b(threshold_B(budget) - 1e-4, budget) < 1.1


def test_q_matches_sign_change_scan(budget):
    ys = np.linspace(1.0 + 1e-5, SQRT3, 73206)
    values = axis_gradient(0.09, ys, budget)
    crossing = np.nonzero(np.diff(np.sign(values)))[0]
    assert crossing.size == 1
    assert q_of_b(0.09, budget) == pytest.approx(ys[crossing[0]], abs=2e-5)


def test_p_matches_dual_of_q(budget):
    q = q_of_b(0.1, budget)
    assert p_of_b(0.9, budget) == pytest.approx(dual_point(q * 1j).x, abs=1e-12)


def test_maximizer_rhombic_branch(budget):
    point = maximize_f_b(0.95, budget)
    assert abs(point.z_star.modulus - 1.0) < 1e-12
    assert math.pi / 3 < point.z_star.arg < math.pi / 2
    assert point.klass.kind is LatticeKind.RHOMBIC


def test_minimal_assembly_endpoints(budget):
    rectangular = minimal_assembly(SpeciesParams(omega1=0.01, omega2=0.01, g11=1.0, g12=0.0, g22=1.0), budget)
    assert rectangular.klass == LatticeClass(kind=LatticeKind.RECTANGULAR, param=SQRT3)
    hexagonal = minimal_assembly(SpeciesParams(omega1=0.01, omega2=0.01, g11=1.0, g12=1.0, g22=1.0), budget)
    assert hexagonal.klass.kind is LatticeKind.HEXAGONAL


def test_minimal_energy_beats_nearby_lattice(budget):
    params = SpeciesParams(omega1=0.01, omega2=0.01, g11=1.0, g12=0.5, g22=1.0)
    result = minimal_assembly(params, budget)
    _, nearby = optimal_scale(LatticeBasis.unit_area(1.05j), params, budget)
    assert result.energy < nearby


def test_axis_gradient_negative_in_square_phase(budget):
    threshold = threshold_B(budget)
    ys = np.array([1.05, 1.2, 1.5, 2.0])
    for b in np.arange(threshold, 1.0 - threshold, 0.02):
        assert np.all(axis_gradient(b, ys, budget) < 0.0)
