# backend/api/endpoints.py
import logging
from contextlib import contextmanager
from typing import Iterator, List, Optional

import pandas as pd
from pydantic import ValidationError

from api.schemas import (
    CheckLine,
    EnergyReport,
    EvalReport,
    EvalRequest,
    GreenReport,
    GreenRequest,
    OutputFormat,
    PhaseReport,
    PhaseRequest,
    PhaseRow,
    Report,
    SuiteName,
    VerifyReport,
)
from core.config import settings
from core.exceptions import CliError, DomainInputError, NumericalError, OverlapError, ParseError
from latmin.assembly_energy import SpeciesParams, check_disjoint
from latmin.errors import DomainError, InvalidParams, LatminError, NotDisjoint, OnLattice, OutOfRange
from latmin.lattice_green import LatticeBasis, green_value, half_period_values
from latmin.minimizer import minimal_assembly, phase_diagram, phase_table
from latmin.modular_core import SeriesBudget, UhpPoint, canonicalize
from latmin.objective import f_b, grad_f_b_reduced
from latmin.verifier import SuiteVerifier
from utils.file_handlers import dict_to_json, frame_to_csv, lines_to_text, write_output

logger = logging.getLogger(__name__)


@contextmanager
def translate_errors() -> Iterator[None]:
    """Map library and validation errors onto CLI exit codes"""
    try:
        yield
    except CliError:
        raise
    except ValidationError as exc:
        raise ParseError(_first_error(exc)) from exc
    except NotDisjoint as exc:
        raise OverlapError(str(exc), max_omega_scale=exc.max_omega_scale) from exc
    except (DomainError, OnLattice, InvalidParams, OutOfRange) as exc:
        raise DomainInputError(str(exc)) from exc
    except LatminError as exc:
        raise NumericalError(f"{type(exc).__name__}: {exc}") from exc


def _first_error(exc: ValidationError) -> str:
    error = exc.errors()[0]
    location = ".".join(str(part) for part in error.get("loc", ()))
    return f"{location}: {error.get('msg')}" if location else str(error.get("msg"))


def make_budget(rel_tol: Optional[float] = None, max_terms: Optional[int] = None) -> SeriesBudget:
    with translate_errors():
        return SeriesBudget(
            rel_tol=settings.BUDGET_REL_TOL if rel_tol is None else rel_tol,
            max_terms=settings.BUDGET_MAXTERMS if max_terms is None else max_terms,
        )


def render(report: Report, fmt: OutputFormat) -> str:
    if fmt is OutputFormat.JSON:
        return dict_to_json(report.as_dict())
    if fmt is OutputFormat.CSV:
        row = report.model_dump(by_alias=True, exclude={"schema_version"})
        return frame_to_csv(pd.DataFrame([row]))
    return lines_to_text(report.text_lines())


def cmd_eval(b: float, z: str, fmt: OutputFormat, out: Optional[str], budget: SeriesBudget) -> int:
    """f_b and its gradient at z, with the canonical representative"""
    with translate_errors():
        request = EvalRequest(b=b, z=z)
        point = UhpPoint.from_complex(request.z)
        x_b, y_b = grad_f_b_reduced(request.b, point, budget)
        canonical, word = canonicalize(point)
        report = EvalReport(
            b=request.b,
            re_z=point.x,
            im_z=point.y,
            f_value=f_b(request.b, point, budget),
            x_b=x_b,
            y_b=y_b,
            re_canonical=canonical.x,
            im_canonical=canonical.y,
            word=str(word),
            f_canonical=f_b(request.b, canonical, budget),
        )
    write_output(render(report, fmt), out)
    return 0


def cmd_phase(
    b_min: float,
    b_max: float,
    step: float,
    fmt: OutputFormat,
    out: Optional[str],
    budget: SeriesBudget,
    n_jobs: int = 1,
    grid: int = 161,
) -> int:
    """Phase sweep over b; CSV columns b,re_zstar,im_zstar,class,param,f_value"""
    with translate_errors():
        request = PhaseRequest(b_min=b_min, b_max=b_max, step=step)
        points = phase_diagram(request.b_min, request.b_max, request.step, budget, n_jobs=n_jobs, grid=grid)

    if fmt is OutputFormat.CSV:
        text = frame_to_csv(phase_table(points))
    else:
        rows = [
            PhaseRow(
                b=p.b,
                re_zstar=p.z_star.x,
                im_zstar=p.z_star.y,
                lattice_class=p.klass.kind.value,
                param=p.klass.param,
                f_value=p.f_value,
            )
            for p in points
        ]
        report = PhaseReport(rows=rows)
        text = dict_to_json(report.as_dict()) if fmt is OutputFormat.JSON else lines_to_text(report.text_lines())
    write_output(text, out)
    return 0


def cmd_verify(
    suite: str,
    fmt: OutputFormat,
    out: Optional[str],
    budget: SeriesBudget,
    seed: int,
    n_jobs: int = 1,
) -> int:
    """Run a verification suite; exit 1 if any non-informational check failed"""
    try:
        name = SuiteName(suite).value
    except ValueError as exc:
        raise ParseError(f"unknown suite {suite!r}") from exc
    verifier = SuiteVerifier(budget=budget, seed=seed, n_jobs=n_jobs)
    outcome = verifier.run(name)
    for warning in outcome["warnings"]:
        logger.warning(warning)

    report = VerifyReport(
        suite=name,
        seed=seed,
        all_passed=outcome["all_passed"],
        checks=[CheckLine(**{**r.model_dump(), "relation": r.relation.value}) for r in verifier.results],
        lines=[r.line() for r in verifier.results],
    )
    if fmt is OutputFormat.CSV:
        text = frame_to_csv(pd.DataFrame([c.model_dump() for c in report.checks]))
    elif fmt is OutputFormat.JSON:
        text = dict_to_json(report.as_dict())
    else:
        text = lines_to_text(report.text_lines())
    write_output(text, out)

    failed: List[str] = [r.name for r in verifier.failed()]
    if failed:
        logger.error("failed checks: %s", ", ".join(failed))
        return 1
    return 0


def cmd_energy(
    omega1: float,
    omega2: float,
    g11: float,
    g12: float,
    g22: float,
    fmt: OutputFormat,
    out: Optional[str],
    budget: SeriesBudget,
) -> int:
    """Least-energy assembly for the given species parameters"""
    with translate_errors():
        params = SpeciesParams.create(omega1, omega2, g11, g12, g22)
        result = minimal_assembly(params, budget)
        basis = result.assembly.basis
        report = EnergyReport(
            b=result.b,
            re_zstar=result.z_star.x,
            im_zstar=result.z_star.y,
            lattice_class=result.klass.kind.value,
            param=result.klass.param,
            re_alpha1=basis.a1.real,
            im_alpha1=basis.a1.imag,
            re_alpha2=basis.a2.real,
            im_alpha2=basis.a2.imag,
            r1=result.assembly.r1,
            r2=result.assembly.r2,
            t_alpha=result.t_alpha,
            energy=result.energy,
            disjoint=check_disjoint(result.assembly),
        )
    write_output(render(report, fmt), out)
    return 0


def cmd_green(tau: str, t1: float, t2: float, fmt: OutputFormat, out: Optional[str], budget: SeriesBudget) -> int:
    """Green's function at t1 a1 + t2 a2 for the unit-area basis of tau"""
    with translate_errors():
        request = GreenRequest(tau=tau, t1=t1, t2=t2)
        basis = LatticeBasis.unit_area(request.tau)
        zeta = basis.point(request.t1, request.t2)
        value = green_value(basis, zeta, budget)
        half = half_period_values(basis, budget)
        report = GreenReport(
            re_tau=request.tau.real,
            im_tau=request.tau.imag,
            t1=request.t1,
            t2=request.t2,
            green=value,
            h0=half.H0,
            g_mid=half.G_mid,
            g_half1=half.G_half1,
            g_half2=half.G_half2,
        )
    write_output(render(report, fmt), out)
    return 0
