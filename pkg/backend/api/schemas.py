# backend/api/schemas.py
import re
from enum import Enum
from typing import Any, Dict, List, Optional

from pydantic import BaseModel, ConfigDict, Field, field_validator

SCHEMA_VERSION = 1

_NUMBER = r"(?:\d+(?:\.\d*)?|\.\d+)(?:[eE][+-]?\d+)?"
_PURE_IMAGINARY = re.compile(rf"^(?P<im>[+-]?(?:{_NUMBER})?)[ij]$")
_GENERAL = re.compile(rf"^(?P<re>[+-]?{_NUMBER})(?:(?P<sign>[+-])(?P<im>{_NUMBER})?[ij])?$")


def parse_complex_literal(text: str) -> complex:
    """Parse 'a+bi', 'bi', 'i', '-i' or 'a', spaces allowed, '.' as decimal point"""
    literal = re.sub(r"\s+", "", str(text))
    match = _PURE_IMAGINARY.match(literal)
    if match:
        im = match.group("im")
        return complex(0.0, float(im + "1") if im in ("", "+", "-") else float(im))
    match = _GENERAL.match(literal)
    if match:
        real = float(match.group("re"))
        if match.group("sign") is None:
            return complex(real, 0.0)
        imag = float(match.group("im") or "1")
        return complex(real, -imag if match.group("sign") == "-" else imag)
    raise ValueError(f"cannot parse complex literal {text!r}")


class OutputFormat(str, Enum):
    JSON = "json"
    CSV = "csv"
    TEXT = "text"


class SuiteName(str, Enum):
    CONSTANTS = "constants"
    BETA = "beta"
    APPENDIX = "appendix"
    LEMMAS = "lemmas"
    ALL = "all"


class ComplexInput(BaseModel):
    model_config = ConfigDict(arbitrary_types_allowed=True)

    @staticmethod
    def _coerce(v: Any) -> complex:
        if isinstance(v, str):
            return parse_complex_literal(v)
        return complex(v)


class EvalRequest(ComplexInput):
    b: float
    z: complex

    @field_validator("z", mode="before")
    @classmethod
    def _parse_z(cls, v):
        return cls._coerce(v)


class GreenRequest(ComplexInput):
    tau: complex
    t1: float
    t2: float

    @field_validator("tau", mode="before")
    @classmethod
    def _parse_tau(cls, v):
        return cls._coerce(v)


class PhaseRequest(BaseModel):
    b_min: float = Field(0.0, ge=0.0, le=1.0)
    b_max: float = Field(1.0, ge=0.0, le=1.0)
    step: float = Field(0.01, gt=0.0)


class Report(BaseModel):
    model_config = ConfigDict(populate_by_name=True)

    schema_version: int = Field(SCHEMA_VERSION, alias="schema")

    def as_dict(self) -> Dict[str, Any]:
        return self.model_dump(mode="json", by_alias=True)

    def text_lines(self) -> List[str]:
        return [f"{key}: {value}" for key, value in self.model_dump(exclude={"schema_version"}).items()]


class EvalReport(Report):
    b: float
    re_z: float
    im_z: float
    f_value: float
    x_b: float
    y_b: float
    re_canonical: float
    im_canonical: float
    word: str
    f_canonical: float


class PhaseRow(BaseModel):
    b: float
    re_zstar: float
    im_zstar: float
    lattice_class: str = Field(..., alias="class")
    param: Optional[float] = None
    f_value: float

    model_config = ConfigDict(populate_by_name=True)


class PhaseReport(Report):
    rows: List[PhaseRow]

    def text_lines(self) -> List[str]:
        lines = []
        for row in self.rows:
            param = "" if row.param is None else f" {row.param:.10g}"
            z_star = f"{row.re_zstar:.12g}{row.im_zstar:+.12g}i"
            lines.append(f"b={row.b:.6g} z*={z_star} {row.lattice_class}{param} f={row.f_value:.12g}")
        return lines


class GreenReport(Report):
    re_tau: float
    im_tau: float
    t1: float
    t2: float
    green: float
    h0: float
    g_mid: float
    g_half1: float
    g_half2: float


class EnergyReport(Report):
    b: float
    re_zstar: float
    im_zstar: float
    lattice_class: str = Field(..., alias="class")
    param: Optional[float] = None
    re_alpha1: float
    im_alpha1: float
    re_alpha2: float
    im_alpha2: float
    r1: float
    r2: float
    t_alpha: float
    energy: float
    disjoint: bool

    def text_lines(self) -> List[str]:
        return [f"{key}: {value}" for key, value in self.model_dump(by_alias=True, exclude={"schema_version"}).items()]


class CheckLine(BaseModel):
    name: str
    computed: float
    expected: float
    relation: str
    tolerance: float
    passed: bool
    margin: float
    informational: bool


class VerifyReport(Report):
    suite: str
    seed: int
    all_passed: bool
    checks: List[CheckLine]
    lines: List[str] = Field(default_factory=list, exclude=True)

    def text_lines(self) -> List[str]:
        return [f"seed: {self.seed}", *self.lines, f"{'all passed' if self.all_passed else 'FAILED'}"]
