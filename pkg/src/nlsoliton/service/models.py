"""Pydantic request/response models and the complex-number wire format.

Complex values travel as "a+bi" strings (for example "0.4-0.3i") so the
JSON payloads stay valid JSON; both 'i' and 'j' suffixes are accepted on
input. Floats are serialized by pydantic; the CSV writer in the CLI
formats them at 17 significant digits for lossless round-trips.
"""
from __future__ import annotations

import re

from pydantic import BaseModel, Field, field_validator

from ..spectral import SolitonConfig, validate_config
from ..verification import GridSpec

_COMPLEX_RE = re.compile(
    r"^\s*(?P<real>[+-]?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)?"
    r"(?P<imag>[+-](?:\d+\.?\d*|\.\d+)?(?:[eE][+-]?\d+)?)?[ij]?\s*$")


def format_complex(z: complex) -> str:
    """Render a complex number as the canonical "a+bi" string."""
    z = complex(z)
    return "%.17g%+.17gi" % (z.real, z.imag)


def parse_complex(text: str) -> complex:
    """Parse "a+bi" (or "a", "bi", "a+bj") into a complex number."""
    if isinstance(text, (int, float, complex)):
        return complex(text)
    s = text.strip().replace(" ", "")
    if not s:
        raise ValueError("empty complex literal")
    if s[-1] in "ij":
        body = s[:-1]
        # Split the mantissa into real and imaginary parts at the last
        # sign that is not part of an exponent.
        for k in range(len(body) - 1, 0, -1):
            if body[k] in "+-" and body[k - 1] not in "eE":
                real_s, imag_s = body[:k], body[k:]
                break
        else:
            real_s, imag_s = "", body or "+1"
        if imag_s in ("+", "-"):
            imag_s += "1"
        return complex(float(real_s) if real_s else 0.0, float(imag_s))
    return complex(float(s), 0.0)


class ConfigModel(BaseModel):
    """Spectral configuration with complex entries as "a+bi" strings."""

    n: int = Field(ge=1)
    lambdas: list[str]
    gammas: list[str]
    kappa: float
    alpha: float
    delta: float
    mu: list[str] = []
    c: float = -1.0

    @field_validator("lambdas", "gammas", "mu", mode="before")
    @classmethod
    def _stringify(cls, v):
        return [z if isinstance(z, str) else format_complex(z) for z in v]

    def to_config(self) -> SolitonConfig:
        mu = [parse_complex(z) for z in self.mu]
        if any(z.imag for z in mu):
            raise ValueError("gauge constants mu must be real")
        cfg = SolitonConfig(
            n=self.n,
            lambdas=[parse_complex(z) for z in self.lambdas],
            gammas=[parse_complex(z) for z in self.gammas],
            kappa=self.kappa, alpha=self.alpha, delta=self.delta,
            mu=[z.real for z in mu], c=self.c)
        problems = validate_config(cfg)
        if problems:
            raise ValueError("; ".join(problems))
        return cfg

    @classmethod
    def from_config(cls, cfg: SolitonConfig) -> "ConfigModel":
        return cls(n=cfg.n,
                   lambdas=[format_complex(z) for z in cfg.lambdas],
                   gammas=[format_complex(z) for z in cfg.gammas],
                   kappa=cfg.kappa, alpha=cfg.alpha, delta=cfg.delta,
                   mu=[format_complex(z) for z in cfg.mu], c=cfg.c)


class GridModel(BaseModel):
    x0: float = -5.0
    x1: float = 5.0
    nx: int = Field(default=41, ge=5)
    t0: float = -2.0
    t1: float = 2.0
    nt: int = Field(default=41, ge=5)

    def to_grid(self) -> GridSpec:
        return GridSpec(self.x0, self.x1, self.nx, self.t0, self.t1, self.nt)

    @classmethod
    def from_grid(cls, g: GridSpec) -> "GridModel":
        return cls(x0=g.x0, x1=g.x1, nx=g.nx, t0=g.t0, t1=g.t1, nt=g.nt)


class CheckModel(BaseModel):
    """One verified quantity with the tolerance it was judged against."""

    name: str
    value: float
    tolerance: float
    comparison: str = "<"
    passed: bool
    detail: str = ""


class GenerateRequest(BaseModel):
    config: ConfigModel | None = None
    preset: str | None = None
    grid: GridModel = GridModel()


class TableResponse(BaseModel):
    """Column-oriented table; complex cells are "a+bi" strings."""

    columns: list[str]
    rows: list[list[float | str | int]]


class VerifyRequest(BaseModel):
    config: ConfigModel | None = None
    preset: str | None = None
    grid: GridModel = GridModel()
    h: float = Field(default=1e-3, gt=0)
    system: str = "all"


class VerifyResponse(BaseModel):
    checks: list[CheckModel]
    passed: bool


class TrajectoryRequest(BaseModel):
    soliton: str | None = None
    config: ConfigModel | None = None
    preset: str | None = None
    x0: float | None = None
    t0: float | None = None
    t1: float | None = None
    samples: int | None = Field(default=None, ge=16)


class TrajectoryResponse(BaseModel):
    classification: str
    table: TableResponse


class SweepRequest(BaseModel):
    config: ConfigModel | None = None
    preset: str | None = None
    parameter: str
    values: list[str]
    grid: GridModel = GridModel()
    h: float = Field(default=1e-3, gt=0)
    system: str = "all"


class SweepEntry(BaseModel):
    value: str
    checks: list[CheckModel]
    passed: bool
    error: str = ""


class SweepResponse(BaseModel):
    entries: list[SweepEntry]
    passed: bool


class SelftestResponse(BaseModel):
    checks: list[CheckModel]
    passed: bool
    n_checks: int
    elapsed_seconds: float
