"""Grid specification and relative-residual reporting shared by all checks.

A residual report records how well a candidate solution satisfies one
equation over a rectangular (x,t) grid. Residuals are always relative:
|sum of terms| / (sum of |terms| + eps), so the vacuum does not divide
by zero and steep solutions are judged against their own scale.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

# Additive floor in the relative-residual denominator.
RESIDUAL_EPS = 1e-300

# Fraction of the grid-wide term scale added to every denominator, so
# that points where all terms vanish to round-off (vacuum tails) do not
# report finite-difference noise as an order-one relative residual.
RESIDUAL_SCALE_FLOOR = 1e-6

# A report whose masked fraction exceeds this is unusable.
MAX_MASKED_FRACTION = 0.5


@dataclass(frozen=True)
class GridSpec:
    """Rectangular evaluation grid: x in [x0,x1] (nx points), t likewise."""

    x0: float = -5.0
    x1: float = 5.0
    nx: int = 41
    t0: float = -2.0
    t1: float = 2.0
    nt: int = 41

    def __post_init__(self):
        if self.nx < 5 or self.nt < 5:
            raise ValueError(f"grid needs at least 5 points per axis, got {self.nx}x{self.nt}")
        if not (self.x1 > self.x0 and self.t1 > self.t0):
            raise ValueError("grid ranges must be non-degenerate and increasing")

    @property
    def x(self) -> np.ndarray:
        return np.linspace(self.x0, self.x1, self.nx)

    @property
    def t(self) -> np.ndarray:
        return np.linspace(self.t0, self.t1, self.nt)

    def mesh(self):
        """Broadcastable column/row views: X has shape (nx,1), T has (1,nt)."""
        return self.x[:, None], self.t[None, :]

    @classmethod
    def parse(cls, text: str) -> "GridSpec":
        """Parse the "x0:x1:nx,t0:t1:nt" command-line form."""
        try:
            xpart, tpart = text.split(",")
            x0, x1, nx = xpart.split(":")
            t0, t1, nt = tpart.split(":")
            return cls(float(x0), float(x1), int(nx), float(t0), float(t1), int(nt))
        except ValueError as exc:
            raise ValueError(
                f"grid must look like 'x0:x1:nx,t0:t1:nt', got {text!r}") from exc

    def to_dict(self) -> dict:
        return {"x0": self.x0, "x1": self.x1, "nx": self.nx,
                "t0": self.t0, "t1": self.t1, "nt": self.nt}


@dataclass
class ResidualReport:
    """Relative residual statistics of one equation over one grid."""

    tag: str
    max_relative: float
    mean_relative: float
    masked_fraction: float
    grid: dict = field(default_factory=dict)
    stencil: dict = field(default_factory=dict)
    tolerance: float | None = None

    @property
    def usable(self) -> bool:
        return self.masked_fraction <= MAX_MASKED_FRACTION

    @property
    def passed(self) -> bool | None:
        if self.tolerance is None:
            return None
        return self.usable and self.max_relative < self.tolerance

    def to_dict(self) -> dict:
        out = {"tag": self.tag,
               "max_relative": self.max_relative,
               "mean_relative": self.mean_relative,
               "masked_fraction": self.masked_fraction,
               "usable": self.usable,
               "grid": self.grid,
               "stencil": self.stencil}
        if self.tolerance is not None:
            out["tolerance"] = self.tolerance
            out["passed"] = self.passed
        return out


def residual_report(tag: str, terms, grid: GridSpec | None = None,
                    stencil=None, tolerance: float | None = None,
                    vector_axis: int | None = None) -> ResidualReport:
    """Build a report from the individual additive terms of one equation.

    terms is a sequence of broadcast-compatible complex arrays whose sum
    should vanish. Non-finite entries mask the point instead of poisoning
    the statistics. For a vector-valued equation pass vector_axis: the
    residual is then judged per point by vector norms, so a component
    that happens to vanish identically is not compared against its own
    round-off noise.
    """
    arrs = [np.asarray(term, dtype=complex) + 0j for term in terms]
    arrs = np.broadcast_arrays(*arrs) if len(arrs) > 1 else arrs
    total = sum(arrs)
    if vector_axis is None:
        num = np.abs(total)
        scale = sum(np.abs(a) for a in arrs)
    else:
        num = np.linalg.norm(total, axis=vector_axis)
        scale = sum(np.linalg.norm(a, axis=vector_axis) for a in arrs)
    finite_scale = scale[np.isfinite(scale)] if scale.ndim else np.atleast_1d(scale)
    global_scale = float(np.max(finite_scale)) if finite_scale.size else 0.0
    rel = num / (scale + RESIDUAL_SCALE_FLOOR * global_scale + RESIDUAL_EPS)
    finite = np.isfinite(rel)
    n_all = rel.size
    n_ok = int(np.count_nonzero(finite))
    if n_ok:
        max_rel = float(np.max(rel[finite]))
        mean_rel = float(np.mean(rel[finite]))
    else:
        max_rel = mean_rel = float("nan")
    return ResidualReport(
        tag=tag,
        max_relative=max_rel,
        mean_relative=mean_rel,
        masked_fraction=1.0 - n_ok / n_all if n_all else 1.0,
        grid=grid.to_dict() if grid is not None else {},
        stencil=dict(stencil) if stencil else {},
        tolerance=tolerance,
    )


def masked_max(values) -> float:
    """Max modulus over the finite entries of an array (NaN if none)."""
    values = np.abs(np.asarray(values))
    finite = np.isfinite(values)
    if not np.any(finite):
        return float("nan")
    return float(np.max(values[finite]))
