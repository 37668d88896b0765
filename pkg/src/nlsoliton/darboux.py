"""Darboux-Crum chain: per-level intertwiners and their closed determinant form.

Two independent routes to the accumulated intertwiner are provided. The
iterative route dresses the seeds level by level with G(lambda) = -I +
lambda*L and multiplies the per-level factors. The closed route evaluates
four determinant ratios built from five 2n x 2n moment matrices of the raw
seeds. The closed route is the default for field evaluation; the iterative
route is kept as a cross-check oracle.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .numerics import (IDENTITY2, SINGULARITY_RTOL, SingularMatrixError, det,
                       det_dx, det_dx2, mat2_inverse)
from .spectral import SolitonConfig, seed_components


class SingularPointError(ArithmeticError):
    """The construction degenerates at a specific space-time point."""

    def __init__(self, message: str, x: float, t: float, level: int | None = None):
        super().__init__(message)
        self.x = x
        self.t = t
        self.level = level


@dataclass(frozen=True)
class IntertwinerState:
    """Per-level factors and the accumulated 2x2 intertwiner at one point."""

    level: int
    factors: tuple            # L^(1) .. L^(n), each a 2x2 complex array
    accumulated: np.ndarray   # L^(n) ... L^(1)
    chi: complex

    @property
    def a(self) -> complex:
        return complex(self.accumulated[0, 0])

    @property
    def b(self) -> complex:
        return complex(self.accumulated[0, 1])

    @property
    def c(self) -> complex:
        return complex(self.accumulated[1, 0])

    @property
    def d(self) -> complex:
        return complex(self.accumulated[1, 1])


def intertwiner_step(h: np.ndarray, lam: np.ndarray) -> np.ndarray:
    """One Darboux factor L = H diag(1/lambda1, 1/lambda2) H^-1.

    h holds the two seed columns, lam is the diagonal matrix of their
    spectral parameters. det L = 1/(lambda1*lambda2) by construction.
    """
    h = np.asarray(h, dtype=complex)
    lam = np.asarray(lam, dtype=complex)
    if lam[0, 1] != 0 or lam[1, 0] != 0:
        raise ValueError("spectral-parameter matrix must be diagonal")
    if lam[0, 0] == 0 or lam[1, 1] == 0:
        raise ValueError("spectral parameters must be nonzero")
    lam_inv = np.diag([1.0 / lam[0, 0], 1.0 / lam[1, 1]])
    return h @ lam_inv @ mat2_inverse(h)


def gauge_factor(lam: complex, step: np.ndarray) -> np.ndarray:
    """Dressing polynomial G(lambda) = -I + lambda * L for one level."""
    return -IDENTITY2 + lam * np.asarray(step, dtype=complex)


def darboux_iterate(cfg: SolitonConfig, x: float, t: float) -> IntertwinerState:
    """Run the full chain at one point, dressing seeds level by level."""
    lams, varphi, phi = seed_components(cfg, x, t)
    psis = [np.array([varphi[i], phi[i]], dtype=complex) for i in range(2 * cfg.n)]
    factors = []
    for k in range(cfg.n):
        h = np.column_stack([psis[2 * k], psis[2 * k + 1]])
        lam = np.diag([lams[2 * k], lams[2 * k + 1]])
        try:
            step = intertwiner_step(h, lam)
        except SingularMatrixError as exc:
            raise SingularPointError(
                f"seed matrix is singular at level {k + 1}, (x,t)=({x},{t})",
                x, t, level=k + 1) from exc
        factors.append(step)
        for m in range(2 * k + 2, 2 * cfg.n):
            psis[m] = gauge_factor(lams[m], step) @ psis[m]
    acc = IDENTITY2
    for step in factors:
        acc = step @ acc
    return IntertwinerState(level=cfg.n, factors=tuple(factors),
                            accumulated=acc, chi=cfg.chi)


def moment_matrices(lams: np.ndarray, varphi: np.ndarray, phi: np.ndarray):
    """The five 2n x 2n seed-moment matrices (W, Omega, Upsilon, U, V).

    Row i carries seed i; the columns are powers of lambda_i times one of
    the two components, with a split at column n that differs per matrix.
    Supports stacked seeds: varphi/phi of shape (2n,)+S give matrices of
    shape S+(2n,2n).
    """
    two_n = len(lams)
    n = two_n // 2
    shape = np.asarray(varphi).shape[1:]
    mats = {name: np.empty(shape + (two_n, two_n), dtype=complex)
            for name in ("w", "omega", "upsilon", "u", "v")}
    for i in range(two_n):
        lam = lams[i]
        vp = varphi[i]
        ph = phi[i]
        for j in range(1, two_n + 1):
            col = j - 1
            mats["w"][..., i, col] = lam**(n + 1 - j) * vp if j <= n else lam**(2 * n + 1 - j) * ph
            mats["omega"][..., i, col] = lam**(j - 1) * vp if j <= n else lam**(j - n) * ph
            mats["upsilon"][..., i, col] = lam**j * vp if j <= n else lam**(j - n - 1) * ph
            mats["u"][..., i, col] = lam**(n - j) * ph if j <= n - 1 else lam**(2 * n - j) * vp
            mats["v"][..., i, col] = lam**(j - 1) * ph if j <= n + 1 else lam**(j - n - 1) * vp
    return mats


def closed_entries(cfg: SolitonConfig, x, t, derivatives: bool = False,
                   second: bool = False):
    """Entries A, B, C, D of the accumulated intertwiner over arrays x, t.

    Returns a dict with the four entry arrays, the determinant 'det_w',
    and a boolean 'singular' mask where det W falls below the relative
    singularity threshold. With derivatives=True, analytic x-derivatives
    of the five determinants are included under 'd<name>_dx' keys
    (entry derivative rule: d/dx varphi_i = +i lam_i varphi_i,
    d/dx phi_i = -i lam_i phi_i); second=True adds 'd<name>_dx2'.
    """
    lams, varphi, phi = seed_components(cfg, x, t)
    # Per-seed row normalization (a constant factor at each point): every
    # determinant scales by the same product, so the entry ratios are
    # unchanged while the matrices stay well scaled even where the
    # exponentials are steep.
    rho = np.maximum(np.abs(varphi), np.abs(phi))
    varphi = varphi / rho
    phi = phi / rho
    mats = moment_matrices(lams, varphi, phi)
    dets = {name: det(m) for name, m in mats.items()}
    det_w = dets["w"]
    scale = np.prod(np.max(np.abs(mats["w"]), axis=-1), axis=-1)
    singular = np.abs(det_w) <= SINGULARITY_RTOL * np.maximum(scale, 1e-300)
    safe_w = np.where(singular, 1.0, det_w)
    out = {
        "a": dets["omega"] / safe_w,
        "b": dets["u"] / safe_w,
        "c": dets["v"] / safe_w,
        "d": dets["upsilon"] / safe_w,
        "det_w": det_w,
        "singular": singular,
    }
    for name in ("omega", "u", "v", "upsilon"):
        out[f"det_{name}"] = dets[name]
    if derivatives:
        lam_col = lams.reshape((2 * cfg.n,) + (1,) * (np.asarray(varphi).ndim - 1))
        dmats = moment_matrices(lams, 1j * lam_col * varphi, -1j * lam_col * phi)
        for name in mats:
            out[f"d{name}_dx"] = det_dx(mats[name], dmats[name])
        if second:
            dmats2 = moment_matrices(lams, -lam_col**2 * varphi,
                                     -lam_col**2 * phi)
            for name in mats:
                out[f"d{name}_dx2"] = det_dx2(mats[name], dmats[name],
                                              dmats2[name])
    return out


def lgen_closed(cfg: SolitonConfig, x: float, t: float) -> np.ndarray:
    """Accumulated intertwiner at one point from the determinant ratios."""
    entries = closed_entries(cfg, np.asarray(float(x)), np.asarray(float(t)))
    if entries["singular"]:
        raise SingularPointError(
            f"moment-matrix determinant vanishes at (x,t)=({x},{t})", x, t)
    return np.array([[entries["a"], entries["b"]],
                     [entries["c"], entries["d"]]], dtype=complex)


def entry_derivatives(cfg: SolitonConfig, x, t, second: bool = False):
    """A..D and their analytic x-derivatives over arrays x, t.

    Quotient rule on the determinant ratios, with every determinant
    derivative expanded by row-wise multilinearity (det_dx). With
    second=True the second derivatives '<entry>_dx2' are included:
    for an entry E = N / W they follow from
    E'' = (N'' - 2 E' W' - E W'') / W.
    """
    e = closed_entries(cfg, x, t, derivatives=True, second=second)
    safe_w = np.where(e["singular"], 1.0, e["det_w"])
    dlogw = e["dw_dx"] / safe_w
    out = {k: e[k] for k in ("a", "b", "c", "d", "singular")}
    for entry, name in (("a", "omega"), ("b", "u"), ("c", "v"), ("d", "upsilon")):
        out[f"{entry}_dx"] = e[f"d{name}_dx"] / safe_w - e[entry] * dlogw
        if second:
            out[f"{entry}_dx2"] = (e[f"d{name}_dx2"]
                                   - 2 * out[f"{entry}_dx"] * e["dw_dx"]
                                   - e[entry] * e["dw_dx2"]) / safe_w
    return out


def ab_identity_defect(cfg: SolitonConfig, x, t) -> float:
    """Defect of the two derivative identities tying A..D together.

    Both (A)_x D - B (C)_x and A (D)_x - (B)_x C vanish identically for
    any intertwiner built from this chain. Returns the max modulus of the
    two, normalized by the squared magnitude of the largest entry, masked
    at singular points.
    """
    d = entry_derivatives(cfg, x, t)
    lhs1 = d["a_dx"] * d["d"] - d["b"] * d["c_dx"]
    lhs2 = d["a"] * d["d_dx"] - d["b_dx"] * d["c"]
    scale = np.maximum.reduce([np.abs(d[k]) for k in ("a", "b", "c", "d")]) ** 2
    defect = np.maximum(np.abs(lhs1), np.abs(lhs2)) / np.maximum(scale, 1e-300)
    defect = np.where(d["singular"], np.nan, defect)
    finite = np.isfinite(defect)
    if not np.any(finite):
        return float("nan")
    return float(np.max(np.asarray(defect)[finite]))
