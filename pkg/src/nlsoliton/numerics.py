"""Complex linear-algebra and finite-difference kernel.

Small dense complex matrices (2x2 blocks and stacked 2n x 2n seed
matrices), determinants and their x-derivatives, central finite
differences. Everything here is a pure function of its inputs.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

# Relative threshold below which a matrix is treated as singular.
SINGULARITY_RTOL = 1e-10

# exp() overflows just above this; seeds guard their exponents against it.
EXP_OVERFLOW_LIMIT = 709.0

IDENTITY2 = np.eye(2, dtype=complex)
SIGMA1 = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA2 = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA3 = np.array([[1, 0], [0, -1]], dtype=complex)
PAULI = (SIGMA1, SIGMA2, SIGMA3)


class SingularMatrixError(ArithmeticError):
    """Inversion requested for a matrix below the singularity threshold."""


def require_finite(value, name: str):
    """Reject NaN/Inf in user-supplied scalars."""
    arr = np.asarray(value)
    if not np.all(np.isfinite(arr.real)) or not np.all(np.isfinite(arr.imag)):
        raise ValueError(f"{name} must be finite, got {value!r}")
    return value


def det(m: np.ndarray) -> complex | np.ndarray:
    """Determinant of a square complex matrix (or stack of matrices).

    Direct formula for 1x1/2x2, LU with partial pivoting (LAPACK)
    otherwise. Singular matrices return 0 within round-off.
    """
    m = np.asarray(m, dtype=complex)
    if m.shape[-1] != m.shape[-2]:
        raise ValueError(f"matrix must be square, got shape {m.shape}")
    n = m.shape[-1]
    if n == 1:
        out = m[..., 0, 0]
    elif n == 2:
        out = m[..., 0, 0] * m[..., 1, 1] - m[..., 0, 1] * m[..., 1, 0]
    else:
        out = np.linalg.det(m)
    return complex(out) if out.ndim == 0 else out


def det_dx(m: np.ndarray, m_dx: np.ndarray) -> complex | np.ndarray:
    """x-derivative of det(m) given the entrywise derivative of m.

    Multilinearity in the rows: sum over r of det(m with row r replaced
    by row r of m_dx). Supports stacked matrices.
    """
    m = np.asarray(m, dtype=complex)
    m_dx = np.asarray(m_dx, dtype=complex)
    if m.shape != m_dx.shape:
        raise ValueError(f"shape mismatch: {m.shape} vs {m_dx.shape}")
    n = m.shape[-1]
    total = None
    for r in range(n):
        mr = m.copy()
        mr[..., r, :] = m_dx[..., r, :]
        d = det(mr)
        total = d if total is None else total + d
    return total


def det_dx2(m: np.ndarray, m_dx: np.ndarray, m_dx2: np.ndarray) -> complex | np.ndarray:
    """Second x-derivative of det(m) from entrywise derivatives of m.

    Differentiating the row-replacement expansion once more gives one
    term per row with that row's second derivative, plus twice the sum
    over row pairs with both rows' first derivatives.
    """
    m = np.asarray(m, dtype=complex)
    m_dx = np.asarray(m_dx, dtype=complex)
    m_dx2 = np.asarray(m_dx2, dtype=complex)
    if not m.shape == m_dx.shape == m_dx2.shape:
        raise ValueError(
            f"shape mismatch: {m.shape} vs {m_dx.shape} vs {m_dx2.shape}")
    n = m.shape[-1]
    total = None
    for r in range(n):
        mr = m.copy()
        mr[..., r, :] = m_dx2[..., r, :]
        d = det(mr)
        total = d if total is None else total + d
    for r in range(n):
        for s in range(r + 1, n):
            mrs = m.copy()
            mrs[..., r, :] = m_dx[..., r, :]
            mrs[..., s, :] = m_dx[..., s, :]
            total = total + 2 * det(mrs)
    return total


def mat2_inverse(m: np.ndarray) -> np.ndarray:
    """Inverse of a 2x2 complex matrix with an explicit singularity guard."""
    m = np.asarray(m, dtype=complex)
    d = m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0]
    scale = np.max(np.abs(m)) ** 2
    if abs(d) <= SINGULARITY_RTOL * max(scale, 1e-300):
        raise SingularMatrixError(f"2x2 matrix is singular within tolerance (|det|={abs(d):.3e})")
    return np.array([[m[1, 1], -m[0, 1]], [-m[1, 0], m[0, 0]]], dtype=complex) / d


def commutator(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Matrix commutator [a, b] = ab - ba."""
    return a @ b - b @ a


@dataclass(frozen=True)
class StencilSpec:
    """Central finite-difference stencil: k-th derivative, even accuracy order."""

    order: int = 1
    accuracy: int = 4
    h: float = 1e-3

    def __post_init__(self):
        if self.order not in (1, 2, 3):
            raise ValueError(f"derivative order must be 1, 2 or 3, got {self.order}")
        if self.accuracy < 2 or self.accuracy % 2:
            raise ValueError(f"accuracy order must be even and positive, got {self.accuracy}")
        if not self.h > 0:
            raise ValueError(f"step must be positive, got {self.h}")

    @property
    def half_width(self) -> int:
        return (self.order - 1) // 2 + self.accuracy // 2

    @property
    def offsets(self) -> np.ndarray:
        w = self.half_width
        return np.arange(-w, w + 1)

    @property
    def weights(self) -> np.ndarray:
        return _stencil_weights(self.order, self.half_width)


@lru_cache(maxsize=None)
def _stencil_weights(order: int, half_width: int) -> np.ndarray:
    """Solve the Vandermonde moment system for central-difference weights."""
    offsets = np.arange(-half_width, half_width + 1, dtype=float)
    npts = offsets.size
    vander = np.vander(offsets, npts, increasing=True).T
    rhs = np.zeros(npts)
    rhs[order] = math.factorial(order)
    return np.linalg.solve(vander, rhs)


def fd_derivative(sampler, x0: float, spec: StencilSpec = StencilSpec()) -> complex:
    """k-th derivative of a scalar complex function at x0 by central differences.

    Returns NaN (masked-point signal) if the sampler is non-finite
    anywhere on the stencil footprint.
    """
    acc = 0j
    for off, w in zip(spec.offsets, spec.weights):
        val = complex(sampler(x0 + off * spec.h))
        if not (math.isfinite(val.real) and math.isfinite(val.imag)):
            return complex("nan")
        acc += w * val
    return acc / spec.h**spec.order


def sampled_derivatives(sampler, x, t, h: float, accuracy: int = 4,
                        x_orders=(1, 2, 3), t_orders=(1,)):
    """Evaluate a vector-valued sampler and its x/t derivatives over arrays.

    sampler(x, t) must broadcast over numpy arrays and return an array
    whose trailing axis indexes components. Non-finite samples propagate
    to NaN derivatives so that residual engines can mask those points.

    Returns a dict with keys 'f', 'x1'..'x3', 't1' as requested.
    """
    x = np.asarray(x, dtype=float)
    t = np.asarray(t, dtype=float)
    out = {"f": np.asarray(sampler(x, t))}
    if x_orders:
        kmax = max(x_orders)
        spec = StencilSpec(kmax, accuracy, h)
        w = spec.half_width
        samples = [out["f"] if o == 0 else np.asarray(sampler(x + o * h, t))
                   for o in range(-w, w + 1)]
        stack = np.stack(samples)                  # (2w+1, ..., ncomp)
        for k in x_orders:
            ks = StencilSpec(k, accuracy, h)
            kw = ks.half_width
            sub = stack[w - kw:w + kw + 1]
            out[f"x{k}"] = np.tensordot(ks.weights, sub, axes=(0, 0)) / h**k
    for k in t_orders:
        ks = StencilSpec(k, accuracy, h)
        kw = ks.half_width
        samples = [out["f"] if o == 0 else np.asarray(sampler(x, t + o * h))
                   for o in range(-kw, kw + 1)]
        out[f"t{k}"] = np.tensordot(ks.weights, np.stack(samples), axes=(0, 0)) / h**k
    return out
