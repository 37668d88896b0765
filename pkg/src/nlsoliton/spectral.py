"""Spectral data: configuration, the phase function, and paired seed vectors.

The two-component seeds solve the vacuum spectral problem; each odd seed
is accompanied by the kappa-twisted parity conjugate that carries the
nonlocal coupling into the Darboux chain.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .numerics import EXP_OVERFLOW_LIMIT, require_finite


class OverflowRangeError(OverflowError):
    """A seed exponent left the representable range of exp()."""


@dataclass(frozen=True)
class SolitonConfig:
    """Full problem specification for an order-n nonlocal soliton solution.

    lambdas holds the n base spectral parameters (odd indices); the even
    partners are derived as -conjugate. gammas holds the 2n phase
    constants. beta is kept as beta = i*delta with real delta.
    """

    n: int
    lambdas: tuple
    gammas: tuple
    kappa: float
    alpha: float
    delta: float
    mu: tuple = ()
    c: float = -1.0

    def __post_init__(self):
        object.__setattr__(self, "lambdas", tuple(complex(v) for v in self.lambdas))
        object.__setattr__(self, "gammas", tuple(complex(v) for v in self.gammas))
        mu = tuple(float(v) for v in (self.mu or (1.0,) * self.n))
        object.__setattr__(self, "mu", mu)
        violations = validate_config(self)
        if violations:
            raise ValueError("invalid soliton configuration: " + "; ".join(violations))

    @property
    def all_lambdas(self) -> np.ndarray:
        """All 2n spectral parameters, even entries derived by pairing."""
        out = np.empty(2 * self.n, dtype=complex)
        out[0::2] = self.lambdas
        out[1::2] = -np.conj(np.asarray(self.lambdas))
        return out

    @property
    def chi(self) -> complex:
        """det of the accumulated intertwiner: (-1)^n prod |lambda_{2i-1}|^-2."""
        return complex(np.prod(1.0 / self.all_lambdas))


def validate_config(cfg) -> list[str]:
    """Diagnostic check of all SolitonConfig invariants; empty list iff valid."""
    violations = []
    if cfg.n < 1:
        violations.append(f"soliton order must be positive, got {cfg.n}")
        return violations
    if len(cfg.lambdas) != cfg.n:
        violations.append(f"expected {cfg.n} spectral parameters, got {len(cfg.lambdas)}")
    if len(cfg.gammas) != 2 * cfg.n:
        violations.append(f"expected {2 * cfg.n} phase constants, got {len(cfg.gammas)}")
    if len(cfg.mu) not in (0, cfg.n):
        violations.append(f"expected {cfg.n} gauge constants mu, got {len(cfg.mu)}")
    for name, vals in (("lambda", cfg.lambdas), ("gamma", cfg.gammas)):
        for i, v in enumerate(vals):
            try:
                require_finite(v, f"{name}[{i}]")
            except ValueError as exc:
                violations.append(str(exc))
    if violations:
        return violations
    if cfg.kappa == 0:
        violations.append("kappa must be nonzero")
    for i, lam in enumerate(cfg.lambdas):
        if lam == 0:
            violations.append(f"lambda[{i}] must be nonzero")
        elif lam.real == 0:
            violations.append(
                f"Re lambda[{i}] = 0 makes the derived partner -conj(lambda) "
                f"collide with lambda[{i}] (pairing degeneracy)")
    all_lam = [complex(l) for l in cfg.lambdas] + [-complex(l).conjugate() for l in cfg.lambdas]
    for i in range(len(all_lam)):
        for j in range(i + 1, len(all_lam)):
            if all_lam[i] == all_lam[j]:
                violations.append(
                    f"duplicate spectral parameter {all_lam[i]} "
                    f"(all 2n derived parameters must be pairwise distinct)")
                return violations
    return violations


def xi(lam: complex, x, t, alpha: float, delta: float):
    """Phase function xi_lambda(x,t) = i*lam*x + 2*lam^2*(i*alpha - 2*delta*lam)*t."""
    lam = complex(lam)
    return 1j * lam * np.asarray(x) + 2 * lam**2 * (1j * alpha - 2 * delta * lam) * np.asarray(t)


@dataclass(frozen=True)
class SeedPair:
    """Odd/even two-component seed vectors at a point, (varphi, phi) each."""

    psi_odd: tuple
    psi_even: tuple


def _guard_exponent(exponent, what: str):
    worst = float(np.max(np.real(exponent)))
    if worst > EXP_OVERFLOW_LIMIT:
        raise OverflowRangeError(
            f"seed exponent {what} has real part {worst:.1f} > {EXP_OVERFLOW_LIMIT}")


def seed_components(cfg: SolitonConfig, x, t):
    """All 2n seed components over broadcastable arrays x, t.

    Returns (lambdas, varphi, phi) where varphi/phi have shape
    (2n,) + broadcast(x, t).shape. The even rows are the kappa-twisted
    parity conjugates of the odd rows:

        psi_even = (-kappa * exp(-conj(xi(-x,t)) + conj(g2)),
                     exp(conj(xi(-x,t)) + conj(g1)))
    """
    x = np.asarray(x, dtype=float)
    t = np.asarray(t, dtype=float)
    shape = np.broadcast_shapes(x.shape, t.shape)
    lams = cfg.all_lambdas
    varphi = np.empty((2 * cfg.n,) + shape, dtype=complex)
    phi = np.empty_like(varphi)
    for i in range(cfg.n):
        lam = cfg.lambdas[i]
        g1, g2 = cfg.gammas[2 * i], cfg.gammas[2 * i + 1]
        xi_p = xi(lam, x, t, cfg.alpha, cfg.delta)
        xi_tilde = np.conj(xi(lam, -x, t, cfg.alpha, cfg.delta))
        for expo, what in ((xi_p + g1, f"xi+gamma{2*i+1}"), (-xi_p + g2, f"-xi+gamma{2*i+2}"),
                           (-xi_tilde, "parity -xi~"), (xi_tilde, "parity xi~")):
            _guard_exponent(expo, what)
        varphi[2 * i] = np.exp(xi_p + g1)
        phi[2 * i] = np.exp(-xi_p + g2)
        varphi[2 * i + 1] = -cfg.kappa * np.exp(-xi_tilde + np.conj(g2))
        phi[2 * i + 1] = np.exp(xi_tilde + np.conj(g1))
    return lams, varphi, phi


def seed_pair(i: int, cfg: SolitonConfig, x: float, t: float) -> SeedPair:
    """Seed vectors psi_{2i-1}, psi_{2i} (1-based level i) at a point."""
    if not 1 <= i <= cfg.n:
        raise ValueError(f"level index must be in 1..{cfg.n}, got {i}")
    _, varphi, phi = seed_components(cfg, x, t)
    k = 2 * (i - 1)
    return SeedPair(psi_odd=(complex(varphi[k]), complex(phi[k])),
                    psi_even=(complex(varphi[k + 1]), complex(phi[k + 1])))
