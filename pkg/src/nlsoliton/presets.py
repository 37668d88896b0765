"""Built-in parameter sets used by the self-test and the CLI.

Soliton configurations cover the mirror-coupled one-, two- and
three-soliton constructions; reference sets cover the closed-form local
and mirror-coupled bright solitons that feed the spin trajectories.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .spectral import SolitonConfig

NONLOCAL_ONE = SolitonConfig(
    n=1, lambdas=(0.4 - 0.3j,), gammas=(5.1j, 0.1j),
    kappa=3.0, alpha=1.2, delta=0.2)

NONLOCAL_TWO = SolitonConfig(
    n=2, lambdas=(0.4 - 0.3j, 0.7 + 0.5j),
    gammas=(5.1j, 0.1j, -1.1j, 0.2j),
    kappa=3.0, alpha=1.2, delta=0.2)

NONLOCAL_THREE = SolitonConfig(
    n=3, lambdas=(0.4 - 0.3j, 0.7 + 0.5j, -0.3 + 0.6j),
    gammas=(5.1j, 0.1j, -1.1j, 0.2j, 0.3 + 0.2j, -0.1j),
    kappa=3.0, alpha=1.2, delta=0.2)

# Degenerate local limit: kappa=1, real spectral parameter, real phases,
# second-order flow only. The spin vector is purely real here and the
# flow reduces to the classical Landau-Lifschitz equation.
LOCAL_LIMIT = SolitonConfig(
    n=1, lambdas=(0.3,), gammas=(0.1, -0.2),
    kappa=1.0, alpha=0.7, delta=0.0)

SOLITON_CONFIGS = {
    "nonlocal-one": NONLOCAL_ONE,
    "nonlocal-two": NONLOCAL_TWO,
    "nonlocal-three": NONLOCAL_THREE,
    "local-limit": LOCAL_LIMIT,
}


@dataclass(frozen=True)
class ReferenceSoliton:
    """Closed-form bright-soliton parameter set (local or mirror-coupled)."""

    name: str
    mu: complex
    gamma: complex
    alpha: float
    beta: float            # real third-order coefficient (local case)
    delta: float           # imaginary third-order coefficient (mirror case)
    nonlocal_pairing: bool
    # trajectory defaults chosen so the classifier sees the asymptotics
    x0: float = 0.5
    t0: float = 0.0
    t1: float = 60.0
    samples: int = 1201
    expected_class: str = "bounded"


def _period(alpha: float, mu: complex) -> float:
    """Phase-recurrence time of the local soliton with real mu."""
    return 2 * np.pi / abs(alpha * mu.real**2)


REFERENCE_SOLITONS = {
    # second-order flow, real spectral parameter: periodic spin curves
    "local-periodic": ReferenceSoliton(
        "local-periodic", mu=0.3, gamma=0.4 + 0.2j, alpha=0.3, beta=0.0,
        delta=0.0, nonlocal_pairing=False,
        t1=1.05 * _period(0.3, complex(0.3)), samples=4001,
        expected_class="recurrent"),
    # complex spectral parameter: curves spiral into a fixed point
    "local-decaying": ReferenceSoliton(
        "local-decaying", mu=0.3 + 0.1j, gamma=0.4 + 0.2j, alpha=0.3,
        beta=0.0, delta=0.0, nonlocal_pairing=False,
        t1=500.0, samples=1501, expected_class="decaying"),
    # third-order term switched on
    "local-third-order": ReferenceSoliton(
        "local-third-order", mu=0.3, gamma=0.4 + 0.2j, alpha=0.3, beta=0.1,
        delta=0.0, nonlocal_pairing=False,
        t1=260.0, samples=2001, expected_class="bounded"),
    "local-third-order-decaying": ReferenceSoliton(
        "local-third-order-decaying", mu=0.3 + 0.1j, gamma=0.4 + 0.2j,
        alpha=0.3, beta=0.1, delta=0.0, nonlocal_pairing=False,
        t1=500.0, samples=1501, expected_class="decaying"),
    # mirror-coupled soliton with purely imaginary spectral parameter
    "nonlocal-reference": ReferenceSoliton(
        "nonlocal-reference", mu=0.55j, gamma=0.0, alpha=1.5, beta=0.0,
        delta=0.15, nonlocal_pairing=True,
        t1=60.0, samples=1201, expected_class="bounded"),
}
