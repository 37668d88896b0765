"""Nonlocal multi-soliton solutions by Darboux dressing.

Exact order-n solutions of an extended continuous Heisenberg spin chain
with a mirror-type nonlocality, their gauge image under a third-order
derivative Schrodinger flow, and the induced Landau-Lifschitz-type spin
dynamics, plus grid-based verification of every algebraic invariant and
differential equation the construction promises.
"""

from .spectral import OverflowRangeError, SolitonConfig, validate_config
from .verification import GridSpec, ResidualReport
from .darboux import SingularPointError, darboux_iterate, lgen_closed
from .heisenberg import ech_fields, ech_solution
from .hirota import hirota_fields, hirota_from_spectral
from .landau import classify_trajectory, spin_fields, split_fields, trajectory
from .selftest import run_selftest

__version__ = "0.1.0"

__all__ = [
    "OverflowRangeError", "SolitonConfig", "validate_config",
    "GridSpec", "ResidualReport",
    "SingularPointError", "darboux_iterate", "lgen_closed",
    "ech_fields", "ech_solution",
    "hirota_fields", "hirota_from_spectral",
    "classify_trajectory", "spin_fields", "split_fields", "trajectory",
    "run_selftest", "__version__",
]
