"""Local-global divisibility on elliptic curves, tested along persistent prime sets."""

from .core_arith import DomainError
from .divisibility import Inconclusive, global_divide, local_divide_test
from .elliptic import RationalCurve
from .frobenius_sets import PersistentSetSpec, estimate_density
from .pipeline import run_check, soundness_sweep

__all__ = [
    "DomainError",
    "Inconclusive",
    "PersistentSetSpec",
    "RationalCurve",
    "estimate_density",
    "global_divide",
    "local_divide_test",
    "run_check",
    "soundness_sweep",
]
