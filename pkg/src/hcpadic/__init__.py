"""Exact p-adic splitting Gibbs measures of the hard-core model on Cayley trees."""

from .analytic import PadicPolynomial, exp_p, hensel_lift, isolate_roots, log_p, sqrt_p
from .model import (
    BoundaryField,
    ModelParams,
    existence_gate,
    existence_table,
    periodic_gate,
    periodic_table,
    ti_gate,
)
from .oracle import FiniteVolume, Topology, build_volume, check_compatibility, count_admissible
from .padic import PadicNumber, congruent, from_rational, norm, valuation
from .solve import SolveReport, periodic_solve, ti_solve

__version__ = "0.1.0"

__all__ = [
    "PadicNumber", "from_rational", "congruent", "valuation", "norm",
    "exp_p", "log_p", "sqrt_p", "PadicPolynomial", "hensel_lift", "isolate_roots",
    "ModelParams", "BoundaryField", "existence_gate", "ti_gate", "periodic_gate",
    "existence_table", "periodic_table", "ti_solve", "periodic_solve", "SolveReport",
    "FiniteVolume", "Topology", "build_volume", "count_admissible", "check_compatibility",
]
