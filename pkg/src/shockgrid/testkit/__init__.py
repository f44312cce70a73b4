"""Synthetic economies and a loop-based reference oracle for the shock engine."""

from .oracle import oracle_quartiles, oracle_shocks, permutation_pvalue
from .synthetic import SyntheticEconomy, generate, write_inputs
from .harness import engine_objects, engine_outputs, max_abs_diff

__all__ = [
    "SyntheticEconomy",
    "engine_objects",
    "engine_outputs",
    "generate",
    "max_abs_diff",
    "oracle_quartiles",
    "oracle_shocks",
    "permutation_pvalue",
    "write_inputs",
]
