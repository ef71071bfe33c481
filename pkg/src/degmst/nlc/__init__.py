"""Pattern-based dynamic programming over NLC expressions."""

from .solver import NlcInputError, run_nlc, solve_nlc

__all__ = ["NlcInputError", "run_nlc", "solve_nlc"]
