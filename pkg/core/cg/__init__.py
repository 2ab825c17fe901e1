"""Instrumented conjugate gradient."""

from .solver import CgResult, cg_halting_time, direct_solve_oracle

__all__ = ["CgResult", "cg_halting_time", "direct_solve_oracle"]
