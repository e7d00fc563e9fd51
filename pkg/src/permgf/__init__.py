"""Generating functions for permutations with no (or exactly one) 132-pattern
and a prescribed number of 123-patterns, derived mechanically from two
functional equations and checked against brute-force enumeration."""

from .exact import Poly, RatFun, ratfun_equal, ratfun_normalize, series_expand
from .funceq import DerivKey, EqExpr, FuncDeriv, TriPoly, all_derivatives, build_equations, differentiate, specialize
from .oracle import (
    JointTable,
    PatternStats,
    check_decomposition,
    check_functional_equation,
    count_patterns,
    joint_distribution,
    weight_poly,
)
from .solver import AR, Aaron, DerivTable, extract_gf, solve_system

__all__ = [
    "AR", "Aaron", "DerivKey", "DerivTable", "EqExpr", "FuncDeriv", "JointTable",
    "PatternStats", "Poly", "RatFun", "TriPoly", "all_derivatives", "build_equations",
    "check_decomposition", "check_functional_equation", "count_patterns", "differentiate",
    "extract_gf", "joint_distribution", "ratfun_equal", "ratfun_normalize", "series_expand",
    "solve_system", "specialize", "weight_poly",
]
