"""Factoring RSA moduli from randomly leaked key bits.

A CDCL SAT solver works on a multiplier circuit for ``N = p * q``; once enough
low bits of ``p`` are assigned, a Coppersmith lattice attack either completes
``p`` or proves the assignment wrong, which the solver learns as a clause.
"""

from .baselines import branch_and_prune, brute_force_coppersmith
from .cnfenc import encode_d_equation, encode_factoring, fixed_high_bits_of_d, read_dimacs, write_dimacs
from .coppersmith import LsbProblem, MsbProblem, recover_factor_lsb, recover_factor_msb
from .harness import generate, solve_instance
from .lattice import is_lll_reduced, lll_reduce
from .numtheory import gen_prime, inth_root, is_probable_prime, isqrt, mod_inverse
from .pipeline import HybridConfig, factor, threshold_bits
from .polyint import IntPoly, integer_roots
from .satcore import AddClauses, Solver, SolverConfig, Terminate, solve

__version__ = "0.1.0"

__all__ = [
    "AddClauses",
    "HybridConfig",
    "IntPoly",
    "LsbProblem",
    "MsbProblem",
    "Solver",
    "SolverConfig",
    "Terminate",
    "branch_and_prune",
    "brute_force_coppersmith",
    "encode_d_equation",
    "encode_factoring",
    "factor",
    "fixed_high_bits_of_d",
    "gen_prime",
    "generate",
    "integer_roots",
    "inth_root",
    "is_lll_reduced",
    "is_probable_prime",
    "isqrt",
    "lll_reduce",
    "mod_inverse",
    "read_dimacs",
    "recover_factor_lsb",
    "recover_factor_msb",
    "solve",
    "solve_instance",
    "threshold_bits",
    "write_dimacs",
]
