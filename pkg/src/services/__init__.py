"""Services module."""

from .core import build_instance, validate_instance
from .market import MarketState, build_mbb_graph, is_equilibrium
from .initializer import InitResult, initial_equilibrium
from .reallocation import SolveResult, solve
from .invariants import InvariantMonitor
from .verifier import CRITERIA, verify_criteria
from .oracle import OracleBudget, enumerate_allocations, is_fpo_lp, is_po_bruteforce, wefx_set, weqx_set
from .gm_reference import run_gm, table1_instance
from .generator import random_instance, random_instance_file

__all__ = [
    "build_instance",
    "validate_instance",
    "MarketState",
    "build_mbb_graph",
    "is_equilibrium",
    "InitResult",
    "initial_equilibrium",
    "SolveResult",
    "solve",
    "InvariantMonitor",
    "CRITERIA",
    "verify_criteria",
    "OracleBudget",
    "enumerate_allocations",
    "is_fpo_lp",
    "is_po_bruteforce",
    "wefx_set",
    "weqx_set",
    "run_gm",
    "table1_instance",
    "random_instance",
    "random_instance_file",
]
