"""Finite-domain CSP solving with group search optimisation and arc consistency."""
from .baselines import PsoParams, solve_backtracking, solve_pso, solve_standard_gso
from .estimators import APMCPGSO, ArcConsistency, BacktrackingSolver, PSOSolver, StandardGSO, ViolationCounter
from .gso import GsoParams, Member, SearchBounds
from .network import Constraint, ConstraintNetwork, check_pair, evaluate, is_solution
from .propagation import PropagationResult, ac3, assign_and_propagate, revise
from .solver import SolverResult, StopCriterion, StopMode, StopReason, solve

__version__ = "0.1.0"

__all__ = [
    "APMCPGSO",
    "ArcConsistency",
    "BacktrackingSolver",
    "Constraint",
    "ConstraintNetwork",
    "GsoParams",
    "Member",
    "PSOSolver",
    "PropagationResult",
    "PsoParams",
    "SearchBounds",
    "SolverResult",
    "StandardGSO",
    "StopCriterion",
    "StopMode",
    "StopReason",
    "ViolationCounter",
    "ac3",
    "assign_and_propagate",
    "check_pair",
    "evaluate",
    "is_solution",
    "revise",
    "solve",
    "solve_backtracking",
    "solve_pso",
    "solve_standard_gso",
]
