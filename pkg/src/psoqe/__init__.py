"""Convergence regions of stagnating PSO via stochastic Lyapunov functions."""

__version__ = "0.1.0"

from .lyapunov import QuadForm, eval_quad_form, expected_delta_v, mc_expected_delta_v
from .model import (DomainError, Moments, PMatrix, StateVec, SwarmParams, SystemMatrices,
                    Template, Variant, build_system, is_positive_definite, scaled_moments)
from .qe import (Decision, UniPoly, decide_grid, decide_membership, feasible_1d,
                 neg_def_condition, real_roots, union_grid, union_membership)
from .raster import GridSpec, Raster, agreement, area, rasterize, set_ops
from .regions import (RegionId, region_mask, region_predicate, sys1_diagonal_boundary,
                      sys1_diagonal_predicate)
from .simulate import (Dynamics, EnsembleStats, SimConfig, Verdict, classify, run_ensemble,
                       step_once, witness_decay_check)

__all__ = [
    "Decision", "DomainError", "Dynamics", "EnsembleStats", "GridSpec", "Moments", "PMatrix",
    "QuadForm", "Raster", "RegionId", "SimConfig", "StateVec", "SwarmParams",
    "SystemMatrices", "Template", "UniPoly", "Variant", "Verdict", "agreement", "area",
    "build_system", "classify", "decide_grid", "decide_membership", "eval_quad_form",
    "expected_delta_v", "feasible_1d", "is_positive_definite", "mc_expected_delta_v",
    "neg_def_condition", "rasterize", "real_roots", "region_mask", "region_predicate",
    "run_ensemble", "scaled_moments", "set_ops", "step_once", "sys1_diagonal_boundary",
    "sys1_diagonal_predicate", "union_grid", "union_membership", "witness_decay_check",
]
