"""Delayed random-graph push: tree process, coupled phases and short-path analysis."""

from .paths import find_short_path, short_path_failures
from .process import (
    DrpAudit,
    DrpOverrides,
    DrpReport,
    DrpState,
    Phase1Result,
    PhaseSchedule,
    coupled_drp_round,
    phase1_build_tree,
    phase3_round,
    run_drp,
)
from .tree import GrowthReport, TreeState, tree_step, verify_tree_growth

__all__ = [
    "DrpAudit", "DrpOverrides", "DrpReport", "DrpState", "Phase1Result", "PhaseSchedule",
    "coupled_drp_round", "phase1_build_tree", "phase3_round", "run_drp",
    "GrowthReport", "TreeState", "tree_step", "verify_tree_growth",
    "find_short_path", "short_path_failures",
]
