"""Optimal selection of the k-th best of n candidates, computed exactly."""

from .closed_form import (
    asymptotic_constants,
    h_value,
    k3_thresholds,
    p1,
    p2,
    p3,
    r_threshold,
    rprime_threshold,
    tau_for,
    tau_policy,
)
from .dp_solver import StagePolicy, ValueTable, p_kn, p_value, solve
from .policy_eval import conditional_value, evaluate
from .reward import Goal, RankSet, SingleRank, reward, reward_k3
from .simulator import SimulationReport, simulate

__version__ = "0.1.0"
