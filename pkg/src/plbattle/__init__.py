"""Best-item identification from subset-wise preferences under the Plackett-Luce model."""

from .algorithms import (
    ALGORITHMS,
    AlgorithmResult,
    PacParams,
    divide_and_battle_budget,
    divide_and_battle_tr,
    divide_and_battle_wi,
    halving_battle,
    halving_battle_budget,
    theory_budget,
    trace_the_best_budget,
    trace_the_best_tr,
    trace_the_best_wi,
)
from .choice_model import (
    CoinStream,
    PLInstance,
    is_eps_optimal,
    pairwise_prob,
    sample_top_m,
    sample_winner,
    sample_winner_coupled,
    top_m_prob,
    winner_prob,
)
from .environment import BattleEnvironment
from .harness import ExperimentConfig, TrialRecord, run_trials, scaling_sweep, summarize
from .instances import generate_instance
from .oracle import build_lower_bound_instances, enumerate_top_m_distribution, tv_distance
from .rank_breaking import PairwiseCounts, copeland_winners, empirical_pref, rank_break_update

__version__ = "0.1.0"
