"""Subgame-perfect-equilibrium solver for turn-based reachability games.

Explicit finite games are decided through the extended game and a labeling
fixpoint; timed games are reduced to finite ones by the clock-region
quotient first. A bounded brute-force oracle cross-checks the solver on
small instances.
"""

from .errors import DeadlockedRegionError, InputError, InvalidLassoError, SizeCapError
from .extended import ExtendedGame, build_extended_game, lift_lasso
from .fixpoint import (
    Decision,
    Labeling,
    Witness,
    compute_lambda_star,
    decide_constrained_existence,
    exists_consistent_play,
    initial_labeling,
    is_consistent,
    lambda_step,
)
from .game import (
    ConstraintProfile,
    FiniteGame,
    GainProfile,
    LassoPlay,
    gain_of_lasso,
    lasso_violations,
    validate_game,
)
from .jsonio import dump_finite_game, load_finite_game, load_ppta
from .oracle import (
    ORACLE_MAX_EXT_VERTICES,
    enumerate_lassos,
    oracle_decide,
    oracle_lambda_star,
)
from .quotient import (
    EquivalenceMap,
    check_bisimulation,
    check_respects_partition,
    check_respects_targets,
    quotient_game,
)
from .timed import (
    ClockRegion,
    GuardAtom,
    PPTA,
    RegionGame,
    Transition,
    all_regions,
    build_region_game,
    describe_region,
    guard_sat_region,
    guard_sat_valuation,
    region_equiv,
    region_of,
    region_representative,
    reset_region,
    reset_valuation,
    time_successors,
    validate_ppta,
)

__all__ = [
    "ClockRegion",
    "ConstraintProfile",
    "DeadlockedRegionError",
    "Decision",
    "EquivalenceMap",
    "ExtendedGame",
    "FiniteGame",
    "GainProfile",
    "GuardAtom",
    "InputError",
    "InvalidLassoError",
    "Labeling",
    "LassoPlay",
    "ORACLE_MAX_EXT_VERTICES",
    "PPTA",
    "RegionGame",
    "SizeCapError",
    "Transition",
    "Witness",
    "all_regions",
    "build_extended_game",
    "build_region_game",
    "check_bisimulation",
    "check_respects_partition",
    "check_respects_targets",
    "compute_lambda_star",
    "decide_constrained_existence",
    "describe_region",
    "dump_finite_game",
    "enumerate_lassos",
    "exists_consistent_play",
    "gain_of_lasso",
    "guard_sat_region",
    "guard_sat_valuation",
    "initial_labeling",
    "is_consistent",
    "lambda_step",
    "lasso_violations",
    "lift_lasso",
    "load_finite_game",
    "load_ppta",
    "oracle_decide",
    "oracle_lambda_star",
    "quotient_game",
    "region_equiv",
    "region_of",
    "region_representative",
    "reset_region",
    "reset_valuation",
    "time_successors",
    "validate_game",
    "validate_ppta",
]
