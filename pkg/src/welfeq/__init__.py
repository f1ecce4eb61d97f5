"""Two-player general-sum game toolkit: grid solvers for Stackelberg and
welfare-equilibrium strategies, opponent-shaping learner rules, and a
bandit for choosing welfare functions from experience."""

from .catalog import MATRIX_GAME_NAMES, build_game, catalog
from .equilibria import (
    WELFARE_TAGS,
    GridSolver,
    StrategyGrid,
    WelfareFunction,
    WEProfileReport,
    arrogance_penalty,
    best_response_map,
    is_coincidental,
    is_nash,
    normalized_rewards,
    stackelberg_strategy,
    we_profile_report,
    welfare_equilibrium_strategy,
    welfare_value,
)
from .games import (
    ImpossibleMarket,
    MatrixGame,
    PayoffTable2x2,
    Strategy,
    SwappedGame,
    Tandem,
    TwoPlayerGame,
    load_payoff_tables,
)
from .harness import (
    ExperimentConfig,
    TrajectoryRecord,
    phase_portrait,
    run_match,
    run_trials,
    trajectories_from_json,
    trajectories_to_json,
    trajectory_from_csv,
    trajectory_from_json,
    trajectory_to_csv,
    trajectory_to_json,
)
from .ipd import IpdConfig, IpdGame, IpdTftAlldMixGame, ipd_tft_alld_mix, ipd_value
from .learners import RULES, LearnerConfig, LearnerState, update_strategy
from .welfuse import (
    EpisodeRecord,
    WelfuseConfig,
    WelfuseHistory,
    posterior_sampling_update,
    welfuse_run,
)

__version__ = "0.1.0"

__all__ = [
    "MATRIX_GAME_NAMES",
    "build_game",
    "catalog",
    "WELFARE_TAGS",
    "GridSolver",
    "StrategyGrid",
    "WelfareFunction",
    "WEProfileReport",
    "arrogance_penalty",
    "best_response_map",
    "is_coincidental",
    "is_nash",
    "normalized_rewards",
    "stackelberg_strategy",
    "we_profile_report",
    "welfare_equilibrium_strategy",
    "welfare_value",
    "ImpossibleMarket",
    "MatrixGame",
    "PayoffTable2x2",
    "Strategy",
    "SwappedGame",
    "Tandem",
    "TwoPlayerGame",
    "load_payoff_tables",
    "ExperimentConfig",
    "TrajectoryRecord",
    "phase_portrait",
    "run_match",
    "run_trials",
    "trajectories_from_json",
    "trajectories_to_json",
    "trajectory_from_csv",
    "trajectory_from_json",
    "trajectory_to_csv",
    "trajectory_to_json",
    "IpdConfig",
    "IpdGame",
    "IpdTftAlldMixGame",
    "ipd_tft_alld_mix",
    "ipd_value",
    "RULES",
    "LearnerConfig",
    "LearnerState",
    "update_strategy",
    "EpisodeRecord",
    "WelfuseConfig",
    "WelfuseHistory",
    "posterior_sampling_update",
    "welfuse_run",
]
