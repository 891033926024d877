"""Tournament-format evaluation engine: pairwise strength model, format
simulators, ranking schemes, and Monte Carlo discrepancy campaigns."""

from .errors import (
    IncompleteInputError,
    IncompleteRoundRobinError,
    IngestionError,
    InvalidComparisonError,
    InvalidInputError,
    InvalidPairingError,
    TournsimError,
    UnsupportedSizeError,
)
from .formats import (
    DecisivePolicy,
    FixedResultTable,
    FormatSpec,
    HIGHER_SEED,
    LedgerEntry,
    RANDOM_SEEDING,
    TournamentOutcome,
    UNIFORM_COIN,
    rank_from_fixed_results,
    replay_outcome,
    run_format,
    run_format_2012,
    run_format_2013_double_elim,
    run_iterated_round_robin,
    run_proposed,
)
from .model import (
    AverageResult,
    EmpiricalPoolSampler,
    GameResult,
    PairwiseGoalModel,
    PoissonSampler,
    TeamId,
    average_results,
    derive_rng,
    load_model,
    sample_game,
)
from .montecarlo import (
    CampaignSpec,
    ComparisonSummary,
    DiscrepancyDistribution,
    compare_campaigns,
    merge_distributions,
    run_campaign,
)
from .scoring import (
    CONTINUOUS,
    DISCRETE,
    Ranking,
    TeamStats,
    TieBreakPolicy,
    continuous_points,
    continuous_standings,
    discrete_standings,
    discretize_pair,
    l1_distance,
    points_per_game,
    rank,
    standings_from_games,
)

__version__ = "0.1.0"
