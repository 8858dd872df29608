"""Noise robustness of core-stable partitions in hedonic games."""

from .errors import *  # noqa: F401,F403
from .game import (
    Coalition,
    HedonicGame,
    Ordering,
    Partition,
    all_coalitions,
    blocking_coalitions,
    core_blocks,
    core_stable_partitions,
    find_core_partition,
    is_core_stable,
    prefers,
)
from .noise import (
    AdditiveGame,
    NoiseAssignment,
    NoiseSpec,
    additive_to_multiplicative,
    apply_noise,
    draw_noise,
    three_support,
    two_support,
)
from .sampling import SamplingSpec, sample_coalitions
from .agreement import (
    AgreementContext,
    PredictionReport,
    build_context,
    f_T_closed,
    f_T_oracle,
    h_T_closed,
    h_T_oracle,
    index_sets,
    prediction_epsilon,
    robustness_verdict,
)
from .pac import (
    PacParams,
    PartitionLearner,
    Sample,
    empirical_blocking_rate,
    epsilon_after_more_samples,
    learn_partition,
    sample_bounds,
    sample_complexity_top_responsive,
)
from .regimes import (
    Region1D,
    Region2D,
    hessian_2d,
    intersect_regions,
    safety_value_1d,
    superlevel_region_1d,
    superlevel_region_2d,
)
from .two_agent import (
    ThreeSupportSpec,
    TwoAgentGame,
    enumerate_cases,
    predict_prob_2support,
    predict_prob_3support,
    regime_1d_two_agent,
)

__version__ = "0.1.0"
