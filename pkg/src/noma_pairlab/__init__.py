"""Downlink two-user NOMA pairing under imperfect SIC.

Rate models, closed-form feasibility bounds, adaptive user pairing and a
Poisson-network Monte-Carlo harness.
"""

__version__ = "0.1.0"

from .errors import (
    ConfigError,
    DomainError,
    FeasibilityError,
    OrderingError,
    PairLabError,
    SingularityError,
)
from .rates import (
    DEFAULT_DR_TABLE,
    DrTable,
    PowerSplit,
    SicImperfection,
    UserChannel,
    asr_noma,
    asr_oma,
    db_to_linear,
    dr_rate,
    linear_to_db,
    noma_rates,
    noma_sinr_pair,
    oma_rate,
)
from .bounds import (
    FeasibleRegion,
    alpha_lower_positivity,
    alpha_lower_strong,
    alpha_upper,
    beta_upper_at_alpha,
    beta_upper_star,
    feasible_region,
    msd,
    msd_satisfied,
)
from .pairing import (
    PairPlan,
    RateReport,
    SplitPolicy,
    evaluate_plan,
    oma_plan,
    pair_aup,
    pair_near_far,
    pair_ucgd,
    run_algorithm,
    select_alpha,
    split_groups,
)
