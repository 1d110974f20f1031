"""Moments, constants and simulation for the minimum of p uniform coupon collectors."""

__version__ = "0.1.0"

from .asymptotics import (
    AsymptoticEstimate,
    classical_moments,
    estimate,
    regime_of,
    stirling_erdos_szekeres,
    stirling_louchard,
    threshold_c_N,
)
from .constants import (
    CollectorConstants,
    alt_binomial_log_sum,
    conjecture_scan,
    constants,
    flajolet_expansion,
)
from .errors import DomainError, PrecisionError, RegimeError, WorkBudgetExceeded
from .moments import (
    MomentResult,
    exact_mean,
    exact_second_moment,
    pair_closed_form_mean,
    truncation_index,
)
from .simulation import SimulationStats, run_simulation, simulate_completion_time
from .stirling import (
    CompletionLaw,
    StirlingColumn,
    completion_cdf,
    inclusion_exclusion_survival,
    markov_law_oracle,
    stirling_column,
)
