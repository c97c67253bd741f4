"""Quantify what a secure sum/average output discloses about one input.

Closed-form entropy-loss analysis for one and two executions over
Poisson, discrete-uniform, normal, and log-normal inputs, with a
brute-force enumeration oracle validating every closed form.
"""

from .distributions import (
    DEFAULT_TRUNCATION,
    DiscreteUniform,
    DistributionSpec,
    FwParams,
    LogNormal,
    Normal,
    Pmf,
    Poisson,
    fenton_wilkinson,
    normal_sum_params,
    poisson_sum_pmf,
    poisson_sum_pmf_table,
    sum_pmf_table,
    uniform_sum_convolution,
    uniform_sum_pmf,
)
from .entropy import (
    differential_entropy_lognormal,
    differential_entropy_normal,
    multivariate_normal_entropy,
    poisson_entropy_approx,
    shannon_entropy,
)
from .errors import (
    DegenerateScenarioError,
    DomainError,
    LeakwiseError,
    ResourceBudgetError,
    SingularCovarianceError,
    UnboundedSearchError,
)
from .oracle import (
    FiniteScenario,
    awae_enumerated,
    jwae,
    monte_carlo_covariance,
    twae,
    attacker_independence_spread,
)
from .single_execution import (
    EntropyReport,
    ScenarioConfig,
    awae,
    loss_report,
    normal_loss_closed_form,
    solve_min_spectators,
    sweep,
)
from .two_execution import (
    OverlapPoint,
    TwoExecConfig,
    cond_entropy_once,
    cond_entropy_two_exec,
    covariance_O,
    covariance_O_prime,
    covariance_S,
    first_exec_cond_entropy,
    overlap_sweep,
    second_exec_loss_ratio,
)

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
