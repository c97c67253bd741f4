"""Remaining entropy and entropy loss for a single sum/average execution.

The attacker's expected remaining uncertainty about the target group,
after seeing the output and removing its own contribution, reduces to

    H(targets) + H(spectator sum) - H(target sum + spectator sum),

so only entropies of sums of i.i.d. inputs are needed.  For normal
inputs the absolute loss collapses to the parameter-free closed form
``0.5 * log2((t + n) / n)``.
"""

from __future__ import annotations

from dataclasses import dataclass
import math

from .distributions import (
    DEFAULT_TRUNCATION,
    DiscreteUniform,
    DistributionSpec,
    LogNormal,
    Normal,
    Poisson,
    fenton_wilkinson,
    sum_pmf_table,
)
from .entropy import (
    differential_entropy_lognormal,
    differential_entropy_normal,
    shannon_entropy,
)
from .errors import DegenerateScenarioError, DomainError, UnboundedSearchError

_SEARCH_LIMIT = 10**6


@dataclass(frozen=True)
class ScenarioConfig:
    """One execution: ``t`` targets and ``n`` spectators, i.i.d. inputs."""

    dist: DistributionSpec
    t: int
    n: int

    def __post_init__(self):
        if self.t < 1:
            raise DomainError(f"target count must be >= 1, got {self.t}")
        if self.n < 0:
            raise DomainError(f"spectator count must be >= 0, got {self.n}")


@dataclass(frozen=True)
class EntropyReport:
    """Before/after entropies and the derived losses, all in bits."""

    before: float
    after: float
    absolute_loss: float
    relative_loss: float


def _single_input_entropy(dist: DistributionSpec, threshold: float) -> float:
    if isinstance(dist, (Poisson, DiscreteUniform)):
        return shannon_entropy(sum_pmf_table(dist, 1, threshold))
    if isinstance(dist, Normal):
        return differential_entropy_normal(dist.sigma2)
    if isinstance(dist, LogNormal):
        return differential_entropy_lognormal(dist.mu, dist.sigma2)
    raise DomainError(f"unsupported distribution {type(dist).__name__}")


def _sum_entropy(dist: DistributionSpec, k: int, threshold: float) -> float:
    """Entropy of the sum of ``k`` i.i.d. inputs (k >= 1)."""
    if isinstance(dist, (Poisson, DiscreteUniform)):
        return shannon_entropy(sum_pmf_table(dist, k, threshold))
    if isinstance(dist, Normal):
        return differential_entropy_normal(k * dist.sigma2)
    if isinstance(dist, LogNormal):
        fw = fenton_wilkinson(dist.mu, dist.sigma2, k)
        return differential_entropy_lognormal(fw.mu_hat, fw.sigma2_hat)
    raise DomainError(f"unsupported distribution {type(dist).__name__}")


def awae(scenario: ScenarioConfig, threshold: float = DEFAULT_TRUNCATION) -> float:
    """Expected remaining entropy (bits) of the target group after one output.

    With no spectators a discrete target is fully revealed (0 bits); the
    continuous analogue diverges and is rejected.
    """
    dist, t, n = scenario.dist, scenario.t, scenario.n
    discrete = isinstance(dist, (Poisson, DiscreteUniform))
    if n == 0:
        if discrete:
            return 0.0
        raise DegenerateScenarioError(
            "continuous inputs with no spectators have no finite remaining entropy"
        )
    before = t * _single_input_entropy(dist, threshold)
    return before + _sum_entropy(dist, n, threshold) - _sum_entropy(dist, t + n, threshold)


def loss_report(
    scenario: ScenarioConfig, threshold: float = DEFAULT_TRUNCATION
) -> EntropyReport:
    """Entropy before and after one execution, with absolute and relative loss."""
    before = scenario.t * _single_input_entropy(scenario.dist, threshold)
    if before <= 0:
        raise DomainError(
            f"relative loss is undefined for non-positive prior entropy {before}"
        )
    after = awae(scenario, threshold)
    absolute = before - after
    return EntropyReport(
        before=before,
        after=after,
        absolute_loss=absolute,
        relative_loss=absolute / before,
    )


def normal_loss_closed_form(t: int, n: int) -> float:
    """Absolute loss (bits) for normal inputs; depends only on the counts."""
    if t < 1:
        raise DomainError(f"target count must be >= 1, got {t}")
    if n < 1:
        raise DomainError(f"spectator count must be >= 1, got {n}")
    return 0.5 * math.log2((t + n) / n)


def solve_min_spectators(
    dist: DistributionSpec,
    t: int,
    budget: float,
    threshold: float = DEFAULT_TRUNCATION,
) -> int:
    """Smallest spectator count whose relative loss meets ``budget``.

    Relies on the relative loss being strictly decreasing in the
    spectator count (a verified property of all four families): doubles
    until the budget is met, then bisects.
    """
    if not 0 < budget < 1:
        raise DomainError(f"budget must lie in (0, 1), got {budget}")

    def rel(n: int) -> float:
        return loss_report(ScenarioConfig(dist, t, n), threshold).relative_loss

    hi = 1
    while rel(hi) > budget:
        hi *= 2
        if hi > _SEARCH_LIMIT:
            raise UnboundedSearchError(
                f"budget {budget} not met by {_SEARCH_LIMIT} spectators"
            )
    lo = hi // 2  # rel(lo) > budget when lo >= 1
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if rel(mid) <= budget:
            hi = mid
        else:
            lo = mid
    return hi


def sweep(
    dist: DistributionSpec,
    t: int,
    n_max: int,
    threshold: float = DEFAULT_TRUNCATION,
) -> list[EntropyReport]:
    """Loss reports for spectator counts 1..n_max, in order."""
    if n_max < 1:
        raise DomainError(f"sweep bound must be >= 1, got {n_max}")
    return [
        loss_report(ScenarioConfig(dist, t, n), threshold)
        for n in range(1, n_max + 1)
    ]
