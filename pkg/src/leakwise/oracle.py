"""Brute-force ground truth over small finite domains.

Implements the three weighted-average-entropy measures by exhaustive
enumeration of input vectors and outputs, plus a seeded Monte Carlo
covariance estimator for the two-execution output pair.  These are the
independent checks for the closed-form results elsewhere in the package.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .distributions import (
    DEFAULT_TRUNCATION,
    DiscreteUniform,
    DistributionSpec,
    Poisson,
    poisson_sum_pmf_table,
)
from .errors import DomainError, ResourceBudgetError

_ENUMERATION_BUDGET = 10**8


@dataclass(frozen=True)
class FiniteScenario:
    """Attacker/target/spectator partition over one finite per-party domain.

    ``values`` must be contiguous integers; ``probs`` is the shared
    per-party distribution over them, normalized to 1.
    """

    values: tuple[int, ...]
    probs: tuple[float, ...]
    attackers: int
    targets: int
    spectators: int

    def __post_init__(self):
        if self.attackers < 1 or self.targets < 1 or self.spectators < 0:
            raise DomainError("need attackers >= 1, targets >= 1, spectators >= 0")
        if len(self.values) != len(self.probs):
            raise DomainError("values and probs must have equal length")
        if list(self.values) != list(
            range(self.values[0], self.values[0] + len(self.values))
        ):
            raise DomainError("domain must be contiguous integers")
        if abs(math.fsum(self.probs) - 1.0) > 1e-9:
            raise DomainError("per-party probabilities must sum to 1 within 1e-9")

    @classmethod
    def from_spec(
        cls,
        dist: DistributionSpec,
        attackers: int,
        targets: int,
        spectators: int,
        threshold: float = DEFAULT_TRUNCATION,
    ) -> "FiniteScenario":
        """Build a finite domain from a discrete family.

        A Poisson domain is truncated at ``threshold`` past the mode and
        the kept mass renormalized to a proper distribution.
        """
        if isinstance(dist, DiscreteUniform):
            k = dist.n_values
            return cls(
                values=tuple(range(k)),
                probs=tuple([1.0 / k] * k),
                attackers=attackers,
                targets=targets,
                spectators=spectators,
            )
        if isinstance(dist, Poisson):
            table = poisson_sum_pmf_table(dist.lam, 1, threshold)
            kept = table.probs / math.fsum(table.probs)
            return cls(
                values=tuple(int(v) for v in table.support),
                probs=tuple(float(p) for p in kept),
                attackers=attackers,
                targets=targets,
                spectators=spectators,
            )
        raise DomainError(
            f"enumeration requires a finite discrete family, got {type(dist).__name__}"
        )

    def _check_budget(self):
        size = len(self.values) ** (self.attackers + self.targets + self.spectators)
        if size > _ENUMERATION_BUDGET:
            raise ResourceBudgetError(
                f"enumeration over {size} input combinations exceeds the budget"
            )


def _spectator_sum_pmf(scenario: FiniteScenario) -> tuple[int, np.ndarray]:
    """(offset, probs) of the sum of all spectator inputs.

    Iterating over the convolved sum instead of raw spectator tuples is
    exact (the sum is sufficient) and exponentially cheaper.
    """
    base = np.asarray(scenario.probs)
    if scenario.spectators == 0:
        return (0, np.ones(1))
    out = base
    for _ in range(scenario.spectators - 1):
        out = np.convolve(out, base)
    return (scenario.spectators * scenario.values[0], out)


def _target_vectors(scenario: FiniteScenario):
    return itertools.product(scenario.values, repeat=scenario.targets)


def _vector_prob(scenario: FiniteScenario, vec) -> float:
    lo = scenario.values[0]
    prob = 1.0
    for v in vec:
        prob *= scenario.probs[v - lo]
    return prob


def jwae(scenario: FiniteScenario, x_a, x_t) -> float:
    """Output-weighted posterior entropy for fixed attacker/target inputs.

    For each reachable output, the posterior over target vectors follows
    by exact Bayes from the spectator-sum distribution; the result is the
    expectation of its entropy under the output distribution.
    """
    scenario._check_budget()
    if len(x_a) != scenario.attackers or len(x_t) != scenario.targets:
        raise DomainError("input vectors must match the group sizes")
    s_a = sum(x_a)
    s_t = sum(x_t)
    s_off, s_probs = _spectator_sum_pmf(scenario)

    vectors = list(_target_vectors(scenario))
    priors = np.array([_vector_prob(scenario, v) for v in vectors])
    sums = np.array([sum(v) for v in vectors])

    total = 0.0
    for idx, q in enumerate(s_probs):
        if q <= 0:
            continue
        o = s_a + s_t + s_off + idx
        # P(O = o | x_a, x_t) is q; posterior weight of a candidate target
        # vector is prior * P(spectator sum = o - s_a - candidate sum).
        residual = o - s_a
        s_idx = residual - sums - s_off
        valid = (s_idx >= 0) & (s_idx < len(s_probs))
        weights = np.zeros(len(vectors))
        weights[valid] = priors[valid] * s_probs[s_idx[valid]]
        z = weights.sum()
        if z <= 0:
            continue
        post = weights[weights > 0] / z
        total += q * float(-np.sum(post * np.log2(post)))
    return total


def _jwae_by_target_sum(scenario: FiniteScenario, x_a):
    """jwae keyed by the target-vector sum (its only influence on the value)."""
    cache: dict[int, float] = {}

    def value(x_t) -> float:
        key = sum(x_t)
        if key not in cache:
            cache[key] = jwae(scenario, x_a, x_t)
        return cache[key]

    return value


def twae(scenario: FiniteScenario, x_t) -> float:
    """Average of jwae over attacker vectors, weighted by their prior."""
    scenario._check_budget()
    total = 0.0
    cache: dict[int, float] = {}
    for x_a in itertools.product(scenario.values, repeat=scenario.attackers):
        key = sum(x_a)
        if key not in cache:
            cache[key] = jwae(scenario, x_a, x_t)
        total += _vector_prob(scenario, x_a) * cache[key]
    return total


def awae_enumerated(scenario: FiniteScenario, x_a) -> float:
    """Average of jwae over target vectors, weighted by their prior."""
    scenario._check_budget()
    value = _jwae_by_target_sum(scenario, x_a)
    total = 0.0
    for x_t in _target_vectors(scenario):
        total += _vector_prob(scenario, x_t) * value(x_t)
    return total


def attacker_independence_spread(scenario: FiniteScenario) -> float:
    """Spread (max - min, bits) of the enumerated awae over attacker vectors."""
    scenario._check_budget()
    seen: dict[int, float] = {}
    for x_a in itertools.product(scenario.values, repeat=scenario.attackers):
        key = sum(x_a)
        if key not in seen:
            seen[key] = awae_enumerated(scenario, x_a)
    vals = list(seen.values())
    return max(vals) - min(vals)


def monte_carlo_covariance(
    cfg,
    samples: int,
    seed: int,
    mu: float = 0.0,
) -> np.ndarray:
    """Sample covariance of the two execution outputs under ``cfg``.

    Draws group sums directly (a sum of i.i.d. normals is normal);
    deterministic for a fixed (seed, samples) pair.  ``mu`` is the
    per-party mean, exposed to confirm mean-independence of entropies.
    """
    if samples < 10**5:
        raise DomainError(f"need at least 1e5 samples, got {samples}")
    sigma = math.sqrt(cfg.sigma2)
    rng = np.random.default_rng(seed)

    def group(count: int) -> np.ndarray:
        if count == 0:
            return np.zeros(samples)
        return rng.normal(count * mu, math.sqrt(count) * sigma, size=samples)

    x_t = group(cfg.t)
    x_s0 = group(cfg.s0)
    x_s1 = group(cfg.s1)
    x_s2 = group(cfg.s2)
    o1 = x_t + x_s0 + x_s1
    if cfg.participation == "twice":
        o2 = x_t + x_s0 + x_s2
    else:
        o2 = x_s0 + x_s2
    return np.cov(np.stack([o1, o2]))
