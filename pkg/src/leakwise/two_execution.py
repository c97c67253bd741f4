"""Leakage after two executions with overlapping spectators, normal inputs.

The two outputs are jointly normal, so every conditional entropy reduces
to bivariate-normal entropies of explicit covariance matrices.  The
shared spectator group contributes to both outputs; the target either
participates twice or only in the first execution.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Literal

import numpy as np

from .entropy import differential_entropy_normal, multivariate_normal_entropy
from .errors import DomainError

Participation = Literal["twice", "once"]


@dataclass(frozen=True)
class TwoExecConfig:
    """Spectator partition and participation mode for two executions.

    ``s0`` spectators contribute the same input to both executions;
    ``s1``/``s2`` appear only in the first/second.  ``participation``
    states whether the target contributes to the second output.
    """

    sigma2: float
    t: int
    s0: int
    s1: int
    s2: int
    participation: Participation = "twice"

    def __post_init__(self):
        if not self.sigma2 > 0:
            raise DomainError(f"variance must be positive, got {self.sigma2}")
        if self.t < 1:
            raise DomainError(f"target count must be >= 1, got {self.t}")
        if min(self.s0, self.s1, self.s2) < 0:
            raise DomainError("spectator counts must be non-negative")
        if self.s0 + self.s1 < 1 or self.s0 + self.s2 < 1:
            raise DomainError("each execution needs at least one spectator")
        if self.participation not in ("twice", "once"):
            raise DomainError(f"unknown participation mode {self.participation!r}")

    @property
    def var_t(self) -> float:
        return self.t * self.sigma2

    def var_s(self, i: int) -> float:
        return (self.s0, self.s1, self.s2)[i] * self.sigma2


def covariance_O(cfg: TwoExecConfig) -> np.ndarray:
    """Covariance of (O1, O2) when the target participates twice.

    Both outputs contain the target sum and the shared spectator sum, so
    the off-diagonal is the sum of those two variances.
    """
    if cfg.participation != "twice":
        raise DomainError("covariance_O applies to participation='twice'")
    shared = cfg.var_t + cfg.var_s(0)
    return np.array(
        [[shared + cfg.var_s(1), shared], [shared, shared + cfg.var_s(2)]]
    )


def covariance_S(cfg: TwoExecConfig) -> np.ndarray:
    """Covariance of the spectator-sum pair (S0+S1, S0+S2).

    Singular when s1 = s2 = 0 (both executions see the same spectators);
    callers handle that case analytically.
    """
    v0 = cfg.var_s(0)
    return np.array([[v0 + cfg.var_s(1), v0], [v0, v0 + cfg.var_s(2)]])


def covariance_O_prime(cfg: TwoExecConfig) -> np.ndarray:
    """Covariance of (O1, O2') when the target skips the second execution."""
    if cfg.participation != "once":
        raise DomainError("covariance_O_prime applies to participation='once'")
    v0 = cfg.var_s(0)
    return np.array(
        [
            [cfg.var_t + v0 + cfg.var_s(1), v0],
            [v0, v0 + cfg.var_s(2)],
        ]
    )


def first_exec_cond_entropy(cfg: TwoExecConfig) -> float:
    """Remaining target entropy (bits) after the first output alone."""
    n1 = cfg.s0 + cfg.s1
    return (
        cfg.t * differential_entropy_normal(cfg.sigma2)
        + differential_entropy_normal(n1 * cfg.sigma2)
        - differential_entropy_normal((cfg.t + n1) * cfg.sigma2)
    )


def cond_entropy_two_exec(cfg: TwoExecConfig) -> float:
    """Remaining target entropy (bits) after both outputs, participating twice.

    At 100% overlap (s1 = s2 = 0) the second output duplicates the first
    and the value is exactly the single-execution conditional entropy.
    """
    if cfg.s1 == 0 and cfg.s2 == 0:
        return first_exec_cond_entropy(cfg)
    return (
        cfg.t * differential_entropy_normal(cfg.sigma2)
        + multivariate_normal_entropy(covariance_S(cfg))
        - multivariate_normal_entropy(covariance_O(cfg))
    )


def cond_entropy_once(cfg: TwoExecConfig) -> float:
    """Remaining target entropy (bits) when the target skips execution two.

    With no unique spectators in the second execution (s2 = 0) the second
    output equals the shared spectator sum exactly; conditioning on it
    strips the shared noise from the first output, leaving the awae with
    s1 spectators (zero for a single target when s1 = 0).
    """
    if cfg.s2 == 0:
        h_t = cfg.t * differential_entropy_normal(cfg.sigma2)
        if cfg.s1 == 0:
            if cfg.t == 1:
                return 0.0
            return h_t - differential_entropy_normal(cfg.t * cfg.sigma2)
        return (
            h_t
            + differential_entropy_normal(cfg.s1 * cfg.sigma2)
            - differential_entropy_normal((cfg.t + cfg.s1) * cfg.sigma2)
        )
    return (
        cfg.t * differential_entropy_normal(cfg.sigma2)
        + multivariate_normal_entropy(covariance_S(cfg))
        - multivariate_normal_entropy(covariance_O_prime(cfg))
    )


def _second_cond_entropy(cfg: TwoExecConfig) -> float:
    if cfg.participation == "twice":
        return cond_entropy_two_exec(cfg)
    return cond_entropy_once(cfg)


def second_exec_loss_ratio(cfg: TwoExecConfig) -> float:
    """Incremental loss of the second execution relative to the first.

    (h(T|O1) - h(T|O1,O2 or O2')) / (h(T) - h(T|O1)); dimensionless and
    invariant to the per-party variance.
    """
    h_prior = cfg.t * differential_entropy_normal(cfg.sigma2)
    h_first = first_exec_cond_entropy(cfg)
    first_loss = h_prior - h_first
    if first_loss <= 0:
        raise DomainError("first-execution loss must be positive for the ratio")
    return (h_first - _second_cond_entropy(cfg)) / first_loss


@dataclass(frozen=True)
class OverlapPoint:
    """One point of an overlap sweep at fixed spectators per execution."""

    s0: int
    s1: int
    s2: int
    overlap: float
    prior_entropy: float
    after_first: float
    after_second: float
    second_loss_ratio: float


def overlap_sweep(
    sigma2: float,
    t: int,
    n_per_exec: int,
    participation: Participation = "twice",
) -> list[OverlapPoint]:
    """Sweep the shared-spectator count 0..n with s1 = s2 = n - s0."""
    if n_per_exec < 1:
        raise DomainError(f"need at least one spectator per execution, got {n_per_exec}")
    points = []
    for s0 in range(n_per_exec + 1):
        unique = n_per_exec - s0
        cfg = TwoExecConfig(
            sigma2=sigma2,
            t=t,
            s0=s0,
            s1=unique,
            s2=unique,
            participation=participation,
        )
        points.append(
            OverlapPoint(
                s0=s0,
                s1=unique,
                s2=unique,
                overlap=s0 / n_per_exec,
                prior_entropy=t * differential_entropy_normal(sigma2),
                after_first=first_exec_cond_entropy(cfg),
                after_second=_second_cond_entropy(cfg),
                second_loss_ratio=second_exec_loss_ratio(cfg),
            )
        )
    return points
