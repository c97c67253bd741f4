"""Distributions of sums of i.i.d. participant inputs.

Supports four input families: Poisson, discrete uniform on {0..N-1},
normal, and log-normal.  Discrete sums are tabulated as finite PMFs;
the log-normal sum is approximated by moment matching with a single
log-normal (Fenton-Wilkinson).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Union

import numpy as np

from .errors import DomainError, ResourceBudgetError

DEFAULT_TRUNCATION = 1e-7

# Tabulation bound for exact convolutions (number of support points).
_CONVOLUTION_BUDGET = 10**7


@dataclass(frozen=True)
class Poisson:
    """Poisson inputs with rate ``lam`` > 0."""

    lam: float

    def __post_init__(self):
        if not self.lam > 0:
            raise DomainError(f"Poisson rate must be positive, got {self.lam}")


@dataclass(frozen=True)
class DiscreteUniform:
    """Uniform inputs on the integers {0, 1, ..., n_values - 1}."""

    n_values: int

    def __post_init__(self):
        if self.n_values < 2:
            raise DomainError(
                f"uniform support size must be >= 2, got {self.n_values}"
            )


@dataclass(frozen=True)
class Normal:
    """Normal inputs with mean ``mu`` and variance ``sigma2`` > 0."""

    mu: float
    sigma2: float

    def __post_init__(self):
        if not self.sigma2 > 0:
            raise DomainError(f"variance must be positive, got {self.sigma2}")


@dataclass(frozen=True)
class LogNormal:
    """Log-normal inputs; ``mu``/``sigma2`` parametrize the log of the input."""

    mu: float
    sigma2: float

    def __post_init__(self):
        if not self.sigma2 > 0:
            raise DomainError(f"variance must be positive, got {self.sigma2}")


DistributionSpec = Union[Poisson, DiscreteUniform, Normal, LogNormal]


@dataclass(frozen=True)
class Pmf:
    """Finite tabulated PMF over contiguous integer support.

    ``offset`` is the value of the first tabulated support point.
    ``truncated_mass`` is the total probability excluded by halting the
    tabulation of an infinite-support distribution.
    """

    offset: int
    probs: np.ndarray
    truncation_threshold: float = 0.0
    truncated_mass: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "probs", np.asarray(self.probs, dtype=float))
        if np.any(self.probs < 0):
            raise DomainError("PMF entries must be non-negative")
        total = self.total_mass()
        if abs(total - 1.0) > 1e-6:
            raise DomainError(f"PMF mass {total} deviates from 1 by more than 1e-6")

    def total_mass(self) -> float:
        return float(math.fsum(self.probs) + self.truncated_mass)

    @property
    def support(self) -> np.ndarray:
        return np.arange(self.offset, self.offset + len(self.probs))


@dataclass(frozen=True)
class FwParams:
    """Parameters of the single log-normal matched to a log-normal sum."""

    mu_hat: float
    sigma2_hat: float


def poisson_sum_pmf(lam: float, n: int, a: int) -> float:
    """PMF of a sum of ``n`` i.i.d. Poisson(``lam``) variables at value ``a``.

    Evaluated in log space via the log-gamma function so that large
    values of ``a`` and ``n * lam`` do not overflow.
    """
    if not lam > 0:
        raise DomainError(f"rate must be positive, got {lam}")
    if n < 1:
        raise DomainError(f"count must be >= 1, got {n}")
    if a < 0:
        raise DomainError(f"support value must be non-negative, got {a}")
    rate = n * lam
    return math.exp(a * math.log(rate) - rate - math.lgamma(a + 1))


def poisson_sum_pmf_table(
    lam: float, n: int, threshold: float = DEFAULT_TRUNCATION
) -> Pmf:
    """Tabulate the Poisson-sum PMF from 0 upward.

    Scanning halts at the first value past the mode (``floor(n * lam)``)
    whose probability drops below ``threshold``.  Leading sub-threshold
    entries are kept so that large rates tabulate their full left tail.
    """
    if not (0 < threshold <= 1e-3):
        raise DomainError(f"threshold must lie in (0, 1e-3], got {threshold}")
    if not lam > 0:
        raise DomainError(f"rate must be positive, got {lam}")
    if n < 1:
        raise DomainError(f"count must be >= 1, got {n}")
    mode = math.floor(n * lam)
    probs = []
    a = 0
    while True:
        p = poisson_sum_pmf(lam, n, a)
        if a > mode and p < threshold:
            break
        probs.append(p)
        a += 1
    truncated = max(0.0, 1.0 - math.fsum(probs))
    return Pmf(
        offset=0,
        probs=np.array(probs),
        truncation_threshold=threshold,
        truncated_mass=truncated,
    )


def uniform_sum_pmf(n_values: int, n: int, x: int) -> float:
    """PMF of a sum of ``n`` i.i.d. uniforms on {0..n_values-1} at value ``x``.

    Alternating binomial-coefficient sum, evaluated in log-gamma space
    with explicit sign tracking; the gamma terms overflow doubles well
    before n reaches 20 if evaluated directly.  Values of ``x`` outside
    {0..n(n_values-1)} return 0.
    """
    if n_values < 2:
        raise DomainError(f"uniform support size must be >= 2, got {n_values}")
    if n < 1:
        raise DomainError(f"count must be >= 1, got {n}")
    if x < 0 or x > n * (n_values - 1):
        return 0.0
    log_norm = n * math.log(n_values)
    log_terms = []
    signs = []
    for p in range(x // n_values + 1):
        m = x - p * n_values
        # C(n, p) * C(m + n - 1, n - 1)
        lg = (
            math.lgamma(n + 1)
            - math.lgamma(p + 1)
            - math.lgamma(n - p + 1)
            + math.lgamma(m + n)
            - math.lgamma(m + 1)
            - math.lgamma(n)
        )
        log_terms.append(lg)
        signs.append(-1.0 if p % 2 else 1.0)
    peak = max(log_terms)
    total = math.fsum(
        s * math.exp(lg - peak) for s, lg in zip(signs, log_terms)
    )
    return max(0.0, total * math.exp(peak - log_norm))


def uniform_sum_convolution(n_values: int, n: int) -> Pmf:
    """Exact PMF of the uniform sum by iterated convolution.

    Serves as the unambiguous reference for :func:`uniform_sum_pmf`.
    """
    if n_values < 2:
        raise DomainError(f"uniform support size must be >= 2, got {n_values}")
    if n < 1:
        raise DomainError(f"count must be >= 1, got {n}")
    if n * n_values > _CONVOLUTION_BUDGET:
        raise ResourceBudgetError(
            f"convolution of {n} x {n_values}-point PMFs exceeds the "
            f"{_CONVOLUTION_BUDGET}-point tabulation bound"
        )
    base = np.full(n_values, 1.0 / n_values)
    out = base
    for _ in range(n - 1):
        out = np.convolve(out, base)
    return Pmf(offset=0, probs=out)


def fenton_wilkinson(mu: float, sigma2: float, n: int) -> FwParams:
    """Moment-match a sum of ``n`` i.i.d. log-normals to a single log-normal.

    Rejects sigma2 > 4, where the moment-matching approximation is known
    to deteriorate badly.
    """
    if not 0 < sigma2 <= 4:
        raise DomainError(
            f"log-normal sum approximation requires 0 < sigma2 <= 4, got {sigma2}"
        )
    if n < 1:
        raise DomainError(f"count must be >= 1, got {n}")
    if n == 1:
        return FwParams(mu_hat=mu, sigma2_hat=sigma2)
    sigma2_hat = math.log1p(math.expm1(sigma2) / n)
    mu_hat = math.log(n) + mu + 0.5 * (sigma2 - sigma2_hat)
    return FwParams(mu_hat=mu_hat, sigma2_hat=sigma2_hat)


def normal_sum_params(mu: float, sigma2: float, n: int) -> tuple[float, float]:
    """Mean and variance of a sum of ``n`` i.i.d. normals."""
    if not sigma2 > 0:
        raise DomainError(f"variance must be positive, got {sigma2}")
    if n < 1:
        raise DomainError(f"count must be >= 1, got {n}")
    return (n * mu, n * sigma2)


def sum_pmf_table(
    dist: DistributionSpec, n: int, threshold: float = DEFAULT_TRUNCATION
) -> Pmf:
    """Tabulated PMF of the sum of ``n`` i.i.d. draws of a discrete family."""
    if isinstance(dist, Poisson):
        return poisson_sum_pmf_table(dist.lam, n, threshold)
    if isinstance(dist, DiscreteUniform):
        return uniform_sum_convolution(dist.n_values, n)
    raise DomainError(f"no tabulated sum for continuous family {type(dist).__name__}")
