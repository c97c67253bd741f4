"""Entropy computations, uniformly in bits.

Shannon entropy applies to tabulated PMFs; differential entropy covers
the normal, log-normal, and bivariate normal families.  Natural-log
closed forms are converted to base 2 so that losses and ratios are
comparable across discrete and continuous inputs.
"""

from __future__ import annotations

import math

import numpy as np

from .distributions import Pmf
from .errors import DomainError, SingularCovarianceError

_LN2 = math.log(2.0)
_TWO_PI_E = 2.0 * math.pi * math.e


def shannon_entropy(pmf: Pmf) -> float:
    """Shannon entropy (bits) of a tabulated PMF; 0 * log 0 counts as 0."""
    total = pmf.total_mass()
    if abs(total - 1.0) > 1e-6:
        raise DomainError(f"PMF mass {total} deviates from 1 by more than 1e-6")
    p = pmf.probs[pmf.probs > 0]
    return float(-np.sum(p * np.log2(p)))


def differential_entropy_normal(sigma2: float) -> float:
    """Differential entropy (bits) of a normal variable with variance sigma2."""
    if not sigma2 > 0:
        raise DomainError(f"variance must be positive, got {sigma2}")
    return 0.5 * math.log2(_TWO_PI_E * sigma2)


def differential_entropy_lognormal(mu: float, sigma2: float) -> float:
    """Differential entropy (bits) of a log-normal variable."""
    if not sigma2 > 0:
        raise DomainError(f"variance must be positive, got {sigma2}")
    return (mu + 0.5) / _LN2 + 0.5 * math.log2(2.0 * math.pi * sigma2)


def poisson_entropy_approx(lam: float) -> float:
    """Series approximation (bits) of the Poisson entropy, valid for lam >= 10.

    Gaussian-like leading term with three correction terms in inverse
    powers of the rate.
    """
    if lam < 10:
        raise DomainError(f"series approximation requires rate >= 10, got {lam}")
    corrections = (
        1.0 / (12.0 * lam) + 1.0 / (24.0 * lam**2) + 19.0 / (360.0 * lam**3)
    )
    return 0.5 * math.log2(_TWO_PI_E * lam) - corrections / _LN2


def multivariate_normal_entropy(cov: np.ndarray) -> float:
    """Differential entropy (bits) of a bivariate normal with covariance cov.

    Degenerate (near-singular) covariances are rejected; analytically
    degenerate configurations must be special-cased by the caller.
    """
    cov = np.asarray(cov, dtype=float)
    if cov.shape != (2, 2):
        raise DomainError(f"expected a 2x2 covariance matrix, got shape {cov.shape}")
    if abs(cov[0, 1] - cov[1, 0]) > 1e-12:
        raise DomainError("covariance matrix must be symmetric")
    det = cov[0, 0] * cov[1, 1] - cov[0, 1] * cov[1, 0]
    if det <= 1e-12:
        raise SingularCovarianceError(f"covariance determinant {det} is not positive")
    return 0.5 * math.log2(_TWO_PI_E**2 * det)
