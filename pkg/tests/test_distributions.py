import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from leakwise import (
    DiscreteUniform,
    DomainError,
    FwParams,
    Poisson,
    ResourceBudgetError,
    fenton_wilkinson,
    normal_sum_params,
    poisson_sum_pmf,
    poisson_sum_pmf_table,
    uniform_sum_convolution,
    uniform_sum_pmf,
)

# e^-4 * 4^4 / 4!, frozen from a 40-digit arbitrary-precision evaluation.
POIS_4_AT_4 = 0.19536681481316459


class TestPoissonSumPmf:
    def test_zero_forces_exponential(self):
        assert poisson_sum_pmf(4.0, 2, 0) == pytest.approx(math.exp(-8.0), rel=1e-12)

    def test_single_variable_at_four(self):
        assert poisson_sum_pmf(4.0, 1, 4) == pytest.approx(POIS_4_AT_4, abs=1e-12)

    def test_normalizes(self):
        total = math.fsum(poisson_sum_pmf(4.0, 3, a) for a in range(200))
        assert abs(total - 1.0) < 1e-10

    def test_sum_equals_single_with_scaled_rate(self):
        for a in range(0, 50):
            assert poisson_sum_pmf(4.0, 3, a) == poisson_sum_pmf(12.0, 1, a)

    def test_finite_at_large_support(self):
        p = poisson_sum_pmf(4.0, 1, 10**6)
        assert 0.0 <= p <= 1.0

    def test_domain_errors(self):
        with pytest.raises(DomainError):
            poisson_sum_pmf(0.0, 1, 0)
        with pytest.raises(DomainError):
            poisson_sum_pmf(4.0, 0, 0)


class TestPoissonSumTable:
    def test_small_rate_support_and_value(self):
        table = poisson_sum_pmf_table(4.0, 1, 1e-7)
        # Halting at the first sub-threshold point past the mode keeps
        # support 0..18 for rate 4 (Pr(X = 19) is already below 1e-7).
        assert len(table.probs) >= 19
        assert table.offset == 0
        assert table.probs[4] == pytest.approx(POIS_4_AT_4, abs=1e-12)

    def test_halt_only_past_mode(self):
        # Pr(X = 0) for rate 128 is far below the threshold, yet scanning
        # must continue through the mode.
        table = poisson_sum_pmf_table(128.0, 1, 1e-7)
        assert poisson_sum_pmf(128.0, 1, 0) < 1e-7
        assert len(table.probs) > 128

    @given(
        lam=st.floats(0.5, 64.0),
        n=st.integers(1, 6),
    )
    @settings(max_examples=30, deadline=None)
    def test_mass_accounting(self, lam, n):
        table = poisson_sum_pmf_table(lam, n, 1e-7)
        assert abs(table.total_mass() - 1.0) < 1e-6
        assert table.truncated_mass <= 10 * 1e-7 * len(table.probs)

    def test_threshold_range(self):
        with pytest.raises(DomainError):
            poisson_sum_pmf_table(4.0, 1, 0.5)


class TestUniformSumPmf:
    def test_two_fair_coins(self):
        assert uniform_sum_pmf(2, 2, 0) == pytest.approx(0.25, abs=1e-12)
        assert uniform_sum_pmf(2, 2, 1) == pytest.approx(0.5, abs=1e-12)
        assert uniform_sum_pmf(2, 2, 2) == pytest.approx(0.25, abs=1e-12)

    def test_single_uniform(self):
        assert uniform_sum_pmf(8, 1, 3) == pytest.approx(1.0 / 8.0, abs=1e-15)

    def test_out_of_support_is_zero(self):
        assert uniform_sum_pmf(8, 5, -1) == 0.0
        assert uniform_sum_pmf(8, 5, 36) == 0.0

    def test_against_convolution_oracle(self):
        conv = uniform_sum_convolution(8, 5)
        for x in range(36):
            assert uniform_sum_pmf(8, 5, x) == pytest.approx(
                conv.probs[x], abs=1e-9
            )

    @given(n_values=st.integers(2, 16), n=st.integers(1, 8))
    @settings(max_examples=40, deadline=None)
    def test_matches_convolution_everywhere(self, n_values, n):
        conv = uniform_sum_convolution(n_values, n)
        xs = range(n * (n_values - 1) + 1)
        assert all(
            abs(uniform_sum_pmf(n_values, n, x) - conv.probs[x]) < 1e-9 for x in xs
        )

    def test_no_overflow_for_moderate_counts(self):
        # Direct gamma evaluation overflows doubles around here.
        p = uniform_sum_pmf(32, 25, 25 * 31 // 2)
        assert 0.0 < p < 1.0

    def test_domain_error(self):
        with pytest.raises(DomainError):
            uniform_sum_pmf(1, 2, 0)


class TestUniformSumConvolution:
    def test_two_coins(self):
        conv = uniform_sum_convolution(2, 2)
        assert np.allclose(conv.probs, [0.25, 0.5, 0.25])

    def test_triangular(self):
        conv = uniform_sum_convolution(3, 2)
        assert np.allclose(conv.probs, np.array([1, 2, 3, 2, 1]) / 9.0)

    def test_support_length_and_mass(self):
        conv = uniform_sum_convolution(8, 5)
        assert conv.offset == 0
        assert len(conv.probs) == 5 * 7 + 1
        assert abs(math.fsum(conv.probs) - 1.0) < 1e-10

    def test_budget(self):
        with pytest.raises(ResourceBudgetError):
            uniform_sum_convolution(10**4, 10**4)


class TestFentonWilkinson:
    def test_identity_for_one_summand(self):
        fw = fenton_wilkinson(1.6702, 0.145542, 1)
        assert fw == FwParams(1.6702, 0.145542)

    def test_salary_parameters_five_summands(self):
        # Frozen from a 40-digit direct evaluation of the moment-matching
        # formulas; the Monte Carlo check below confirms them.
        fw = fenton_wilkinson(1.6702, 0.145542, 5)
        assert fw.mu_hat == pytest.approx(3.3369827149318408, abs=1e-12)
        assert fw.sigma2_hat == pytest.approx(0.030852395004519161, abs=1e-12)

    def test_monte_carlo_moment_match(self):
        rng = np.random.default_rng(7)
        samples = rng.lognormal(1.6702, math.sqrt(0.145542), size=(2 * 10**6, 5))
        sums = samples.sum(axis=1)
        mean, var = sums.mean(), sums.var()
        sigma2_mc = math.log(1.0 + var / mean**2)
        mu_mc = math.log(mean) - 0.5 * sigma2_mc
        fw = fenton_wilkinson(1.6702, 0.145542, 5)
        assert fw.mu_hat == pytest.approx(mu_mc, abs=2e-3)
        assert fw.sigma2_hat == pytest.approx(sigma2_mc, abs=2e-3)

    def test_variance_shrinks_with_count(self):
        values = [fenton_wilkinson(1.6702, 0.145542, n).sigma2_hat for n in (1, 5, 10)]
        assert values[0] > values[1] > values[2]

    def test_rejects_large_variance(self):
        with pytest.raises(DomainError):
            fenton_wilkinson(0.0, 4.5, 2)


class TestNormalSumParams:
    @pytest.mark.parametrize(
        "mu,sigma2,n,expected",
        [(0, 4, 1, (0, 4)), (0, 4, 6, (0, 24)), (2, 3, 5, (10, 15))],
    )
    def test_additivity(self, mu, sigma2, n, expected):
        assert normal_sum_params(mu, sigma2, n) == expected


def test_spec_validation():
    with pytest.raises(DomainError):
        Poisson(-1.0)
    with pytest.raises(DomainError):
        DiscreteUniform(1)
