import math

import mpmath
import numpy as np
import pytest
from scipy import stats

from qiopt.errors import InputError
from qiopt.relaxation import (RelaxationParams, binarize, inverse_cdf_sample, reparam_grad,
                              reparam_sample, spike_exp_cdf)

mpmath.mp.dps = 40


def _mp_sample(q, rho, beta):
    """Upper-branch sample evaluated in 40-digit arithmetic."""
    q, rho, beta = mpmath.mpf(q), mpmath.mpf(rho), mpmath.mpf(beta)
    return mpmath.log(1 + (q + rho - 1) / q * (mpmath.e ** beta - 1)) / beta


class TestParams:
    @pytest.mark.parametrize("beta", [0.0, -1.0, math.inf, math.nan])
    def test_rejects(self, beta):
        with pytest.raises(InputError):
            RelaxationParams(beta)


class TestCdf:
    def test_half_at_unit_beta(self):
        # (e^0.5 - 1)/(e - 1) = 1/(1 + e^0.5)
        assert spike_exp_cdf(0.5, 1, RelaxationParams(1.0)) == pytest.approx(0.377541, abs=1e-6)
        assert spike_exp_cdf(0.5, 1, RelaxationParams(1.0)) == pytest.approx(
            float(1 / (1 + mpmath.e ** 0.5)), rel=1e-14)

    def test_inverse_half_at_unit_beta(self):
        assert inverse_cdf_sample(0.5, 1, RelaxationParams(1.0)) == pytest.approx(0.620115, abs=1e-6)

    def test_endpoints(self):
        assert spike_exp_cdf(0.0, 1) == 0.0 and spike_exp_cdf(1.0, 1) == 1.0
        assert inverse_cdf_sample(0.0, 1) == 0.0 and inverse_cdf_sample(1.0, 1) == pytest.approx(1.0)

    def test_spike(self):
        assert spike_exp_cdf(0.3, 0) == 1.0
        assert inverse_cdf_sample(0.7, 0) == 0.0

    @pytest.mark.parametrize("bad", [-0.1, 1.1, math.nan])
    def test_domain(self, bad):
        with pytest.raises(InputError):
            spike_exp_cdf(bad, 1)

    def test_rejects_non_binary_z(self):
        with pytest.raises(InputError):
            inverse_cdf_sample(0.5, 2)

    @pytest.mark.parametrize("beta", [0.5, 1.0, 4.0, 8.0])
    def test_round_trip(self, beta):
        prm = RelaxationParams(beta)
        u = np.linspace(0.0, 1.0, 10_001)[1:-1]
        back = spike_exp_cdf(inverse_cdf_sample(u, 1, prm), 1, prm)
        assert np.max(np.abs(back - u)) <= 1e-12

    @pytest.mark.parametrize("beta", [0.5, 8.0, 50.0])
    def test_strictly_increasing(self, beta):
        prm = RelaxationParams(beta)
        g = np.linspace(0, 1, 2001)
        assert np.all(np.diff(spike_exp_cdf(g, 1, prm)) > 0)
        assert np.all(np.diff(inverse_cdf_sample(g, 1, prm)) > 0)

    def test_ks(self):
        prm = RelaxationParams(8.0)
        u = np.random.default_rng(2024).random(100_000)
        res = stats.kstest(inverse_cdf_sample(u, 1, prm), lambda x: spike_exp_cdf(
            np.clip(x, 0, 1), 1, prm))
        assert res.pvalue > 0.01


class TestBinarize:
    def test_inclusive_threshold(self):
        assert binarize(0.25, 0.75) == 1
        assert binarize(0.25, 0.74) == 0

    def test_marginal(self):
        rho = np.random.default_rng(5).random(100_000)
        for q in (0.1, 0.5, 0.93):
            freq = binarize(np.full_like(rho, q), rho).mean()
            assert abs(freq - q) <= 3 * math.sqrt(q * (1 - q) / rho.size)


class TestReparam:
    def test_q_one_matches_inverse_cdf(self):
        rho = np.linspace(0, 1, 1001)
        np.testing.assert_allclose(reparam_sample(np.ones_like(rho), rho),
                                   inverse_cdf_sample(rho, 1), atol=1e-12, rtol=0)

    def test_zero_branch(self):
        assert reparam_sample(0.2, 0.5) == 0.0
        assert reparam_sample(0.0, 1.0) == 0.0

    def test_matches_high_precision(self):
        rng = np.random.default_rng(1)
        for _ in range(50):
            q, rho = rng.uniform(0.05, 1), rng.uniform(0, 1)
            if q > 1 - rho:
                assert reparam_sample(q, rho) == pytest.approx(float(_mp_sample(q, rho, 8)), rel=1e-12)

    def test_continuity_at_branch(self):
        for rho in (0.2, 0.5, 0.9):
            q0 = 1.0 - rho
            lo, hi = reparam_sample(q0 - 1e-9, rho), reparam_sample(q0 + 1e-9, rho)
            # the upper limit vanishes at the rate of the branch slope
            slope = math.expm1(8.0) / (8.0 * q0)
            assert lo == 0.0 and 0.0 < hi <= 1.01 * slope * 1e-9

    def test_grad_matches_finite_differences(self):
        rng = np.random.default_rng(3)
        checked = 0
        while checked < 1000:
            q, rho = rng.uniform(0.05, 1.0), rng.uniform(0.0, 1.0)
            if q - 1e-4 <= 1 - rho or q + 1e-4 > 1:
                continue
            fd = float(mpmath.diff(lambda x: _mp_sample(x, rho, 8), q))
            assert reparam_grad(q, rho) == pytest.approx(fd, rel=1e-6)
            checked += 1

    def test_grad_vectorised(self):
        q = np.array([0.5, 0.9])
        rho = np.array([0.8, 0.3])
        g = reparam_grad(q, rho)
        assert g.shape == (2,) and g[0] == reparam_grad(0.5, 0.8)

    def test_grad_outside_smooth_branch(self):
        with pytest.raises(InputError):
            reparam_grad(0.2, 0.5)
