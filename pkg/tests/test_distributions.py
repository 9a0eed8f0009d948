"""Gumbel and positive stable primitives against independent oracles.

Frozen constants below were produced by the stated closed forms (gamma
ratios, the Levy density at lambda = 1/2) evaluated separately; scipy
distributions serve as the reference side of the KS checks.
"""

import math

import numpy as np
import pytest
from numpy.testing import assert_allclose
from scipy import stats

from nestlogit import (
    ConvergenceError,
    DomainError,
    EULER_GAMMA,
    PrecisionLossWarning,
    SeededStream,
    eta_mgf,
    eta_moments,
    gumbel_inverse_cdf,
    gumbel_mgf,
    gumbel_sample,
    stable_density_half,
    stable_density_series,
    stable_log_sample,
    stable_moment,
    stable_product_check,
    stable_sample,
    stable_survival_series,
)

KS_1PCT = 1.63  # asymptotic 1% critical coefficient, D_crit = 1.63/sqrt(n)


# ---------------------------------------------------------------------------
# Gumbel
# ---------------------------------------------------------------------------

def test_gumbel_inverse_cdf_round_trip():
    for u in (1e-12, 0.01, 1.0 / math.e, 0.5, 0.99, 1.0 - 1e-12):
        x = gumbel_inverse_cdf(u)
        assert_allclose(math.exp(-math.exp(-x)), u, rtol=1e-9)
    # location/scale move the quantile affinely
    assert_allclose(gumbel_inverse_cdf(0.5, mu=2.0, beta=3.0), 2.0 + 3.0 * gumbel_inverse_cdf(0.5))
    assert gumbel_inverse_cdf(1.0 / math.e) == pytest.approx(0.0, abs=1e-15)


def test_gumbel_inverse_cdf_domain():
    with pytest.raises(DomainError):
        gumbel_inverse_cdf(0.0)
    with pytest.raises(DomainError):
        gumbel_inverse_cdf(1.0)
    with pytest.raises(DomainError):
        gumbel_inverse_cdf(0.5, beta=0.0)


def test_gumbel_sample_matches_scipy():
    draws = gumbel_sample(SeededStream(1), size=20_000)
    d, _ = stats.kstest(draws, stats.gumbel_r.cdf)
    assert d < KS_1PCT / math.sqrt(20_000)
    draws = gumbel_sample(SeededStream(2), mu=1.5, beta=0.5, size=20_000)
    d, _ = stats.kstest(draws, stats.gumbel_r(loc=1.5, scale=0.5).cdf)
    assert d < KS_1PCT / math.sqrt(20_000)


def test_gumbel_sample_scalar():
    value = gumbel_sample(SeededStream(3))
    assert isinstance(value, float)


def test_gumbel_mgf():
    # Gamma(1/2) = sqrt(pi)
    assert_allclose(gumbel_mgf(0.5), 1.7724538509055159, rtol=1e-15)
    assert_allclose(gumbel_mgf(0.0), 1.0)
    with pytest.raises(DomainError):
        gumbel_mgf(1.0)


# ---------------------------------------------------------------------------
# Stable sampling
# ---------------------------------------------------------------------------

def test_stable_sample_levy_half():
    # P(1/2) is Levy with scale 1/2 (Z = 1/(2 N^2) for N standard normal)
    draws = stable_sample(SeededStream(4), 0.5, size=50_000)
    d, _ = stats.kstest(draws, stats.levy(scale=0.5).cdf)
    assert d < KS_1PCT / math.sqrt(50_000)


def test_stable_sample_degenerate_at_one():
    draws = stable_sample(SeededStream(5), 1.0, size=100)
    assert np.all(draws == 1.0)
    assert np.all(stable_log_sample(SeededStream(5), 1.0, size=100) == 0.0)
    assert stable_sample(SeededStream(5), 1.0) == 1.0


def test_stable_sample_scalar():
    value = stable_sample(SeededStream(6), 0.3)
    assert isinstance(value, float)
    assert value > 0.0


@pytest.mark.parametrize("lam,t", [(0.3, 0.5), (0.5, 1.0), (0.7, 2.0)])
def test_laplace_transform(lam, t):
    draws = stable_sample(SeededStream(7).child(int(10 * lam)), lam, size=200_000)
    values = np.exp(-t * draws)
    se = values.std(ddof=1) / math.sqrt(len(values))
    assert abs(values.mean() - math.exp(-(t**lam))) < 4.0 * se


def test_theorem_gumbel_plus_log_stable():
    # eps + log Z ~ G(0, 1/lambda): KS against exp(-exp(-lambda x))
    lam = 0.5
    stream = SeededStream(8)
    draws = gumbel_sample(stream, size=100_000) + stable_log_sample(stream, lam, size=100_000)
    d, _ = stats.kstest(draws, lambda x: np.exp(-np.exp(-lam * x)))
    assert d < KS_1PCT / math.sqrt(100_000)


def test_plus_stability():
    # (a1 Z1 + a2 Z2 + a3 Z3) / (sum a_i^lam)^(1/lam) ~ P(lam)
    lam = 0.5
    alphas = (1.0, 2.0, 3.0)
    stream = SeededStream(9)
    parts = [a * stable_sample(stream, lam, size=200_000) for a in alphas]
    scale = sum(a**lam for a in alphas) ** (1.0 / lam)
    w = sum(parts) / scale
    for t in (0.5, 1.0, 2.0):
        values = np.exp(-t * w)
        se = values.std(ddof=1) / math.sqrt(len(values))
        assert abs(values.mean() - math.exp(-(t**lam))) < 4.0 * se


@pytest.mark.parametrize("lam", [0.5, 0.1])
def test_max_stability_of_eta(lam):
    # lam*log(sum_j exp((u_j + eta_j)/lam)) ~ log(sum_j exp(u_j)) + eta
    u = np.array([0.0, 1.0])
    n = 100_000
    stream = SeededStream(10)
    eta = lam * np.stack(
        [stable_log_sample(stream, lam, size=n) for _ in u], axis=1
    )
    lhs = lam * np.log(np.exp((u + eta) / lam).sum(axis=1))
    rhs = math.log(np.exp(u).sum()) + lam * stable_log_sample(stream, lam, size=n)
    d, _ = stats.ks_2samp(lhs, rhs)
    assert d < KS_1PCT * math.sqrt(2.0 / n)


def test_product_law():
    est = stable_product_check(SeededStream(11), 0.5, 0.6, 50_000)
    assert abs(est.value - math.exp(-1.0)) < 4.0 * est.std_error


# ---------------------------------------------------------------------------
# Moments and the eta link variable
# ---------------------------------------------------------------------------

def test_stable_moment_frozen():
    # Gamma(1/2)/Gamma(3/4) and Gamma(3/4)/Gamma(7/8)
    assert_allclose(stable_moment(0.5, 0.25), 1.4464090846320785, rtol=1e-14)
    assert_allclose(stable_moment(0.5, 0.125), 1.1245941828303596, rtol=1e-14)


def test_stable_moment_domain():
    for lam, kappa in [(0.5, 0.5), (0.5, 0.6), (0.5, 0.0), (0.5, -0.1)]:
        with pytest.raises(DomainError):
            stable_moment(lam, kappa)
    with pytest.raises(DomainError):
        stable_moment(1.2, 0.1)


def test_stable_moment_monte_carlo():
    draws = stable_sample(SeededStream(12), 0.5, size=200_000)
    values = draws**0.125
    se = values.std(ddof=1) / math.sqrt(len(values))
    assert abs(values.mean() - stable_moment(0.5, 0.125)) < 4.0 * se


def test_eta_moments_frozen():
    mean, var = eta_moments(0.5)
    assert_allclose(mean, 0.5 * EULER_GAMMA, rtol=1e-15)
    assert_allclose(var, 0.75 * math.pi**2 / 6.0, rtol=1e-15)
    mean, var = eta_moments(0.9)
    assert_allclose(mean, 0.057721566490153274, rtol=1e-12)
    assert_allclose(var, 0.3125374727011629, rtol=1e-12)
    assert eta_moments(1.0) == (0.0, 0.0)


@pytest.mark.parametrize("lam", [0.3, 0.5, 0.7])
def test_eta_moments_monte_carlo(lam):
    # 1% relative agreement of empirical mean/variance at 10^6 draws
    eta = lam * stable_log_sample(SeededStream(13).child(int(10 * lam)), lam, size=1_000_000)
    mean, var = eta_moments(lam)
    assert abs(eta.mean() - mean) / mean < 0.01
    assert abs(eta.var(ddof=1) - var) / var < 0.01


def test_eta_mgf():
    # identity with the fractional moment: E[exp(t*eta)] = E[Z^(lam*t)]
    assert_allclose(eta_mgf(0.5, 0.5), stable_moment(0.5, 0.25), rtol=1e-14)
    assert_allclose(eta_mgf(1.0, 0.5), 1.0)
    with pytest.raises(DomainError):
        eta_mgf(0.5, 1.0)
    eta = 0.5 * stable_log_sample(SeededStream(14), 0.5, size=200_000)
    values = np.exp(0.5 * eta)
    se = values.std(ddof=1) / math.sqrt(len(values))
    assert abs(values.mean() - eta_mgf(0.5, 0.5)) < 4.0 * se


# ---------------------------------------------------------------------------
# Density and survival series
# ---------------------------------------------------------------------------

# closed form x^(-3/2) exp(-1/(4x)) / (2 sqrt(pi))
HALF_DENSITY = {
    0.25: 0.8302149948411894,
    0.5: 0.48394144903828673,
    1.0: 0.2196956447338612,
    2.0: 0.08801633169107488,
    4.0: 0.03312544154300357,
    8.0: 0.012083378650089039,
}


@pytest.mark.parametrize("x,expected", sorted(HALF_DENSITY.items()))
def test_density_half_closed_form(x, expected):
    assert_allclose(stable_density_half(x), expected, rtol=1e-14)


@pytest.mark.parametrize("x", [0.5, 1.0, 2.0, 4.0, 8.0])
def test_density_series_vs_closed_form(x):
    series = stable_density_series(0.5, x, tol=1e-12)
    closed = stable_density_half(x)
    assert abs(series - closed) / closed < 1e-8


def test_density_series_other_lambda():
    # sanity at lambda = 0.7: positive, finite, decays in the far tail
    f1 = stable_density_series(0.7, 1.0)
    f8 = stable_density_series(0.7, 8.0)
    assert f1 > f8 > 0.0


def test_survival_series_vs_levy():
    for x in (0.5, 1.0, 4.0, 20.0):
        s = stable_survival_series(0.5, x)
        assert_allclose(s, stats.levy(scale=0.5).sf(x), rtol=1e-10)


def test_series_precision_loss_warning():
    with pytest.warns(PrecisionLossWarning):
        stable_density_series(0.5, 0.004)


def test_series_convergence_error():
    with pytest.raises(ConvergenceError):
        stable_density_series(0.9, 1e-4)


def test_series_domain():
    with pytest.raises(DomainError):
        stable_density_series(1.0, 1.0)  # no density at the point mass
    with pytest.raises(DomainError):
        stable_density_series(0.5, 0.0)
    with pytest.raises(DomainError):
        stable_density_series(0.5, 1.0, tol=0.0)
    with pytest.raises(DomainError):
        stable_survival_series(0.5, -1.0)


@pytest.mark.parametrize("lam", [0.0, -0.2, 1.0001, float("nan")])
def test_sampler_lambda_domain(lam):
    with pytest.raises(DomainError):
        stable_sample(SeededStream(0), lam, size=2)
