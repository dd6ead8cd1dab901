"""Weight families, variances, growth profiles, densities, domains.

Expected values come from independent routes: hand-reduced closed forms,
math.fsum brute-force series, scipy quadrature of the density, and the
incomplete-gamma identity evaluated through scipy.
"""

import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy.integrate import quad
from scipy.special import gammaincc

from rafzeros.ensembles import (
    DomainError,
    EnsembleKind,
    IntervalSpec,
    domain_contains,
    expected_zero_rate,
    growth_profile,
    limit_density,
    local_frequency,
    log_variance,
    log_weight,
    log_weight_array,
    validate_interval,
)

ALL = list(EnsembleKind)
OPEN_DOMAIN = (EnsembleKind.SP, EnsembleKind.FAF)


def brute_log_weight(ensemble, n, k):
    """Factorial-level reference, fine for the small n used in tests."""
    if ensemble is EnsembleKind.SP:
        if k > n:
            return None
        return 0.5 * math.log(math.comb(n, k))
    if ensemble is EnsembleKind.FAF:
        return 0.5 * math.log(n**k / math.factorial(k))
    if ensemble is EnsembleKind.HAF:
        return 0.5 * math.log(math.comb(n + k - 1, k))
    if k > n:
        return None
    return 0.5 * math.log(n**k / math.factorial(k))


# ---------------------------------------------------------------------------
# weights
# ---------------------------------------------------------------------------


def test_log_weight_pinned_values():
    assert log_weight(EnsembleKind.SP, 2, 1) == pytest.approx(0.5 * math.log(2))
    assert log_weight(EnsembleKind.WP, 4, 2) == pytest.approx(0.5 * math.log(8))
    assert log_weight(EnsembleKind.SP, 3, 5) is None
    assert log_weight(EnsembleKind.WP, 3, 4) is None
    assert log_weight(EnsembleKind.FAF, 3, 0) == 0.0
    assert log_weight(EnsembleKind.HAF, 1, 7) == 0.0  # C(k, k) = 1
    assert log_weight(EnsembleKind.HAF, 3, 2) == pytest.approx(0.5 * math.log(6))


@pytest.mark.parametrize("ensemble", ALL)
def test_log_weight_matches_brute_force(ensemble):
    for n in (1, 2, 7, 23):
        for k in range(0, 30):
            want = brute_log_weight(ensemble, n, k)
            got = log_weight(ensemble, n, k)
            if want is None:
                assert got is None
            else:
                assert got == pytest.approx(want, rel=1e-13, abs=1e-13)


def test_log_weight_rejects_bad_arguments():
    with pytest.raises(DomainError):
        log_weight(EnsembleKind.SP, 0, 0)
    with pytest.raises(DomainError):
        log_weight(EnsembleKind.SP, -3, 1)
    with pytest.raises(DomainError):
        log_weight(EnsembleKind.SP, 2, -1)
    with pytest.raises(DomainError):
        log_weight(EnsembleKind.SP, True, 1)


@pytest.mark.parametrize("ensemble", ALL)
def test_log_weight_array_matches_scalar(ensemble):
    n = 17
    count = 18 if ensemble.finite_degree else 40
    arr = log_weight_array(ensemble, n, count)
    assert arr.shape == (count,)
    for k in range(count):
        assert arr[k] == pytest.approx(log_weight(ensemble, n, k), rel=1e-13, abs=1e-13)


def test_log_weight_array_rejects_overlong_polynomials():
    with pytest.raises(DomainError):
        log_weight_array(EnsembleKind.SP, 5, 7)
    with pytest.raises(DomainError):
        log_weight_array(EnsembleKind.WP, 5, 7)
    with pytest.raises(DomainError):
        log_weight_array(EnsembleKind.FAF, 5, 0)


# ---------------------------------------------------------------------------
# variances
# ---------------------------------------------------------------------------


def test_log_variance_closed_forms():
    assert log_variance(EnsembleKind.SP, 3, 1.0) == pytest.approx(math.log(8))
    assert log_variance(EnsembleKind.FAF, 5, 0.7) == pytest.approx(5 * 0.49)
    assert log_variance(EnsembleKind.HAF, 2, 0.5) == pytest.approx(-2 * math.log(0.75))


def test_log_variance_wp_partial_sum_pinned():
    # sum_{k<=6} 1.5^k / k! = 4.4775390625, by hand
    want = math.log(4.4775390625)
    assert want == pytest.approx(1.499073579091112, rel=1e-15)
    assert log_variance(EnsembleKind.WP, 6, 0.5) == pytest.approx(want, rel=1e-13)


@pytest.mark.parametrize("ensemble", ALL)
def test_log_variance_zero_point(ensemble):
    assert log_variance(ensemble, 9, 0.0) == 0.0


@pytest.mark.parametrize("n", [1, 4, 40, 300])
def test_log_variance_wp_matches_fsum_series(n):
    for t in (0.1, 0.45, 0.9, -0.6):
        logs = [k * math.log(n * t * t) - math.lgamma(k + 1) for k in range(n + 1)]
        anchor = max(logs)
        want = anchor + math.log(math.fsum(math.exp(v - anchor) for v in logs))
        assert log_variance(EnsembleKind.WP, n, t) == pytest.approx(want, rel=1e-12)


def test_log_variance_wp_incomplete_gamma_identity():
    # partial sum of e^{x} up to degree n equals e^{x} Q(n+1, x), via scipy
    rng = np.random.default_rng(2024)
    for _ in range(60):
        n = int(rng.integers(1, 101))
        t = float(rng.uniform(0.05, 0.99)) * (1 if rng.random() < 0.5 else -1)
        x = n * t * t
        want = x + math.log(float(gammaincc(n + 1, x)))
        got = log_variance(EnsembleKind.WP, n, t)
        # log difference is the relative error of the variance itself
        assert abs(got - want) <= 1e-10


def test_log_variance_haf_rejects_boundary():
    for bad in (1.0, -1.0, 1.5):
        with pytest.raises(DomainError):
            log_variance(EnsembleKind.HAF, 3, bad)


def test_log_variance_vectorized_shape_and_values():
    ts = np.array([[0.2, 0.4], [0.6, 0.8]])
    out = log_variance(EnsembleKind.SP, 5, ts)
    assert out.shape == ts.shape
    assert out[1, 1] == pytest.approx(5 * math.log(1.64))
    assert isinstance(log_variance(EnsembleKind.SP, 5, 0.3), float)


def test_log_variance_rejects_non_finite():
    with pytest.raises(DomainError):
        log_variance(EnsembleKind.SP, 3, math.nan)
    with pytest.raises(DomainError):
        log_variance(EnsembleKind.FAF, 3, math.inf)


@given(
    ensemble=st.sampled_from(ALL),
    n=st.integers(min_value=1, max_value=60),
    t=st.floats(min_value=-0.95, max_value=0.95),
)
def test_log_variance_even_in_t(ensemble, n, t):
    assert log_variance(ensemble, n, t) == log_variance(ensemble, n, -t)


# ---------------------------------------------------------------------------
# growth profile and local frequency
# ---------------------------------------------------------------------------


def test_growth_profile_pinned_values():
    sp = growth_profile(EnsembleKind.SP, 1.0)
    assert (sp.value, sp.d1, sp.d2) == pytest.approx((math.log(2), 1.0, 0.0))
    faf = growth_profile(EnsembleKind.FAF, 0.3)
    assert (faf.value, faf.d1, faf.d2) == pytest.approx((0.09, 0.6, 2.0))
    haf = growth_profile(EnsembleKind.HAF, 0.5)
    assert (haf.value, haf.d1, haf.d2) == pytest.approx(
        (math.log(4.0 / 3.0), 4.0 / 3.0, 40.0 / 9.0)
    )
    wp = growth_profile(EnsembleKind.WP, -0.4)
    assert (wp.value, wp.d1, wp.d2) == pytest.approx((0.16, -0.8, 2.0))


@pytest.mark.parametrize("ensemble", ALL)
def test_growth_profile_derivatives_match_finite_differences(ensemble):
    h = 1e-6
    for t in (0.15, 0.45, 0.8, -0.3):
        p = growth_profile(ensemble, t)
        pp = growth_profile(ensemble, t + h)
        pm = growth_profile(ensemble, t - h)
        assert p.d1 == pytest.approx((pp.value - pm.value) / (2 * h), abs=5e-9)
        assert p.d2 == pytest.approx((pp.d1 - pm.d1) / (2 * h), abs=5e-8)


def test_growth_profile_domain():
    with pytest.raises(DomainError):
        growth_profile(EnsembleKind.HAF, 1.0)
    with pytest.raises(DomainError):
        growth_profile(EnsembleKind.WP, -1.2)
    growth_profile(EnsembleKind.SP, 40.0)  # unrestricted


def test_local_frequency_pinned_values():
    assert local_frequency(EnsembleKind.SP, 1.0) == pytest.approx(0.25)
    assert local_frequency(EnsembleKind.FAF, 17.0) == 1.0
    assert local_frequency(EnsembleKind.WP, 0.3) == 1.0
    assert local_frequency(EnsembleKind.HAF, 0.5) == pytest.approx(16.0 / 9.0)


def test_local_frequency_composition_identity():
    # closed form versus (p'/t + p'')/4 assembled from the profile
    rng = np.random.default_rng(99)
    for ensemble in ALL:
        for _ in range(250):
            t = float(rng.uniform(0.01, 0.99))
            if ensemble in OPEN_DOMAIN and rng.random() < 0.5:
                t *= float(rng.uniform(1.0, 30.0))
            if rng.random() < 0.5:
                t = -t
            p = growth_profile(ensemble, t)
            composed = 0.25 * (p.d1 / t + p.d2)
            direct = local_frequency(ensemble, t)
            assert abs(composed - direct) <= 1e-12 * abs(direct)


def test_local_frequency_rejects_origin_and_edge():
    with pytest.raises(DomainError):
        local_frequency(EnsembleKind.SP, 0.0)
    with pytest.raises(DomainError):
        local_frequency(EnsembleKind.HAF, 1.0)
    with pytest.raises(DomainError):
        local_frequency(EnsembleKind.WP, np.array([0.5, 0.0]))


def test_limit_density_values():
    assert limit_density(EnsembleKind.SP, 1.0) == pytest.approx(1.0 / (2 * math.pi))
    assert limit_density(EnsembleKind.FAF, 0.4) == pytest.approx(1.0 / math.pi)
    out = limit_density(EnsembleKind.HAF, np.array([0.5, 0.6]))
    assert out[0] == pytest.approx((4.0 / 3.0) / math.pi)


# ---------------------------------------------------------------------------
# intervals, domains, rates
# ---------------------------------------------------------------------------


def test_interval_spec_validation():
    spec = IntervalSpec(0.25, 1.5)
    assert spec.length == 1.25
    with pytest.raises(DomainError):
        IntervalSpec(1.0, 1.0)
    with pytest.raises(DomainError):
        IntervalSpec(2.0, 1.0)
    with pytest.raises(DomainError):
        IntervalSpec(0.0, math.inf)
    with pytest.raises(DomainError):
        IntervalSpec(math.nan, 1.0)


def test_domain_contains_cases():
    assert domain_contains(EnsembleKind.SP, IntervalSpec(-2.0, -1.0))
    assert domain_contains(EnsembleKind.HAF, IntervalSpec(0.2, 0.8))
    assert not domain_contains(EnsembleKind.WP, IntervalSpec(0.5, 1.5))
    assert not domain_contains(EnsembleKind.SP, IntervalSpec(-0.5, 0.5))
    assert not domain_contains(EnsembleKind.FAF, IntervalSpec(0.0, 1.0))
    assert not domain_contains(EnsembleKind.HAF, IntervalSpec(-1.0, -0.5))
    assert domain_contains(EnsembleKind.FAF, IntervalSpec(0.5, 40.0))


@given(
    ensemble=st.sampled_from(ALL),
    a=st.floats(min_value=-3.0, max_value=3.0),
    length=st.floats(min_value=1e-3, max_value=2.0),
)
def test_validate_interval_agrees_with_domain_contains(ensemble, a, length):
    interval = IntervalSpec(a, a + length)
    if domain_contains(ensemble, interval):
        validate_interval(ensemble, interval)
    else:
        with pytest.raises(DomainError):
            validate_interval(ensemble, interval)


def test_expected_zero_rate_pinned_values():
    assert expected_zero_rate(
        EnsembleKind.SP, IntervalSpec(0.5, 1.5)
    ) == pytest.approx(0.16524934053856793, rel=1e-15)
    assert expected_zero_rate(
        EnsembleKind.FAF, IntervalSpec(0.2, 1.2)
    ) == pytest.approx(1.0 / math.pi, rel=1e-15)
    assert expected_zero_rate(
        EnsembleKind.HAF, IntervalSpec(0.2, 0.8)
    ) == pytest.approx(0.28516737635935574, rel=1e-15)
    assert expected_zero_rate(
        EnsembleKind.WP, IntervalSpec(0.2, 0.8)
    ) == pytest.approx(0.19098593171027442, rel=1e-15)
    # symmetry: mirrored interval has the same rate
    assert expected_zero_rate(
        EnsembleKind.SP, IntervalSpec(-1.5, -0.5)
    ) == pytest.approx(0.16524934053856793, rel=1e-14)


def test_expected_zero_rate_matches_quadrature():
    rng = np.random.default_rng(314)
    for ensemble in ALL:
        hi = 0.95 if math.isfinite(ensemble.domain_radius) else 4.0
        for _ in range(25):
            a = float(rng.uniform(0.02, hi - 0.05))
            b = float(rng.uniform(a + 0.01, hi))
            interval = IntervalSpec(a, b)
            want, err = quad(
                lambda t: limit_density(ensemble, t), a, b, epsabs=1e-13, epsrel=1e-13
            )
            assert err < 1e-10
            assert abs(expected_zero_rate(ensemble, interval) - want) <= 1e-9


def test_expected_zero_rate_rejects_bad_intervals():
    with pytest.raises(DomainError):
        expected_zero_rate(EnsembleKind.SP, IntervalSpec(-0.5, 0.5))
    with pytest.raises(DomainError):
        expected_zero_rate(EnsembleKind.HAF, IntervalSpec(0.5, 1.2))
