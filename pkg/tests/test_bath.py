"""Occupation statistics: closed forms against independent routes."""

import math

import numpy as np
import pytest

from ottobath.bath import (
    U_MAX,
    BathSpec,
    band_average_occupation_oracle,
    dimensionless_gap,
    doppler_log_factor,
    moving_occupation,
    occupation_asymptote,
    planck_occupation,
)

# Values frozen from independent evaluation routes.
PLANCK_AT_1 = 0.5819767068693262  # 1/(e - 1)
D_AT_HALF = 0.951426150896346  # sqrt(3)/2 * ln 3
D_AT_0999 = 0.17007774765760486
N_AT_1_HALF = 0.5451001391331534  # band-average quadrature at (x=1, u=0.5)


def test_planck_matches_direct_expression():
    assert planck_occupation(1.0) == pytest.approx(PLANCK_AT_1, abs=1e-14)
    xs = [0.01, 0.1, 1.0, 2.0, 10.0, 30.0]
    for x in xs:
        assert planck_occupation(x) == pytest.approx(
            1.0 / (math.exp(x) - 1.0), rel=1e-12
        )


def test_planck_two_level_identity():
    # 1/(2n+1) = tanh(x/2), an algebraic identity of the Planck form.
    for x in np.logspace(-6, 1.4, 40):
        n = planck_occupation(float(x))
        assert 1.0 / (2.0 * n + 1.0) == pytest.approx(math.tanh(x / 2.0), rel=1e-12)


def test_planck_series_branch_continuous():
    assert planck_occupation(0.999e-8) > planck_occupation(1.001e-8)
    # Both formula routes agree near the branch switch at 1e-8.
    for x in (5e-9, 1e-8, 2e-8):
        series = 1.0 / x - 0.5 + x / 12.0
        direct = 1.0 / math.expm1(x)
        assert planck_occupation(x) == pytest.approx(series, rel=1e-12)
        assert planck_occupation(x) == pytest.approx(direct, rel=1e-12)
    # Leading behavior n ~ 1/x - 1/2 deep in the series branch.
    x = 1e-10
    assert planck_occupation(x) * x == pytest.approx(1.0 - 0.5 * x + x * x / 12.0, rel=1e-15)


def test_planck_rejects_bad_gap():
    for bad in (0.0, -1.0, math.inf, math.nan):
        with pytest.raises(ValueError):
            planck_occupation(bad)


def test_doppler_factor_anchors():
    assert doppler_log_factor(0.0) == 1.0
    assert doppler_log_factor(0.5) == pytest.approx(D_AT_HALF, abs=1e-15)
    assert doppler_log_factor(0.999) == pytest.approx(D_AT_0999, abs=1e-15)


def test_doppler_factor_rapidity_identity():
    # D(u) = theta/sinh(theta) with theta = artanh(u).
    for u in (0.01, 0.2, 0.5, 0.8, 0.99):
        theta = math.atanh(u)
        assert doppler_log_factor(u) == pytest.approx(theta / math.sinh(theta), rel=1e-13)


def test_doppler_factor_monotone_decreasing():
    us = np.linspace(0.0, 0.999, 200)
    ds = [doppler_log_factor(float(u)) for u in us]
    assert all(a > b for a, b in zip(ds, ds[1:]))
    assert ds[0] == 1.0
    assert ds[-1] < 0.2


def test_doppler_series_branch_continuous():
    # Both formula routes agree near the branch switch at 1e-4.
    for u in (5e-5, 1e-4, 2e-4):
        theta = math.atanh(u)
        direct = theta / math.sinh(theta)
        series = 1.0 - u * u / 6.0 - 11.0 * u**4 / 120.0
        assert doppler_log_factor(u) == pytest.approx(direct, rel=1e-13)
        assert doppler_log_factor(u) == pytest.approx(series, rel=1e-13)


def test_velocity_domain():
    for bad in (-0.1, 0.9991, 1.0, 2.0):
        with pytest.raises(ValueError):
            doppler_log_factor(bad)
    assert doppler_log_factor(U_MAX) > 0.0


def test_moving_occupation_rest_limit_is_planck():
    for x in (0.01, 0.3, 1.0, 7.0):
        assert moving_occupation(x, 0.0) == planck_occupation(x)


def test_moving_occupation_against_band_oracle():
    assert moving_occupation(1.0, 0.5) == pytest.approx(N_AT_1_HALF, abs=1e-12)
    for x, u in [(0.01, 0.3), (0.5, 0.9), (3.0, 0.1), (30.0, 0.999), (1e-3, 0.99)]:
        oracle = band_average_occupation_oracle(x, u)
        assert moving_occupation(x, u) == pytest.approx(oracle, abs=1e-10)


def test_moving_occupation_small_velocity_branch_continuous():
    for x in (0.05, 1.0, 10.0):
        below = moving_occupation(x, 0.999e-4)
        above = moving_occupation(x, 1.001e-4)
        assert below == pytest.approx(above, rel=1e-9)


def test_band_oracle_degenerate_band():
    assert band_average_occupation_oracle(2.0, 0.0) == planck_occupation(2.0)


def test_band_oracle_rejects_bad_tolerance():
    with pytest.raises(ValueError):
        band_average_occupation_oracle(1.0, 0.5, tol=0.0)


def test_high_temperature_asymptote():
    u = 0.5
    for x in (1e-4, 1e-3):
        exact = moving_occupation(x, u)
        approx = occupation_asymptote(x, u, "high_T")
        assert approx == pytest.approx(doppler_log_factor(u) / x, rel=1e-15)
        assert exact == pytest.approx(approx, rel=2.0 * x)


def test_low_temperature_asymptote():
    u = 0.5
    for x in (25.0, 30.0):
        exact = moving_occupation(x, u)
        approx = occupation_asymptote(x, u, "low_T")
        assert exact == pytest.approx(approx, rel=1e-6)


def test_low_temperature_asymptote_needs_motion():
    with pytest.raises(ValueError):
        occupation_asymptote(5.0, 0.0, "low_T")


def test_asymptote_rejects_unknown_regime():
    with pytest.raises(ValueError):
        occupation_asymptote(1.0, 0.5, "warm")


def test_dimensionless_gap_validation():
    assert dimensionless_gap(2.0, 3.0) == 6.0
    with pytest.raises(ValueError):
        dimensionless_gap(-1.0, 1.0)
    with pytest.raises(ValueError):
        dimensionless_gap(1.0, 0.0)


def test_bath_spec():
    bath = BathSpec(beta=2.0, u=0.5)
    assert bath.rapidity == pytest.approx(math.atanh(0.5), rel=1e-15)
    assert bath.gap(3.0) == 6.0
    assert bath.occupation(0.5) == moving_occupation(1.0, 0.5)
    with pytest.raises(ValueError):
        BathSpec(beta=0.0)
    with pytest.raises(ValueError):
        BathSpec(beta=1.0, u=1.0)


def test_rest_bath_spec_is_planck():
    bath = BathSpec(beta=1.5)
    assert bath.u == 0.0
    assert bath.occupation(2.0) == planck_occupation(3.0)
