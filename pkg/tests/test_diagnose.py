import numpy as np
import pytest
import scipy.stats
from hypothesis import given, settings
from hypothesis import strategies as st
from statsmodels.stats.diagnostic import acorr_ljungbox

from sarfima import (
    DataError,
    box_pierce,
    jarque_bera,
    jarque_bera_stat,
    ljung_box,
    moments_summary,
    residual_diagnostics,
)


# ---------------------------------------------------------------------------
# moments


def test_moments_two_point_sample():
    # equal mass at -1 and 1: no skew, flattest possible tails
    x = np.tile([1.0, -1.0], 20)
    m = moments_summary(x)
    assert m.mean == 0.0
    assert m.skewness == pytest.approx(0.0, abs=1e-14)
    assert m.excess_kurtosis == pytest.approx(-2.0, abs=1e-12)


def test_moments_match_scipy():
    rng = np.random.default_rng(4)
    x = rng.gamma(2.0, size=400)
    m = moments_summary(x)
    assert m.skewness == pytest.approx(scipy.stats.skew(x), rel=1e-12)
    assert m.excess_kurtosis == pytest.approx(scipy.stats.kurtosis(x), rel=1e-12)
    assert m.variance == pytest.approx(np.var(x), rel=1e-12)


def test_moments_outlier_direction():
    x = np.r_[np.zeros(50), 30.0]
    m = moments_summary(x)
    assert m.skewness > 1.0
    assert m.excess_kurtosis > 10.0


@given(shift=st.floats(-50, 50), scale=st.floats(0.01, 100))
@settings(max_examples=40, deadline=None)
def test_moments_shape_is_affine_invariant(shift, scale):
    x = np.array([0.4, -1.2, 2.2, 0.1, -0.7, 1.5, -2.3, 0.9])
    a = moments_summary(x)
    b = moments_summary(scale * x + shift)
    assert b.skewness == pytest.approx(a.skewness, abs=1e-7)
    assert b.excess_kurtosis == pytest.approx(a.excess_kurtosis, abs=1e-7)


def test_moments_degenerate_inputs():
    with pytest.raises(DataError):
        moments_summary(np.ones(10))  # zero variance
    with pytest.raises(DataError):
        moments_summary(np.array([1.0, 2.0, 3.0]))  # too short for kurtosis


# ---------------------------------------------------------------------------
# normality


def test_jarque_bera_matches_scipy():
    rng = np.random.default_rng(7)
    x = rng.standard_normal(500) ** 3
    mine = jarque_bera(x)
    ref = scipy.stats.jarque_bera(x)
    assert mine.statistic == pytest.approx(ref.statistic, rel=1e-12)
    assert mine.p_value == pytest.approx(ref.pvalue, rel=1e-10, abs=1e-300)


def test_jarque_bera_symmetric_flat_sample():
    x = np.array([1.0, -1.0, 0.0, 0.0, 0.0, 0.0])
    # skew 0 by symmetry; kurtosis works out to exactly 3
    t = jarque_bera(x)
    assert t.statistic == pytest.approx(0.0, abs=1e-14)
    assert t.p_value == pytest.approx(1.0)


def test_jarque_bera_stat_plugin():
    got = jarque_bera_stat(0.4277, 0.8718, 1603)
    want = 1603 * (0.4277**2 / 6 + 0.8718**2 / 24)
    assert got == pytest.approx(want, rel=1e-12)
    assert got == pytest.approx(99.6, abs=0.1)


# ---------------------------------------------------------------------------
# portmanteau tests


def test_ljung_box_and_box_pierce_match_statsmodels():
    rng = np.random.default_rng(11)
    x = rng.standard_normal(300) + 0.3 * np.sin(np.arange(300) / 5.0)
    ref = acorr_ljungbox(x, lags=[10], boxpierce=True)
    lb = ljung_box(x, 10)
    bp = box_pierce(x, 10)
    assert lb.statistic == pytest.approx(float(ref["lb_stat"].iloc[0]), rel=1e-10)
    assert lb.p_value == pytest.approx(float(ref["lb_pvalue"].iloc[0]), rel=1e-8, abs=1e-300)
    assert bp.statistic == pytest.approx(float(ref["bp_stat"].iloc[0]), rel=1e-10)
    assert bp.p_value == pytest.approx(float(ref["bp_pvalue"].iloc[0]), rel=1e-8, abs=1e-300)


@given(seed=st.integers(0, 10_000), lags=st.integers(1, 15))
@settings(max_examples=40, deadline=None)
def test_ljung_box_dominates_box_pierce(seed, lags):
    """The (n+2)/(n-k) weights exceed 1, so LB >= BP on any series."""
    x = np.random.default_rng(seed).standard_normal(80)
    assert ljung_box(x, lags).statistic >= box_pierce(x, lags).statistic - 1e-12


def test_portmanteau_df_reduction():
    rng = np.random.default_rng(2)
    x = rng.standard_normal(200)
    full = ljung_box(x, 10)
    reduced = ljung_box(x, 10, df=8)
    assert full.statistic == reduced.statistic
    assert full.df == 10 and reduced.df == 8
    assert reduced.p_value != full.p_value


def test_portmanteau_degenerate():
    with pytest.raises(DataError):
        ljung_box(np.ones(50), 5)
    with pytest.raises(DataError):
        ljung_box(np.arange(10.0), 10)  # needs n > lags


# ---------------------------------------------------------------------------
# bundled residual diagnostics


def test_residual_diagnostics_fields():
    rng = np.random.default_rng(20)
    resid = rng.standard_normal(400)
    rep = residual_diagnostics(resid, n_lags=8)
    assert rep.ljung_box.df == 8
    assert rep.box_pierce.df == 8
    assert rep.ljung_box.statistic >= rep.box_pierce.statistic
    assert rep.acf_of_squares.size == 8
    assert rep.n_lags == 8
    assert 0 <= rep.jarque_bera.p_value <= 1
    assert rep.moments.n == 400
    # squared-residual autocorrelations computed on resid**2, not resid
    sq = resid**2
    sq_acf = np.array(
        [np.corrcoef(sq[k:] - sq.mean(), sq[:-k] - sq.mean())[0, 1] for k in (1, 2)]
    )
    assert np.allclose(rep.acf_of_squares[:2], sq_acf, atol=0.02)


def test_residual_diagnostics_constant_squares_guard():
    # residuals alternating +-c have constant squares; the squared-ACF is
    # reported as zeros instead of raising
    resid = np.tile([1.0, -1.0], 50)
    rep = residual_diagnostics(resid, n_lags=5)
    assert np.array_equal(rep.acf_of_squares, np.zeros(5))
    assert rep.ljung_box.p_value < 0.01  # the level ACF is far from white


def test_residual_diagnostics_on_heavy_tails():
    rng = np.random.default_rng(8)
    resid = rng.standard_t(3, 2000)
    rep = residual_diagnostics(resid)
    assert rep.jarque_bera.p_value < 1e-6
    assert rep.moments.excess_kurtosis > 1.0
