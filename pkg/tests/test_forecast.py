import numpy as np
import pytest
from scipy.linalg import solve_toeplitz
from scipy.special import gammaln

from sarfima import (
    DataError,
    ForecastSeries,
    GarchParams,
    MemoryVector,
    SarfimaGarchModel,
    SarmaParams,
    evaluate_forecasts,
    one_step_forecasts,
    simulate,
)

FULL_MODEL = SarfimaGarchModel(
    mu=43.81,
    memory=MemoryVector(0.2606, 0.2223, 7),
    sarma=SarmaParams(theta=(0.1417,), Theta=(-0.1092,), sigma2_eps=67.73),
    garch=GarchParams(alpha0=1.6464, alpha=(0.0677,), beta=(0.9205,)),
)


def test_forecasting_the_generating_model_recovers_the_innovations():
    """Simulated with no burn-in, the filter inversion is exact: the
    estimated innovations and variance path reproduce the simulator's."""
    sim = simulate(FULL_MODEL, 600, burn_in=0, seed=5)
    fc = one_step_forecasts(sim.values, FULL_MODEL)
    assert np.allclose(fc.innovations, sim.innovations, atol=1e-10)
    assert np.allclose(fc.conditional_variances, sim.conditional_variances, rtol=1e-10)
    # x - prediction is the innovation estimate, by construction
    assert np.allclose(sim.values - fc.predictions, fc.innovations, atol=1e-12)
    assert fc.predictions[0] == FULL_MODEL.mu


def test_predictions_agree_with_exact_toeplitz_projection():
    """Against the textbook best linear predictor from true autocovariances."""
    d = 0.3
    n = 200
    model = SarfimaGarchModel(mu=0.0, memory=MemoryVector(d, 0.0, 1))
    x = simulate(model, n, seed=11).values

    # gamma(k) for ARFIMA(0, d, 0), unit innovation variance
    k = np.arange(n)
    log_rho = gammaln(k + d) + gammaln(1 - d) - gammaln(k + 1 - d) - gammaln(d)
    rho = np.exp(log_rho)
    rho[0] = 1.0
    gam = np.exp(gammaln(1 - 2 * d) - 2 * gammaln(1 - d)) * rho

    fc = one_step_forecasts(x, model)
    final = solve_toeplitz(gam[: n - 1], gam[1:n]) @ x[n - 2 :: -1]
    assert abs(fc.predictions[-1] - final) < 0.01

    for t in (20, 80, 150):
        proj = solve_toeplitz(gam[:t], gam[1 : t + 1]) @ x[t - 1 :: -1]
        assert abs(fc.predictions[t] - proj) < 0.1, f"t={t}"


def test_bands_are_symmetric_and_widen_with_level():
    x = simulate(FULL_MODEL, 300, seed=8).values
    lo = one_step_forecasts(x, FULL_MODEL, level=0.90)
    hi = one_step_forecasts(x, FULL_MODEL, level=0.99)
    assert np.allclose(lo.predictions, hi.predictions)
    assert np.all(hi.upper - hi.lower > lo.upper - lo.lower)
    assert np.allclose(lo.upper + lo.lower, 2 * lo.predictions, atol=1e-8)
    assert np.all(hi.upper_adaptive - hi.lower_adaptive > lo.upper_adaptive - lo.lower_adaptive)


def test_bands_do_not_peek_at_the_current_observation():
    # short series: the direct convolution path makes the check exact
    x = simulate(FULL_MODEL, 60, seed=3).values
    y = x.copy()
    y[-1] += 500.0  # a wild final observation
    a = one_step_forecasts(x, FULL_MODEL)
    b = one_step_forecasts(y, FULL_MODEL)
    t = x.size - 1
    assert b.predictions[t] == a.predictions[t]
    assert b.lower[t] == a.lower[t]
    assert b.lower_adaptive[t] == a.lower_adaptive[t]
    assert b.upper_adaptive[t] == a.upper_adaptive[t]
    # earlier entries untouched as well
    assert np.array_equal(a.predictions[:t], b.predictions[:t])


def test_no_peeking_survives_the_fft_convolution_path():
    # long series go through fftconvolve, which smears roundoff across all
    # entries; the dependence is still strictly on the past
    x = simulate(FULL_MODEL, 2048, seed=3).values
    y = x.copy()
    y[-1] += 500.0
    a = one_step_forecasts(x, FULL_MODEL)
    b = one_step_forecasts(y, FULL_MODEL)
    t = x.size - 1
    assert b.predictions[t] == pytest.approx(a.predictions[t], abs=1e-8)
    assert b.upper_adaptive[t] == pytest.approx(a.upper_adaptive[t], abs=1e-8)


def test_constant_band_coverage_on_white_noise():
    model = SarfimaGarchModel(mu=0.0, memory=MemoryVector(0.0, 0.0, 1))
    x = simulate(model, 20000, seed=44).values
    fc = one_step_forecasts(x, model, level=0.95)
    ev = evaluate_forecasts(x, fc, holdout=20000)
    assert abs(ev.cphfi - 95.0) < 0.7, f"coverage {ev.cphfi:.2f}%"
    assert ev.cpgfi is None  # no variance recursion on this model


def test_evaluation_hand_computed():
    x = np.array([10.0, 20.0, 10.0, 20.0])
    pred = np.full(4, 10.0)
    fc = ForecastSeries(
        predictions=pred,
        innovations=x - pred,
        conditional_variances=None,
        lower=pred - 1.0,
        upper=pred + 1.0,
        lower_adaptive=None,
        upper_adaptive=None,
        level=0.95,
    )
    ev = evaluate_forecasts(x, fc, holdout=2)
    assert ev.n_eval == 2
    assert ev.mpe == pytest.approx(25.0)   # (0 + 50)/2 percent
    assert ev.mape == pytest.approx(25.0)
    assert ev.rmse == pytest.approx(np.sqrt(50.0))
    assert ev.cphfi == pytest.approx(50.0)  # 10 inside [9,11], 20 outside
    assert ev.cpgfi is None
    assert ev.level == 0.95


def test_evaluation_validates_inputs():
    x = np.arange(10.0) + 1.0
    model = SarfimaGarchModel(mu=0.0, memory=MemoryVector(0.0, 0.0, 1))
    fc = one_step_forecasts(x, model)
    with pytest.raises(DataError, match="holdout"):
        evaluate_forecasts(x, fc, holdout=0)
    with pytest.raises(DataError, match="holdout"):
        evaluate_forecasts(x, fc, holdout=11)
    with pytest.raises(DataError, match="mismatch"):
        evaluate_forecasts(x[:5], fc, holdout=2)


def test_forecast_requires_invertible_ma():
    bad = SarfimaGarchModel(
        mu=0.0,
        memory=MemoryVector(0.1, 0.1, 7),
        sarma=SarmaParams(theta=(1.0,)),
        check=False,
    )
    with pytest.raises(DataError, match="invertible"):
        one_step_forecasts(np.ones(30), bad)


def test_forecast_tolerates_nonstationary_memory_estimates():
    # estimated memory orders sometimes land outside the stationary region;
    # the predictor still runs (weights just decay slowly)
    rough = SarfimaGarchModel(
        mu=0.0, memory=MemoryVector(0.41, 0.15, 7), check=False,
    )
    fc = one_step_forecasts(np.random.default_rng(1).standard_normal(100), rough)
    assert np.all(np.isfinite(fc.predictions))


def test_forecast_rejects_bad_level_and_empty_series():
    model = SarfimaGarchModel(mu=0.0, memory=MemoryVector(0.0, 0.0, 1))
    with pytest.raises(DataError, match="level"):
        one_step_forecasts(np.ones(10), model, level=1.5)
    with pytest.raises(DataError, match="empty"):
        one_step_forecasts(np.array([]), model)


def test_forecast_series_is_frozen():
    model = SarfimaGarchModel(mu=0.0, memory=MemoryVector(0.0, 0.0, 1))
    fc = one_step_forecasts(np.arange(10.0), model)
    with pytest.raises(ValueError):
        fc.predictions[0] = 99.0
