import numpy as np
import pytest
import statsmodels.api as sm
from scipy.signal import freqz
from statsmodels.tsa.stattools import pacf_yw

from sarfima import (
    DataError,
    MemoryVector,
    NumericalError,
    SarfimaGarchModel,
    SarmaParams,
    parseval_check,
    periodogram,
    sample_acf,
    sample_pacf,
    simulate,
    spectral_density,
)


# ---------------------------------------------------------------------------
# periodogram


def direct_periodogram(x):
    """O(n^2) textbook definition: |sum x_t exp(-i w_j t)|^2 / (2 pi n)."""
    x = x - x.mean()
    n = x.size
    m = (n - 1) // 2
    t = np.arange(n)
    out = np.empty(m)
    for j in range(1, m + 1):
        w = 2.0 * np.pi * j / n
        z = np.sum(x * np.exp(-1j * w * t))
        out[j - 1] = (z * z.conjugate()).real / (2.0 * np.pi * n)
    return out


def test_periodogram_matches_direct_dft():
    rng = np.random.default_rng(17)
    for n in (100, 257):
        x = rng.standard_normal(n) * 3.0 + 5.0
        pg = periodogram(x)
        want = direct_periodogram(x)
        m = (n - 1) // 2  # interior grid only: no zero, no Nyquist
        assert pg.ordinates.size == m
        assert np.allclose(pg.ordinates, want, rtol=1e-9, atol=1e-12)
        assert np.allclose(pg.frequencies, 2 * np.pi * np.arange(1, m + 1) / n)


def test_periodogram_of_constant_is_zero():
    pg = periodogram(np.full(64, 7.3))
    assert np.all(pg.ordinates < 1e-20)


def test_periodogram_pure_tone_concentrates():
    n = 64
    j0 = 8
    t = np.arange(n)
    x = np.cos(2 * np.pi * j0 * t / n)
    pg = periodogram(x)
    assert pg.ordinates[j0 - 1] > 1.0
    others = np.delete(pg.ordinates, j0 - 1)
    assert np.all(others < 1e-14)


def test_periodogram_rejects_too_short():
    with pytest.raises(DataError, match="at least two"):
        periodogram(np.array([1.0]))


def test_parseval_bookkeeping():
    rng = np.random.default_rng(5)
    for n in (64, 127, 128, 255):
        x = rng.standard_normal(n)
        var, recon = parseval_check(x)
        assert recon == pytest.approx(var, rel=1e-10), f"n={n}"
        assert var == pytest.approx(np.var(x))


# ---------------------------------------------------------------------------
# sample autocorrelations


def test_sample_acf_against_direct_sums():
    rng = np.random.default_rng(2)
    x = rng.standard_normal(40)
    got = sample_acf(x, 6)
    xc = x - x.mean()
    denom = np.sum(xc**2)
    want = [1.0] + [np.sum(xc[k:] * xc[:-k]) / denom for k in range(1, 7)]
    assert np.allclose(got, want, atol=1e-14)


def test_sample_acf_matches_statsmodels():
    rng = np.random.default_rng(23)
    x = rng.standard_normal(300)
    got = sample_acf(x, 20)
    want = sm.tsa.acf(x, nlags=20, adjusted=False, fft=True)
    assert np.allclose(got, want, atol=1e-10)


def test_sample_acf_alternating_series():
    n = 60
    x = np.tile([1.0, -1.0], n // 2)
    acf = sample_acf(x, 3)
    assert acf[0] == 1.0
    # biased estimator: lag-1 value is -(n-1)/n, not exactly -1
    assert acf[1] == pytest.approx(-(n - 1) / n, abs=1e-12)


def test_sample_acf_zero_variance_raises():
    with pytest.raises(DataError, match="constant"):
        sample_acf(np.full(50, 3.0), 5)


@pytest.mark.slow
def test_acf_decays_hyperbolically_under_long_memory():
    """log acf vs log lag has slope about 2d - 1 over lags 10..100."""
    model = SarfimaGarchModel(mu=0.0, memory=MemoryVector(0.3, 0.0, 1))
    lags = np.arange(10, 101)
    slopes = []
    for rep in range(50):
        # the biased ACF decays too fast in short samples; 50k keeps the
        # mean-subtraction bias inside the tolerance
        sim = simulate(model, 50_000, seed=1000 + rep)
        acf = sample_acf(sim.values, 100)[lags]
        keep = acf > 0
        b = np.polyfit(np.log(lags[keep]), np.log(acf[keep]), 1)[0]
        slopes.append(b)
    med = float(np.median(slopes))
    assert abs(med - (2 * 0.3 - 1.0)) < 0.15, f"median slope {med:.3f}, want about -0.4"


# ---------------------------------------------------------------------------
# partial autocorrelations


def test_sample_pacf_matches_statsmodels_yule_walker():
    rng = np.random.default_rng(31)
    x = rng.standard_normal(400)
    got = sample_pacf(x, 12)  # lags 1..12, no leading 1
    want = pacf_yw(x, nlags=12, method="mle")[1:]
    assert np.allclose(got, want, atol=1e-10)


def test_sample_pacf_length_three_closed_form():
    x = np.array([1.0, 3.0, 2.0])
    r = sample_acf(x, 2)
    got = sample_pacf(x, 2)
    assert got[0] == pytest.approx(r[1])
    assert got[1] == pytest.approx((r[2] - r[1] ** 2) / (1 - r[1] ** 2))


def test_sample_pacf_white_noise_is_small():
    rng = np.random.default_rng(99)
    x = rng.standard_normal(5000)
    pac = sample_pacf(x, 20)
    assert np.mean(np.abs(pac) < 3.0 / np.sqrt(5000)) > 0.95


def test_sample_pacf_ar1_cuts_off():
    rng = np.random.default_rng(12)
    n = 8000
    x = np.empty(n)
    x[0] = 0.0
    e = rng.standard_normal(n)
    for t in range(1, n):
        x[t] = 0.6 * x[t - 1] + e[t]
    pac = sample_pacf(x, 8)
    assert abs(pac[0] - 0.6) < 0.05
    assert np.all(np.abs(pac[1:]) < 4.0 / np.sqrt(n))


# ---------------------------------------------------------------------------
# model spectral density


def test_spectral_density_white_noise_is_flat():
    w = np.linspace(0.1, 3.0, 9)
    f = spectral_density(w, 0.0, 0.0, 7)
    assert np.allclose(f, 1.0 / (2 * np.pi), atol=1e-14)


def test_spectral_density_scales_with_innovation_variance():
    w = np.linspace(0.2, 3.0, 7)
    sp = SarmaParams(theta=(0.1417,), Theta=(-0.1092,))
    f1 = spectral_density(w, 0.2, 0.1, 7, sp, sigma2=1.0)
    f5 = spectral_density(w, 0.2, 0.1, 7, sp, sigma2=5.0)
    assert np.allclose(f5, 5.0 * f1, rtol=1e-12)


def test_spectral_density_is_symmetric():
    sp = SarmaParams(phi=(0.4,), theta=(0.2,))
    w = np.array([0.3, 0.9, 1.7])
    assert np.allclose(
        spectral_density(w, 0.2, 0.15, 7, sp),
        spectral_density(2 * np.pi - w, 0.2, 0.15, 7, sp),
        rtol=1e-12,
    )


def test_spectral_density_sarma_matches_transfer_function():
    # with d = D = 0 the density is sigma^2 |MA(e^{-iw})|^2 / (2 pi |AR(e^{-iw})|^2)
    sp = SarmaParams(phi=(0.5,), theta=(0.3,), Theta=(-0.1,))
    w = np.linspace(0.05, 3.1, 25)
    _, h = freqz(sp.ma_poly(7), sp.ar_poly(7), worN=w)
    want = 2.0 * np.abs(h) ** 2 / (2 * np.pi)
    assert np.allclose(spectral_density(w, 0.0, 0.0, 7, sp, sigma2=2.0), want, rtol=1e-10)


def test_spectral_density_power_law_near_zero():
    # f(w) * w^{2(d+D)} tends to a positive constant as w -> 0
    w = np.array([1e-2, 1e-3, 1e-4])
    vals = spectral_density(w, 0.25, 0.0, 1) * w**0.5
    assert np.all(vals > 0)
    assert np.max(vals) / np.min(vals) < 1.01


def test_spectral_density_unbounded_at_poles():
    with pytest.raises(NumericalError, match="unbounded"):
        spectral_density(np.array([2 * np.pi / 7]), 0.2, 0.2, 7)
    with pytest.raises(NumericalError, match="unbounded"):
        spectral_density(np.array([0.0]), 0.2, 0.2, 7)
    # no seasonal memory: the harmonic frequency is an ordinary point
    assert np.isfinite(spectral_density(np.array([2 * np.pi / 7]), 0.2, 0.0, 7)[0])
