"""Periodogram and sample autocorrelation machinery.

The periodogram uses the 1/(2 pi n) normalization:

    I(w_j) = |sum_t x_t exp(-i t w_j)|^2 / (2 pi n),   w_j = 2 pi j / n.

With that convention, summing I over the full frequency grid recovers the
(biased) sample variance up to the 2 pi / n factor; see
:func:`parseval_check`.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .exceptions import DataError, NumericalError
from .fracdiff import apply_filter, psi_star
from .model import SarmaParams


@dataclass(frozen=True)
class PeriodogramSet:
    """Fourier frequencies (excluding 0 and pi) with raw periodogram ordinates."""

    frequencies: np.ndarray
    ordinates: np.ndarray
    n: int

    def __post_init__(self):
        for name in ("frequencies", "ordinates"):
            arr = np.asarray(getattr(self, name), dtype=float)
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)
        if self.frequencies.size != self.ordinates.size:
            raise DataError("frequency and ordinate arrays must align")


def periodogram(x: np.ndarray, demean: bool = True) -> PeriodogramSet:
    """Raw periodogram at the interior Fourier frequencies j = 1..floor((n-1)/2).

    Frequency 0 is excluded (it only carries the sample mean) and so is the
    Nyquist ordinate for even n; both are recoverable from the FFT if
    needed, but the regression and plotting consumers only want the
    interior grid.
    """
    x = np.asarray(x, dtype=float)
    if x.ndim != 1:
        raise DataError("series must be one-dimensional")
    n = x.size
    if n < 2:
        raise DataError("need at least two observations for a periodogram")
    if demean:
        x = x - x.mean()
    spec = np.abs(np.fft.rfft(x)) ** 2 / (2.0 * np.pi * n)
    m = (n - 1) // 2
    j = np.arange(1, m + 1)
    return PeriodogramSet(2.0 * np.pi * j / n, spec[1 : m + 1], n)


def parseval_check(x: np.ndarray) -> tuple:
    """Return (sample variance, periodogram total) — equal up to roundoff.

    The total is (4 pi / n) * sum of interior ordinates, plus
    (2 pi / n) * I(pi) when n is even: interior frequencies appear twice
    on the full circle, the Nyquist one once.
    """
    x = np.asarray(x, dtype=float)
    n = x.size
    xc = x - x.mean()
    variance = float(xc @ xc) / n
    spec = np.abs(np.fft.rfft(xc)) ** 2 / (2.0 * np.pi * n)
    m = (n - 1) // 2
    total = 4.0 * np.pi / n * float(spec[1 : m + 1].sum())
    if n % 2 == 0:
        total += 2.0 * np.pi / n * float(spec[n // 2])
    return variance, total


def sample_acf(x: np.ndarray, n_lags: int) -> np.ndarray:
    """Sample autocorrelations rho(0..n_lags), biased (divide-by-n) estimator.

    Computed via FFT in O(n log n); identical to the direct sum to machine
    precision.
    """
    x = np.asarray(x, dtype=float)
    n = x.size
    if n < 2:
        raise DataError("need at least two observations for autocorrelations")
    if not 0 <= n_lags < n:
        raise DataError(f"n_lags must lie in [0, {n - 1}]")
    xc = x - x.mean()
    nfft = 1 << int(np.ceil(np.log2(2 * n - 1)))
    f = np.fft.rfft(xc, nfft)
    acov = np.fft.irfft(f * np.conj(f), nfft)[: n_lags + 1] / n
    if acov[0] <= 0:
        raise DataError("series is constant; autocorrelations undefined")
    return acov / acov[0]


def sample_pacf(x: np.ndarray, n_lags: int) -> np.ndarray:
    """Partial autocorrelations at lags 1..n_lags via the Durbin-Levinson recursion."""
    rho = sample_acf(x, n_lags)
    pacf = np.zeros(n_lags)
    if n_lags == 0:
        return pacf
    phi_prev = np.zeros(n_lags + 1)
    phi_prev[1] = rho[1]
    pacf[0] = rho[1]
    v = 1.0 - rho[1] ** 2
    for k in range(2, n_lags + 1):
        if v <= 0:
            # remaining partials are numerically degenerate; leave them at 0
            break
        num = rho[k] - phi_prev[1:k] @ rho[k - 1 : 0 : -1]
        a = num / v
        phi = phi_prev.copy()
        phi[k] = a
        phi[1:k] = phi_prev[1:k] - a * phi_prev[k - 1 : 0 : -1]
        v *= 1.0 - a * a
        pacf[k - 1] = a
        phi_prev = phi
    return pacf


def spectral_density(
    freqs: np.ndarray,
    d: float,
    D: float,
    s: int,
    sarma: SarmaParams | None = None,
    sigma2: float = 1.0,
) -> np.ndarray:
    """Model spectral density f(w) on [0, pi], long-memory poles included.

    f(w) = sigma2/(2 pi) * |theta-side(e^{-iw})|^2 / |phi-side(e^{-iw})|^2
           * (2 sin(w/2))^{-2d} * (2 sin(sw/2))^{-2D}

    Unbounded at w = 0 when d + D > 0 and at the seasonal harmonics when
    D > 0; evaluating there raises :class:`NumericalError`.
    """
    w = np.asarray(freqs, dtype=float)
    if sarma is None:
        sarma = SarmaParams()
    at_zero = np.abs(np.sin(w / 2.0)) < 1e-12
    at_harmonic = np.abs(np.sin(s * w / 2.0)) < 1e-12
    if (d + D > 0 and np.any(at_zero)) or (D > 0 and np.any(at_harmonic & ~at_zero)):
        raise NumericalError("spectral density unbounded at a seasonal/zero frequency")
    z = np.exp(-1j * w)
    num = np.polyval(sarma.ma_poly(s)[::-1], z)
    den = np.polyval(sarma.ar_poly(s)[::-1], z)
    out = sigma2 / (2.0 * np.pi) * np.abs(num) ** 2 / np.abs(den) ** 2
    with np.errstate(divide="ignore"):
        out = out * np.abs(2.0 * np.sin(w / 2.0)) ** (-2.0 * d)
        out = out * np.abs(2.0 * np.sin(s * w / 2.0)) ** (-2.0 * D)
    return out


def filtered_series(x: np.ndarray, d: float, D: float, s: int) -> np.ndarray:
    """Apply the truncated (1-B)^d (1-B^s)^D filter to a centered copy of x.

    Convenience wrapper used by the estimation pipeline and the filtered
    ACF/PACF plots; centering uses the sample mean.
    """
    x = np.asarray(x, dtype=float)
    return apply_filter(x - x.mean(), psi_star(d, D, s, x.size))
