"""Fractional differencing filters.

The operator (1-B)^x has the binomial expansion sum_l pi_l(x) B^l with

    pi_0 = 1,   pi_l = pi_{l-1} * (l - 1 - x) / l,

equivalently pi_l = Gamma(l - x) / (Gamma(l + 1) Gamma(-x)).  The combined
seasonal/non-seasonal filter (1-B)^d (1-B^s)^D expands as the Cauchy
product of the two single-factor expansions, the seasonal one upsampled by
the season length.  Everything here is exact truncation arithmetic: the
coefficient of B^j in a product of truncated series is correct for every
j up to the truncation order.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.signal import fftconvolve

from .exceptions import DataError


def pi_coefficients(x: float, n_terms: int) -> np.ndarray:
    """First ``n_terms`` coefficients of the expansion of (1-B)^x.

    Uses the multiplicative recursion, which is numerically stable and
    avoids gamma-function overflow for large indices.
    """
    if n_terms < 1:
        raise DataError("n_terms must be >= 1")
    out = np.empty(n_terms)
    out[0] = 1.0
    if n_terms > 1:
        l = np.arange(1, n_terms)
        out[1:] = np.cumprod((l - 1 - x) / l)
    return out


def psi_star(d: float, D: float, s: int, n_terms: int) -> np.ndarray:
    """Coefficients of B^0..B^{n_terms-1} in (1-B)^d (1-B^s)^D.

    The seasonal factor only contributes at multiples of ``s``; its
    expansion is upsampled accordingly before the Cauchy product.
    """
    if s < 1:
        raise DataError("season length must be >= 1")
    if s == 1:
        # (1-B)^d (1-B)^D = (1-B)^(d+D)
        return pi_coefficients(d + D, n_terms)
    a = pi_coefficients(d, n_terms)
    b = np.zeros(n_terms)
    b[::s] = pi_coefficients(D, (n_terms - 1) // s + 1)
    return np.convolve(a, b)[:n_terms]


@dataclass(frozen=True)
class FilterCoefficients:
    """A truncated causal filter sum_j c_j B^j with c_0 = 1."""

    coeffs: np.ndarray
    d: float
    D: float
    s: int

    def __post_init__(self):
        arr = np.asarray(self.coeffs, dtype=float)
        arr.setflags(write=False)
        object.__setattr__(self, "coeffs", arr)

    @property
    def n_terms(self) -> int:
        return self.coeffs.size

    def inverse(self) -> "FilterCoefficients":
        """The filter with negated memory orders, same truncation length."""
        return fractional_filter(-self.d, -self.D, self.s, self.n_terms)


def fractional_filter(d: float, D: float, s: int, n_terms: int) -> FilterCoefficients:
    """Build the truncated (1-B)^d (1-B^s)^D filter."""
    return FilterCoefficients(psi_star(d, D, s, n_terms), float(d), float(D), int(s))


def apply_filter(x: np.ndarray, filt: FilterCoefficients | np.ndarray) -> np.ndarray:
    """Apply a causal filter to a series, truncating at available history.

    Output y_t = sum_{j<=t} c_j x_{t-j}, i.e. the convolution restricted to
    the observed past.  Composing a filter with its inverse (negated
    orders, same truncation) is an exact identity in this convention.
    """
    x = np.asarray(x, dtype=float)
    c = filt.coeffs if isinstance(filt, FilterCoefficients) else np.asarray(filt, dtype=float)
    if x.ndim != 1:
        raise DataError("series must be one-dimensional")
    # fftconvolve wins well before n=1000; exact enough (~1e-13) for our use
    if x.size * c.size > 4096:
        return fftconvolve(x, c)[: x.size]
    return np.convolve(x, c)[: x.size]


def power_series_div(num: np.ndarray, den: np.ndarray, n_terms: int) -> np.ndarray:
    """Coefficients of num(z)/den(z) as a power series, den[0] != 0."""
    num = np.asarray(num, dtype=float)
    den = np.asarray(den, dtype=float)
    if den.size == 0 or den[0] == 0.0:
        raise DataError("denominator must have a nonzero constant term")
    out = np.zeros(n_terms)
    for j in range(n_terms):
        acc = num[j] if j < num.size else 0.0
        k_max = min(j, den.size - 1)
        if k_max >= 1:
            acc -= den[1 : k_max + 1] @ out[j - 1 :: -1][:k_max]
        out[j] = acc / den[0]
    return out


def ma_expansion(d: float, D: float, s: int, sarma, n_terms: int) -> np.ndarray:
    """MA(inf) weights: coefficients of theta-side(z) / (phi-side(z) (1-z)^d (1-z^s)^D).

    ``sarma`` is a :class:`~sarfima.model.SarmaParams`.  The result maps
    white noise to the centered process.
    """
    num = sarma.ma_poly(s)
    den = np.convolve(sarma.ar_poly(s), psi_star(d, D, s, n_terms))[:n_terms]
    return power_series_div(num, den, n_terms)


def ar_expansion(d: float, D: float, s: int, sarma, n_terms: int) -> np.ndarray:
    """AR(inf) weights: coefficients of phi-side(z) (1-z)^d (1-z^s)^D / theta-side(z).

    The reciprocal of :func:`ma_expansion` as a power series; weight 0 is 1.
    """
    num = np.convolve(sarma.ar_poly(s), psi_star(d, D, s, n_terms))[:n_terms]
    den = sarma.ma_poly(s)
    return power_series_div(num, den, n_terms)
