"""Domain types and parameter validation.

The model is a seasonal fractionally integrated ARMA with optional GARCH
innovations.  Polynomials follow the minus-sign convention

    phi(z)   = 1 - phi_1 z - ... - phi_p z^p
    Phi(z^s) = 1 - Phi_1 z^s - ... - Phi_P z^{Ps}

and likewise for the MA side.  All containers are immutable after
construction and safe to share across threads.
"""

from __future__ import annotations

from dataclasses import dataclass, field, InitVar

import numpy as np

from .exceptions import DataError, ModelInvariantError

#: roots closer than this to the unit circle count as violations
ROOT_TOLERANCE = 1e-10


def _frozen_array(values, name):
    arr = np.array(values, dtype=float)
    if arr.ndim != 1:
        raise DataError(f"{name} must be one-dimensional")
    if not np.all(np.isfinite(arr)):
        bad = int(np.flatnonzero(~np.isfinite(arr))[0])
        raise DataError(f"non-finite value in {name} at position {bad}", row=bad)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class TimeSeries:
    """Ordered real-valued observations with a season length.

    Parameters
    ----------
    values : array_like
        Observations in time order; all entries must be finite.
    season_length : int
        Number of observations per seasonal cycle (7 for daily data with
        a weekly pattern).  Estimation routines require ``len >= 2 * s``.
    index : sequence of datetime.date, optional
        Calendar stamps, one per observation, strictly increasing.
    """

    values: np.ndarray
    season_length: int = 1
    index: tuple | None = None

    def __post_init__(self):
        arr = _frozen_array(self.values, "values")
        if arr.size < 1:
            raise DataError("series is empty")
        object.__setattr__(self, "values", arr)
        s = int(self.season_length)
        if s < 1:
            raise DataError("season_length must be a positive integer")
        object.__setattr__(self, "season_length", s)
        if self.index is not None:
            idx = tuple(self.index)
            if len(idx) != arr.size:
                raise DataError("index length does not match values")
            for i in range(1, len(idx)):
                if not idx[i] > idx[i - 1]:
                    raise DataError(f"index not strictly increasing at position {i}", row=i)
            object.__setattr__(self, "index", idx)

    def __len__(self):
        return self.values.size

    @property
    def n(self) -> int:
        return self.values.size

    def require_estimable(self):
        """Raise unless the series is long enough for estimation (n >= 2s)."""
        if self.n < 2 * self.season_length:
            raise DataError(
                f"series too short for estimation: n={self.n} < 2*s={2 * self.season_length}"
            )


@dataclass(frozen=True)
class MemoryVector:
    """Fractional differencing orders: d at the origin, D at the seasonal poles."""

    d: float
    D: float
    s: int

    def __post_init__(self):
        if not (np.isfinite(self.d) and np.isfinite(self.D)):
            raise DataError("memory orders must be finite")
        if int(self.s) < 1:
            raise DataError("season length must be a positive integer")
        object.__setattr__(self, "d", float(self.d))
        object.__setattr__(self, "D", float(self.D))
        object.__setattr__(self, "s", int(self.s))

    @property
    def is_stationary_invertible(self) -> bool:
        return abs(self.d + self.D) < 0.5 and abs(self.D) < 0.5


@dataclass(frozen=True)
class SarmaParams:
    """Short-memory ARMA coefficients, seasonal and non-seasonal."""

    phi: tuple = ()
    Phi: tuple = ()
    theta: tuple = ()
    Theta: tuple = ()
    sigma2_eps: float = 1.0

    def __post_init__(self):
        for name in ("phi", "Phi", "theta", "Theta"):
            coeffs = tuple(float(c) for c in getattr(self, name))
            if not all(np.isfinite(coeffs)):
                raise DataError(f"non-finite coefficient in {name}")
            object.__setattr__(self, name, coeffs)
        object.__setattr__(self, "sigma2_eps", float(self.sigma2_eps))

    @property
    def orders(self) -> tuple:
        """(p, q, P, Q)."""
        return (len(self.phi), len(self.theta), len(self.Phi), len(self.Theta))

    def ar_poly(self, s: int) -> np.ndarray:
        """Coefficients of Phi(z^s) phi(z), ascending powers."""
        return np.convolve(expand_poly(self.phi, 1), expand_poly(self.Phi, s))

    def ma_poly(self, s: int) -> np.ndarray:
        """Coefficients of Theta(z^s) theta(z), ascending powers."""
        return np.convolve(expand_poly(self.theta, 1), expand_poly(self.Theta, s))


@dataclass(frozen=True)
class GarchParams:
    """Conditional variance recursion h_t = alpha0 + sum alpha_i e^2_{t-i} + sum beta_j h_{t-j}."""

    alpha0: float
    alpha: tuple = ()
    beta: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "alpha0", float(self.alpha0))
        object.__setattr__(self, "alpha", tuple(float(a) for a in self.alpha))
        object.__setattr__(self, "beta", tuple(float(b) for b in self.beta))
        vals = (self.alpha0,) + self.alpha + self.beta
        if not all(np.isfinite(vals)):
            raise DataError("non-finite GARCH coefficient")

    @property
    def orders(self) -> tuple:
        """(r, m) = (number of beta lags, number of alpha lags)."""
        return (len(self.beta), len(self.alpha))

    @property
    def persistence(self) -> float:
        return float(sum(self.alpha) + sum(self.beta))

    @property
    def unconditional_variance(self) -> float:
        """alpha0 / (1 - persistence); +inf when the recursion is not stationary."""
        if self.persistence >= 1.0:
            return float("inf")
        return self.alpha0 / (1.0 - self.persistence)


@dataclass(frozen=True)
class SarfimaGarchModel:
    """Full parameter set: mean, memory vector, SARMA and optional GARCH coefficients.

    Construction validates all invariants and raises
    :class:`~sarfima.exceptions.ModelInvariantError` naming every violated
    condition.  Pass ``check=False`` to build a descriptive (possibly
    invalid) model, e.g. to hold estimates that landed outside the
    stationary region.
    """

    mu: float
    memory: MemoryVector
    sarma: SarmaParams = field(default_factory=SarmaParams)
    garch: GarchParams | None = None
    check: InitVar[bool] = True

    def __post_init__(self, check):
        object.__setattr__(self, "mu", float(self.mu))
        if check:
            problems = validate_model(self)
            if problems:
                raise ModelInvariantError(problems)

    @property
    def s(self) -> int:
        return self.memory.s


def expand_poly(coeffs, stride: int) -> np.ndarray:
    """Ascending coefficients of 1 - c_1 z^k - c_2 z^{2k} - ... for stride k."""
    coeffs = np.asarray(coeffs, dtype=float)
    poly = np.zeros(coeffs.size * stride + 1)
    poly[0] = 1.0
    if coeffs.size:
        poly[stride::stride] = -coeffs
    return poly


def polynomial_roots_check(coeffs, seasonal_stride: int = 1) -> bool:
    """True iff every root of 1 - c_1 z^k - ... lies strictly outside the unit circle.

    A constant polynomial (empty or all-zero coefficients) has no roots and
    passes.  Roots within ``ROOT_TOLERANCE`` of the circle count as inside,
    so borderline cases fail safe.
    """
    poly = expand_poly(coeffs, seasonal_stride)
    # Work with the reciprocal polynomial z^k p(1/z): its leading coefficient
    # is the lag-0 term (exactly 1), so the companion matrix behind np.roots
    # never divides by a tiny high-order coefficient.  Roots flip to 1/z, so
    # causality becomes "strictly inside the circle"; the spurious zero roots
    # from vanishing high-order terms land at 0 and pass harmlessly.
    roots = np.roots(poly)
    return bool(np.all(np.abs(roots) < 1.0 / (1.0 + ROOT_TOLERANCE)))


def validate_model(model: SarfimaGarchModel) -> list:
    """Return descriptors for every violated invariant (empty list = valid).

    Never raises; collects all problems rather than stopping at the first.
    """
    problems = []
    mem = model.memory
    if not abs(mem.d + mem.D) < 0.5:
        problems.append(f"|d+D| >= 1/2 (got {abs(mem.d + mem.D):.4g})")
    if not abs(mem.D) < 0.5:
        problems.append(f"|D| >= 1/2 (got {abs(mem.D):.4g})")

    sarma = model.sarma
    if not sarma.sigma2_eps > 0:
        problems.append(f"sigma2_eps <= 0 (got {sarma.sigma2_eps:.4g})")
    if not polynomial_roots_check(sarma.phi, 1):
        problems.append("non-causal AR polynomial phi (root on or inside the unit circle)")
    if not polynomial_roots_check(sarma.Phi, mem.s):
        problems.append("non-causal seasonal AR polynomial Phi (root on or inside the unit circle)")
    if not polynomial_roots_check(sarma.theta, 1):
        problems.append("non-invertible MA polynomial theta (root on or inside the unit circle)")
    if not polynomial_roots_check(sarma.Theta, mem.s):
        problems.append(
            "non-invertible seasonal MA polynomial Theta (root on or inside the unit circle)"
        )

    garch = model.garch
    if garch is not None:
        if not garch.alpha0 > 0:
            problems.append(f"alpha0 <= 0 (got {garch.alpha0:.4g})")
        if any(a < 0 for a in garch.alpha):
            problems.append("negative ARCH coefficient alpha_i")
        if any(b < 0 for b in garch.beta):
            problems.append("negative GARCH coefficient beta_j")
        if not garch.persistence < 1.0:
            problems.append(f"GARCH stationarity sum >= 1 (got {garch.persistence:.4g})")

    if not np.isfinite(model.mu):
        problems.append("non-finite mean")
    return problems
