"""Coefficient ensembles for random analytic functions with real zeros.

A random function here is the power series

    F_n(t) = sum_k f_{n,k} xi_k t^k,

where the xi_k are i.i.d. real coefficients with mean zero and unit
variance and the deterministic weights f_{n,k} come from one of four
classical families, indexed by a size parameter n >= 1:

    SP    f_{n,k}^2 = C(n, k) for k <= n          spherical polynomials
    FAF   f_{n,k}^2 = n^k / k!                    flat analytic functions
    HAF   f_{n,k}^2 = C(n+k-1, k)                 hyperbolic analytic functions
    WP    f_{n,k}^2 = n^k / k! for k <= n         Weyl polynomials

The variance of F_n(t) is v_n(t) = sum_k f_{n,k}^2 t^{2k}, with closed
forms (1+t^2)^n for SP, e^{n t^2} for FAF, (1-t^2)^{-n} for HAF on
|t| < 1, and the degree-n partial sum of e^{n t^2} for WP.  The WP sum
also equals e^{n t^2} Q(n+1, n t^2) with Q the regularized upper
incomplete gamma; that identity is used as a cross-check, never as the
evaluation path.

Each family satisfies v_n(t) = exp(n p(t)) up to the WP correction term,
for a smooth growth profile p on the family's real domain (all of R for
SP and FAF, the interval (-1, 1) for HAF and WP).  The profile drives
everything macroscopic:

    local frequency     gamma(t) = (p'(t)/t + p''(t)) / 4
    limit zero density  sqrt(gamma(t)) / pi

so that the expected number of real zeros of F_n in [a, b] grows like
sqrt(n) times the integral of the limit density.  For SP, FAF and HAF the
integral has elementary antiderivatives (arctan, identity, artanh), and
those closed forms are what ``expected_zero_rate`` returns.

Intervals must avoid t = 0: the scaling degenerates there because every
family's weight mass collapses onto k = 0.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np
from scipy.special import gammaln

from .special import log_sum_exp

__all__ = [
    "DomainError",
    "NumericalError",
    "EnsembleKind",
    "IntervalSpec",
    "GrowthProfile",
    "log_weight",
    "log_weight_array",
    "log_variance",
    "growth_profile",
    "local_frequency",
    "limit_density",
    "expected_zero_rate",
    "domain_contains",
    "validate_interval",
]


class DomainError(ValueError):
    """An argument lies outside the domain an operation is defined on."""


class NumericalError(RuntimeError):
    """A computation produced non-finite values or failed to stabilize."""


class EnsembleKind(enum.Enum):
    """The four weight families.

    SP and WP are polynomial families (weights vanish beyond degree n);
    FAF and HAF have infinite expansions.  HAF and WP live on (-1, 1),
    SP and FAF on the whole real line.
    """

    SP = "SP"
    FAF = "FAF"
    HAF = "HAF"
    WP = "WP"

    @property
    def finite_degree(self) -> bool:
        """True when the family is a polynomial of degree n."""
        return self in (EnsembleKind.SP, EnsembleKind.WP)

    @property
    def domain_radius(self) -> float:
        """Half-width of the real domain: inf for SP/FAF, 1 for HAF/WP."""
        if self in (EnsembleKind.HAF, EnsembleKind.WP):
            return 1.0
        return math.inf


@dataclass(frozen=True)
class IntervalSpec:
    """A closed interval [a, b] of evaluation points, a < b.

    Construction enforces only ordering and finiteness.  Whether the
    interval is admissible for a given ensemble (inside the real domain
    and excluding 0) is the job of ``domain_contains``; operations that
    need admissibility call ``validate_interval``.
    """

    a: float
    b: float

    def __post_init__(self) -> None:
        if not (math.isfinite(self.a) and math.isfinite(self.b)):
            raise DomainError(f"interval endpoints must be finite, got [{self.a}, {self.b}]")
        if not self.a < self.b:
            raise DomainError(f"interval requires a < b, got [{self.a}, {self.b}]")

    @property
    def length(self) -> float:
        return self.b - self.a


@dataclass(frozen=True)
class GrowthProfile:
    """Growth profile p of a family at one point: value and derivatives.

    ``d1`` and ``d2`` are p' and p''.  The combination
    (d1 / t + d2) / 4 is the local frequency; see ``local_frequency``.
    """

    value: float
    d1: float
    d2: float


def _require_n(n: int) -> None:
    if not isinstance(n, (int, np.integer)) or isinstance(n, bool) or n < 1:
        raise DomainError(f"size parameter n must be an integer >= 1, got {n!r}")


def log_weight(ensemble: EnsembleKind, n: int, k: int) -> float | None:
    """log f_{n,k} for one index, or None where the weight is zero.

    SP and WP return None for k > n.  Everything is computed through
    log-gamma, so no factorial or binomial ever materializes.
    """
    _require_n(n)
    if not isinstance(k, (int, np.integer)) or isinstance(k, bool) or k < 0:
        raise DomainError(f"index k must be an integer >= 0, got {k!r}")
    if ensemble is EnsembleKind.SP:
        if k > n:
            return None
        return 0.5 * (math.lgamma(n + 1) - math.lgamma(k + 1) - math.lgamma(n - k + 1))
    if ensemble is EnsembleKind.FAF:
        return 0.5 * (k * math.log(n) - math.lgamma(k + 1))
    if ensemble is EnsembleKind.HAF:
        return 0.5 * (math.lgamma(n + k) - math.lgamma(k + 1) - math.lgamma(n))
    if ensemble is EnsembleKind.WP:
        if k > n:
            return None
        return 0.5 * (k * math.log(n) - math.lgamma(k + 1))
    raise DomainError(f"unknown ensemble {ensemble!r}")


def log_weight_array(ensemble: EnsembleKind, n: int, count: int) -> np.ndarray:
    """log f_{n,k} for k = 0 .. count-1 as a vector.

    count must not exceed n+1 for the polynomial families; the caller is
    expected to have truncated already.
    """
    _require_n(n)
    if count < 1:
        raise DomainError(f"count must be >= 1, got {count}")
    if ensemble.finite_degree and count > n + 1:
        raise DomainError(f"{ensemble.value} has degree {n}; cannot produce {count} weights")
    ks = np.arange(count, dtype=float)
    if ensemble is EnsembleKind.SP:
        return 0.5 * (math.lgamma(n + 1) - gammaln(ks + 1.0) - gammaln(n - ks + 1.0))
    if ensemble in (EnsembleKind.FAF, EnsembleKind.WP):
        return 0.5 * (ks * math.log(n) - gammaln(ks + 1.0))
    # HAF
    return 0.5 * (gammaln(n + ks) - gammaln(ks + 1.0) - math.lgamma(n))


# Memory cap for the vectorized WP variance: the (n+1, T) term matrix is
# processed in column blocks of at most this many entries.
_WP_BLOCK_ENTRIES = 8_000_000


def _wp_log_variance(n: int, t: np.ndarray) -> np.ndarray:
    """log of the degree-n partial sum of exp(n t^2), elementwise in t.

    Max-anchored log-sum-exp over the n+1 terms k*log(n t^2) - log k!.
    The sum is entire in t, so no domain restriction applies.
    """
    ks = np.arange(n + 1, dtype=float)
    lgk = gammaln(ks + 1.0)
    flat = np.atleast_1d(np.asarray(t, dtype=float)).ravel()
    out = np.empty(flat.shape)
    block = max(1, _WP_BLOCK_ENTRIES // (n + 1))
    for lo in range(0, flat.size, block):
        tt = flat[lo : lo + block]
        with np.errstate(divide="ignore", invalid="ignore"):
            log_x = np.log(n * tt * tt)  # -inf at t = 0 handled below
            terms = ks[:, None] * log_x[None, :] - lgk[:, None]
        terms[np.isnan(terms)] = -np.inf  # 0 * -inf from the k = 0 row at t = 0
        out[lo : lo + block] = log_sum_exp(terms, axis=0)
    zero = flat == 0.0
    if np.any(zero):
        out[zero] = 0.0  # only the k = 0 term survives
    return out.reshape(np.shape(t))


def log_variance(ensemble: EnsembleKind, n: int, t):
    """log v_n(t), vectorized over t.

    Closed forms for SP, FAF and HAF; a stable log-sum-exp over the n+1
    series terms for WP.  HAF requires |t| < 1; the other three accept
    any real t (the WP partial sum is a polynomial, hence entire).
    """
    _require_n(n)
    arr = np.asarray(t, dtype=float)
    if not np.all(np.isfinite(arr)):
        raise DomainError("t must be finite")
    if ensemble is EnsembleKind.SP:
        out = n * np.log1p(arr * arr)
    elif ensemble is EnsembleKind.FAF:
        out = n * arr * arr
    elif ensemble is EnsembleKind.HAF:
        if np.any(np.abs(arr) >= 1.0):
            raise DomainError("HAF variance requires |t| < 1")
        out = -n * np.log1p(-(arr * arr))
    elif ensemble is EnsembleKind.WP:
        out = _wp_log_variance(n, arr)
    else:
        raise DomainError(f"unknown ensemble {ensemble!r}")
    if np.ndim(t) == 0:
        return float(out)
    return out


def growth_profile(ensemble: EnsembleKind, t: float) -> GrowthProfile:
    """p(t), p'(t), p''(t) at one real point of the family's domain."""
    t = float(t)
    if not math.isfinite(t):
        raise DomainError("t must be finite")
    if ensemble.domain_radius == 1.0 and not abs(t) < 1.0:
        raise DomainError(f"{ensemble.value} growth profile requires |t| < 1, got t={t}")
    t2 = t * t
    if ensemble is EnsembleKind.SP:
        w = 1.0 + t2
        return GrowthProfile(math.log1p(t2), 2.0 * t / w, 2.0 * (1.0 - t2) / (w * w))
    if ensemble in (EnsembleKind.FAF, EnsembleKind.WP):
        return GrowthProfile(t2, 2.0 * t, 2.0)
    if ensemble is EnsembleKind.HAF:
        w = 1.0 - t2
        return GrowthProfile(-math.log1p(-t2), 2.0 * t / w, 2.0 * (1.0 + t2) / (w * w))
    raise DomainError(f"unknown ensemble {ensemble!r}")


def local_frequency(ensemble: EnsembleKind, t):
    """gamma(t) = (p'(t)/t + p''(t)) / 4 in simplified closed form.

    This is the squared scaling of the local zero density:
    SP gives (1+t^2)^-2, FAF and WP give 1, HAF gives (1-t^2)^-2.
    The composition out of ``growth_profile`` agrees to near machine
    precision, which the test-suite pins down; the closed forms are what
    ship because they are exact at t = 0 limits and cheaper.  t = 0 itself
    is rejected: the zero-density scaling is not defined there.
    """
    arr = np.asarray(t, dtype=float)
    if not np.all(np.isfinite(arr)):
        raise DomainError("t must be finite")
    if np.any(arr == 0.0):
        raise DomainError("local frequency is undefined at t = 0")
    if ensemble.domain_radius == 1.0 and not np.all(np.abs(arr) < 1.0):
        raise DomainError(f"{ensemble.value} local frequency requires |t| < 1")
    if ensemble is EnsembleKind.SP:
        out = (1.0 + arr * arr) ** -2.0
    elif ensemble in (EnsembleKind.FAF, EnsembleKind.WP):
        out = np.ones_like(arr)
    elif ensemble is EnsembleKind.HAF:
        out = (1.0 - arr * arr) ** -2.0
    else:
        raise DomainError(f"unknown ensemble {ensemble!r}")
    if np.ndim(t) == 0:
        return float(out)
    return out


def limit_density(ensemble: EnsembleKind, t):
    """Limiting real-zero density sqrt(gamma(t)) / pi.

    The expected zero count of F_n in [a, b] divided by sqrt(n) converges
    to the integral of this density over [a, b].
    """
    return np.sqrt(local_frequency(ensemble, t)) / math.pi


def domain_contains(ensemble: EnsembleKind, interval: IntervalSpec) -> bool:
    """True when [a, b] sits inside the ensemble's real domain minus 0.

    The origin is excluded because the sqrt(n) zero-density scaling
    degenerates there.  For HAF and WP the domain is (-1, 1); for SP and
    FAF it is all of R.
    """
    if interval.a <= 0.0 <= interval.b:
        return False
    r = ensemble.domain_radius
    if math.isfinite(r) and not (-r < interval.a and interval.b < r):
        return False
    return True


def validate_interval(ensemble: EnsembleKind, interval: IntervalSpec) -> None:
    """Raise DomainError unless ``domain_contains`` holds, with a reason."""
    if interval.a <= 0.0 <= interval.b:
        raise DomainError(
            f"interval [{interval.a}, {interval.b}] contains 0, where the "
            "zero-density scaling degenerates"
        )
    r = ensemble.domain_radius
    if math.isfinite(r) and not (-r < interval.a and interval.b < r):
        raise DomainError(
            f"interval [{interval.a}, {interval.b}] leaves the {ensemble.value} "
            f"real domain (-{r:g}, {r:g})"
        )


def expected_zero_rate(ensemble: EnsembleKind, interval: IntervalSpec) -> float:
    """Closed form of the limiting scaled zero count over [a, b].

    Integral of ``limit_density``: (arctan b - arctan a)/pi for SP,
    (b - a)/pi for FAF and WP, (artanh b - artanh a)/pi for HAF.
    """
    validate_interval(ensemble, interval)
    a, b = interval.a, interval.b
    if ensemble is EnsembleKind.SP:
        return (math.atan(b) - math.atan(a)) / math.pi
    if ensemble in (EnsembleKind.FAF, EnsembleKind.WP):
        return (b - a) / math.pi
    if ensemble is EnsembleKind.HAF:
        return (math.atanh(b) - math.atanh(a)) / math.pi
    raise DomainError(f"unknown ensemble {ensemble!r}")
