"""Truncated log-space evaluation of normalized random functions.

The object evaluated everywhere downstream is the variance-normalized
function

    S_n(t) = F_n(t) / sqrt(v_n(t))
           = sum_k a_{n,k}(t) xi_k,   a_{n,k}(t) = f_{n,k} |t|^k sgn(t)^k / sqrt(v_n(t)),

whose deterministic profile a_{n,k}(t)^2 sums to one over k: it is a
probability mass function in k (binomial for SP, Poisson for FAF,
negative binomial for HAF, a degree-capped Poisson for WP).  Truncation
rides on that: the series is cut where the mass tail at the largest
evaluation radius drops below a caller-chosen epsilon, certified by a
direct log-space tail sum rather than trusted from a normal
approximation.

Every term is assembled in log space (log-gamma based weights, log |t|,
log coefficient magnitude) and exponentiated once, so n in the millions
cannot overflow; terms carry magnitude at most |xi_k|.  Sums over k use
compensated summation: near a zero of S_n the terms cancel almost
completely, and naive accumulation would leak O(K) ulps into exactly the
quantity the zero counter inspects.

The small-window limit object is also here: the unit-variance Gaussian
process

    Z_gamma(u) = exp(-gamma u^2 / 2) sum_k zeta_k gamma^{k/2} u^k / sqrt(k!)

with i.i.d. standard normal zeta_k and covariance
exp(-gamma (u - u')^2 / 2).  Rescaled windows of S_n converge to it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.special import gammaln

from .ensembles import (
    DomainError,
    EnsembleKind,
    NumericalError,
    log_variance,
    log_weight_array,
)
from .sampling import CoeffDistribution, TrialStream, draw_coeffs
from .special import kahan_sum_rows

__all__ = [
    "SampleFunction",
    "LimitProcessSample",
    "truncation_order",
    "limit_truncation_order",
    "make_sample",
    "make_limit_sample",
    "eval_normalized",
    "eval_limit_process",
    "basis_matrix",
]

# Default mass-tail budget for truncation certificates.
DEFAULT_TAIL_EPS = 1e-16

# Hard ceiling on explicit tail-sum length; hit only by absurd inputs.
_TAIL_SUM_MAX_TERMS = 10_000_000


def _mass_mean_var(ensemble: EnsembleKind, n: int, t_max: float) -> tuple[float, float]:
    """Mean and variance of the squared-mass index distribution at t_max."""
    x = n * t_max * t_max
    if ensemble is EnsembleKind.FAF:
        return x, x  # Poisson(n t^2)
    if ensemble is EnsembleKind.HAF:
        q = 1.0 - t_max * t_max  # negative binomial, success prob q
        return x / q, x / (q * q)
    raise DomainError(f"no open-ended mass distribution for {ensemble.value}")


def _log_mass(ensemble: EnsembleKind, n: int, t_max: float, k: int) -> float:
    """log a_{n,k}(t_max)^2 for the open-ended families."""
    x = n * t_max * t_max
    if ensemble is EnsembleKind.FAF:
        return -x + k * math.log(x) - math.lgamma(k + 1)
    # HAF
    t2 = t_max * t_max
    return (
        math.lgamma(n + k)
        - math.lgamma(k + 1)
        - math.lgamma(n)
        + n * math.log1p(-t2)
        + k * math.log(t2)
    )


def _mass_ratio(ensemble: EnsembleKind, n: int, t_max: float, k: int) -> float:
    """mass(k+1) / mass(k); strictly decreasing in k for both families."""
    if ensemble is EnsembleKind.FAF:
        return (n * t_max * t_max) / (k + 1.0)
    return (n + k) / (k + 1.0) * (t_max * t_max)


def _log_tail_mass(ensemble: EnsembleKind, n: int, t_max: float, start: int) -> float:
    """log sum_{k >= start} a_{n,k}(t_max)^2, as a certified upper bound.

    Terms are summed explicitly relative to the first one; once the term
    ratio has dropped below one and the running term is negligible, the
    remaining tail is dominated by a geometric series and added as a
    closed-form bound.  The result therefore over-counts, never under.
    """
    anchor = _log_mass(ensemble, n, t_max, start)
    total_rel = 1.0
    term_rel = 1.0
    k = start
    while True:
        r = _mass_ratio(ensemble, n, t_max, k)
        if r < 1.0 and term_rel <= total_rel * 1e-18:
            # geometric bound on everything past k, ratios only shrink
            total_rel += term_rel * r / (1.0 - r)
            break
        term_rel *= r
        total_rel += term_rel
        k += 1
        if k - start > _TAIL_SUM_MAX_TERMS:
            raise NumericalError("tail certification exceeded iteration budget")
    return anchor + math.log(total_rel)


def truncation_order(
    ensemble: EnsembleKind,
    n: int,
    t_max: float,
    tail_eps: float = DEFAULT_TAIL_EPS,
) -> int:
    """Number of series terms needed on |t| <= t_max.

    SP and WP are exact polynomials: always n + 1 terms.  FAF and HAF cut
    at K = ceil(mean + c sqrt(var)) + 1 of the index mass distribution at
    t_max, with c grown until the certified tail sum beyond K - 1 falls
    below tail_eps.  Larger |t| only thickens the tail, so certifying at
    t_max covers the whole interval.
    """
    if n < 1:
        raise DomainError(f"n must be >= 1, got {n}")
    if not (t_max > 0.0 and math.isfinite(t_max)):
        raise DomainError(f"t_max must be positive and finite, got {t_max}")
    if not (0.0 < tail_eps < 1.0):
        raise DomainError(f"tail_eps must lie in (0, 1), got {tail_eps}")
    if ensemble in (EnsembleKind.SP, EnsembleKind.WP):
        return n + 1
    if ensemble is EnsembleKind.HAF and t_max >= 1.0:
        raise DomainError(f"HAF requires t_max < 1, got {t_max}")
    mean, var = _mass_mean_var(ensemble, n, t_max)
    sigma = math.sqrt(var)
    log_budget = math.log(tail_eps)
    for c in range(1, 65):
        k_cut = int(math.ceil(mean + c * sigma)) + 1
        if _log_tail_mass(ensemble, n, t_max, k_cut) < log_budget:
            return k_cut
    # concentrated-mass corner (n t_max^2 tiny): sigma steps cannot advance
    # the cut even though the tail decays geometrically; walk k directly
    k_cut = int(math.ceil(mean + 64.0 * sigma)) + 1
    for _ in range(10_000):
        k_cut += 1
        if _log_tail_mass(ensemble, n, t_max, k_cut) < log_budget:
            return k_cut
    raise NumericalError(
        f"could not certify a truncation for {ensemble.value} n={n} t_max={t_max}"
    )


@dataclass(frozen=True, eq=False)
class SampleFunction:
    """One realization of S_n: a coefficient vector plus its evaluation data.

    ``coeffs`` holds the first ``truncation_k`` raw coefficients xi_k.  The
    truncation is certified on |t| <= t_max only, and evaluation refuses
    points beyond that radius rather than silently degrading.
    """

    ensemble: EnsembleKind
    n: int
    truncation_k: int
    coeffs: np.ndarray
    t_max: float
    # caches: indices of nonzero coefficients, their log-magnitude terms
    # (log f_{n,k} + log |xi_k|), signs, and parity signs for t < 0
    _ks: np.ndarray = field(init=False, repr=False, default=None)  # type: ignore[assignment]
    _log_mag: np.ndarray = field(init=False, repr=False, default=None)  # type: ignore[assignment]
    _sign: np.ndarray = field(init=False, repr=False, default=None)  # type: ignore[assignment]
    _parity: np.ndarray = field(init=False, repr=False, default=None)  # type: ignore[assignment]

    def __post_init__(self) -> None:
        coeffs = np.asarray(self.coeffs, dtype=float)
        if coeffs.ndim != 1 or coeffs.shape[0] != self.truncation_k:
            raise DomainError("coeffs must be 1-D with length truncation_k")
        if not np.all(np.isfinite(coeffs)):
            raise DomainError("coefficients must be finite")
        if self.truncation_k < 1:
            raise DomainError("truncation_k must be >= 1")
        if self.ensemble.finite_degree and self.truncation_k != self.n + 1:
            raise DomainError(
                f"{self.ensemble.value} samples carry exactly n+1 coefficients"
            )
        if not (self.t_max > 0.0 and math.isfinite(self.t_max)):
            raise DomainError(f"t_max must be positive and finite, got {self.t_max}")
        if self.ensemble is EnsembleKind.HAF and self.t_max >= 1.0:
            raise DomainError("HAF samples require t_max < 1")
        object.__setattr__(self, "coeffs", coeffs)
        nz = np.flatnonzero(coeffs)
        logw = log_weight_array(self.ensemble, self.n, self.truncation_k)
        object.__setattr__(self, "_ks", nz.astype(float))
        object.__setattr__(self, "_log_mag", logw[nz] + np.log(np.abs(coeffs[nz])))
        object.__setattr__(self, "_sign", np.sign(coeffs[nz]))
        object.__setattr__(self, "_parity", 1.0 - 2.0 * (nz.astype(float) % 2.0))


# Column-block size bound for the (K, T) term matrices, in entries.
_EVAL_BLOCK_ENTRIES = 4_000_000


def _masked_term_sum(
    log_mag: np.ndarray,
    ks: np.ndarray,
    signs: np.ndarray,
    parity: np.ndarray,
    points: np.ndarray,
    log_norm: np.ndarray,
) -> np.ndarray:
    """Compensated sum over k of sign * exp(log_mag + k log|t| - log_norm).

    ``points`` must be nonzero.  Column-blocked to bound peak memory.
    """
    out = np.empty(points.shape)
    nk = max(1, log_mag.size)
    block = max(1, _EVAL_BLOCK_ENTRIES // nk)
    for lo in range(0, points.size, block):
        tt = points[lo : lo + block]
        logs = (
            log_mag[:, None]
            + ks[:, None] * np.log(np.abs(tt))[None, :]
            - log_norm[lo : lo + block][None, :]
        )
        terms = np.exp(logs)
        terms *= signs[:, None]
        neg = tt < 0.0
        if np.any(neg):
            terms[:, neg] *= parity[:, None]
        out[lo : lo + block] = kahan_sum_rows(terms)
    return out


def eval_normalized(sample: SampleFunction, t):
    """S_n(t) for scalar or array t with |t| <= t_max.

    Per-term log-space assembly with explicit sign handling, compensated
    summation over k.  At t = 0 the value is xi_0 exactly (every family
    has unit weight at k = 0 and unit variance at the origin).
    """
    arr = np.atleast_1d(np.asarray(t, dtype=float))
    if not np.all(np.isfinite(arr)):
        raise DomainError("evaluation points must be finite")
    # hair of slack so interval endpoints survive round-trip arithmetic
    if np.any(np.abs(arr) > sample.t_max * (1.0 + 1e-12)):
        raise DomainError(
            f"evaluation beyond certified radius t_max={sample.t_max}"
        )
    flat = arr.ravel()
    out = np.empty(flat.shape)
    zero = flat == 0.0
    live = ~zero
    if np.any(live):
        pts = flat[live]
        log_norm = 0.5 * np.asarray(
            log_variance(sample.ensemble, sample.n, pts), dtype=float
        )
        out[live] = _masked_term_sum(
            sample._log_mag, sample._ks, sample._sign, sample._parity, pts, log_norm
        )
    if np.any(zero):
        out[zero] = sample.coeffs[0]
    if not np.all(np.isfinite(out)):
        raise NumericalError("evaluation produced non-finite values")
    out = out.reshape(arr.shape)
    if np.ndim(t) == 0:
        return float(out[0])
    return out


def basis_matrix(ensemble: EnsembleKind, n: int, count: int, points) -> np.ndarray:
    """Deterministic term profiles a_{n,k}(t): a (count, len(points)) matrix.

    Column j holds a_{n,k}(points[j]) for k = 0 .. count-1, signs included,
    so that S_n(points) = compensated-dot(coefficients, matrix).  Used by
    batched estimators that pair one basis with many coefficient draws.
    """
    pts = np.atleast_1d(np.asarray(points, dtype=float))
    if pts.ndim != 1:
        raise DomainError("points must be a scalar or 1-D array")
    if not np.all(np.isfinite(pts)):
        raise DomainError("points must be finite")
    logw = log_weight_array(ensemble, n, count)
    ks = np.arange(count, dtype=float)
    log_norm = 0.5 * np.asarray(log_variance(ensemble, n, pts), dtype=float)
    out = np.empty((count, pts.size))
    zero = pts == 0.0
    live = ~zero
    if np.any(live):
        tt = pts[live]
        logs = logw[:, None] + ks[:, None] * np.log(np.abs(tt))[None, :]
        logs -= log_norm[live][None, :]
        vals = np.exp(logs)
        neg = tt < 0.0
        if np.any(neg):
            parity = 1.0 - 2.0 * (np.arange(count) % 2.0)
            vals[:, neg] *= parity[:, None]
        out[:, live] = vals
    if np.any(zero):
        col = np.zeros(count)
        col[0] = 1.0
        out[:, zero] = col[:, None]
    return out


# ---------------------------------------------------------------------------
# small-window Gaussian limit process
# ---------------------------------------------------------------------------

# Squared-term budget for the limit-process series cut.
_LIMIT_LOG_BUDGET = math.log(1e-26)


def limit_truncation_order(gamma: float, u_max: float) -> int:
    """Series length for Z_gamma on |u| <= u_max.

    Smallest K past the term mode with gamma^K u_max^{2K} / K! below the
    squared budget 1e-26, plus a 10 sqrt(log K) bump covering the slowly
    growing magnitudes of the Gaussian coefficients.  The truncated tail
    contributes below 1e-12 in RMS.
    """
    if not (gamma > 0.0 and math.isfinite(gamma)):
        raise DomainError(f"gamma must be positive and finite, got {gamma}")
    if not (u_max > 0.0 and math.isfinite(u_max)):
        raise DomainError(f"u_max must be positive and finite, got {u_max}")
    x = gamma * u_max * u_max
    k = max(8, int(math.ceil(x)))
    while k * math.log(x) - math.lgamma(k + 1) >= _LIMIT_LOG_BUDGET:
        k += 1
        if k > _TAIL_SUM_MAX_TERMS:
            raise NumericalError("limit-process truncation failed to certify")
    return k + int(math.ceil(10.0 * math.sqrt(math.log(k))))


@dataclass(frozen=True, eq=False)
class LimitProcessSample:
    """One realization of Z_gamma, truncated for |u| <= u_max."""

    gamma: float
    truncation_k: int
    coeffs: np.ndarray
    u_max: float
    _ks: np.ndarray = field(init=False, repr=False, default=None)  # type: ignore[assignment]
    _log_mag: np.ndarray = field(init=False, repr=False, default=None)  # type: ignore[assignment]
    _sign: np.ndarray = field(init=False, repr=False, default=None)  # type: ignore[assignment]
    _parity: np.ndarray = field(init=False, repr=False, default=None)  # type: ignore[assignment]

    def __post_init__(self) -> None:
        if not (self.gamma > 0.0 and math.isfinite(self.gamma)):
            raise DomainError(f"gamma must be positive and finite, got {self.gamma}")
        if not (self.u_max > 0.0 and math.isfinite(self.u_max)):
            raise DomainError(f"u_max must be positive and finite, got {self.u_max}")
        coeffs = np.asarray(self.coeffs, dtype=float)
        if coeffs.ndim != 1 or coeffs.shape[0] != self.truncation_k:
            raise DomainError("coeffs must be 1-D with length truncation_k")
        if not np.all(np.isfinite(coeffs)):
            raise DomainError("coefficients must be finite")
        object.__setattr__(self, "coeffs", coeffs)
        nz = np.flatnonzero(coeffs)
        ks = nz.astype(float)
        log_term = 0.5 * (ks * math.log(self.gamma) - gammaln(ks + 1.0))
        object.__setattr__(self, "_ks", ks)
        object.__setattr__(self, "_log_mag", log_term + np.log(np.abs(coeffs[nz])))
        object.__setattr__(self, "_sign", np.sign(coeffs[nz]))
        object.__setattr__(self, "_parity", 1.0 - 2.0 * (nz.astype(float) % 2.0))


def eval_limit_process(sample: LimitProcessSample, u):
    """Z_gamma(u) for scalar or array u with |u| <= u_max.

    Same log-space term assembly as ``eval_normalized``; the Gaussian
    envelope exp(-gamma u^2 / 2) multiplies the compensated sum.  Z(0) is
    the zeroth coefficient exactly.
    """
    arr = np.atleast_1d(np.asarray(u, dtype=float))
    if not np.all(np.isfinite(arr)):
        raise DomainError("evaluation points must be finite")
    if np.any(np.abs(arr) > sample.u_max * (1.0 + 1e-12)):
        raise DomainError(f"evaluation beyond certified radius u_max={sample.u_max}")
    flat = arr.ravel()
    out = np.empty(flat.shape)
    zero = flat == 0.0
    live = ~zero
    if np.any(live):
        pts = flat[live]
        log_norm = np.zeros(pts.shape)
        raw = _masked_term_sum(
            sample._log_mag, sample._ks, sample._sign, sample._parity, pts, log_norm
        )
        out[live] = raw * np.exp(-0.5 * sample.gamma * pts * pts)
    if np.any(zero):
        out[zero] = sample.coeffs[0]
    if not np.all(np.isfinite(out)):
        raise NumericalError("evaluation produced non-finite values")
    out = out.reshape(arr.shape)
    if np.ndim(u) == 0:
        return float(out[0])
    return out


def make_sample(
    ensemble: EnsembleKind,
    n: int,
    stream: TrialStream,
    t_max: float,
    tail_eps: float = DEFAULT_TAIL_EPS,
) -> SampleFunction:
    """Draw one S_n realization: certify a truncation, then draw coefficients."""
    k_cut = truncation_order(ensemble, n, t_max, tail_eps)
    coeffs = draw_coeffs(stream, k_cut)
    return SampleFunction(ensemble, n, k_cut, coeffs, float(t_max))


def make_limit_sample(
    gamma: float,
    master_seed: int,
    trial_index: int,
    u_max: float,
) -> LimitProcessSample:
    """Draw one Z_gamma realization; coefficients are always standard normal."""
    k_cut = limit_truncation_order(gamma, u_max)
    stream = TrialStream(master_seed, trial_index, CoeffDistribution.gaussian())
    coeffs = draw_coeffs(stream, k_cut)
    return LimitProcessSample(float(gamma), k_cut, coeffs, float(u_max))
