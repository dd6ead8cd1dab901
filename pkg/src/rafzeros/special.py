"""Low-level numerical kernels shared across the package.

Everything here is deliberately boring: compensated (Kahan) summation in
the shapes the evaluators need, a max-anchored log-sum-exp, and a classical
series / continued-fraction evaluation of the regularized upper incomplete
gamma function Q(s, x).  The incomplete gamma exists only as an independent
cross-check for the truncated-exponential variance identity; nothing on a
hot path calls it.
"""

from __future__ import annotations

import math

import numpy as np

__all__ = [
    "kahan_sum",
    "kahan_sum_rows",
    "kahan_dot",
    "log_sum_exp",
    "regularized_gamma_q",
]


def kahan_sum(values) -> float:
    """Compensated sum of a 1-D sequence, accumulated in the given order.

    Kahan-Babuska (Neumaier) variant: the compensation term is computed
    from whichever operand was larger, so it survives even when a new
    term dwarfs the running total -- the case where classic Kahan loses
    its correction (e.g. [1e16, 1.0, -1e16] must give 1.0, not 0.0).
    Heavy cancellation among the terms then leaves an error near machine
    epsilon instead of one growing with the term count.
    """
    total = 0.0
    comp = 0.0
    for term in np.asarray(values, dtype=float).tolist():
        t = total + term
        if abs(total) >= abs(term):
            comp += (total - t) + term
        else:
            comp += (term - t) + total
        total = t
    return total + comp


def kahan_sum_rows(terms: np.ndarray) -> np.ndarray:
    """Compensated column sums of a (K, T) term matrix.

    Iterates over the K term rows, carrying one Neumaier compensation
    value per column, so every output column receives the same
    accumulation ``kahan_sum`` would produce in row order.
    """
    terms = np.asarray(terms, dtype=float)
    if terms.ndim != 2:
        raise ValueError("kahan_sum_rows expects a 2-D array")
    total = np.zeros(terms.shape[1])
    comp = np.zeros(terms.shape[1])
    for row in terms:
        t = total + row
        comp += np.where(
            np.abs(total) >= np.abs(row), (total - t) + row, (row - t) + total
        )
        total = t
    return total + comp


def kahan_dot(weights: np.ndarray, basis: np.ndarray) -> np.ndarray:
    """Compensated matrix product sum_k weights[b, k] * basis[k, j].

    Equivalent to ``weights @ basis`` but accumulated over k with Kahan
    compensation, vectorized across the batch axis b.  Used to evaluate
    many independent coefficient draws against one set of basis columns.
    """
    weights = np.asarray(weights, dtype=float)
    basis = np.asarray(basis, dtype=float)
    if weights.ndim != 2 or basis.ndim != 2 or weights.shape[1] != basis.shape[0]:
        raise ValueError("kahan_dot expects (B, K) x (K, J)")
    nbatch, nterms = weights.shape
    total = np.zeros((nbatch, basis.shape[1]))
    comp = np.zeros_like(total)
    for k in range(nterms):
        term = weights[:, k, None] * basis[k, None, :]
        t = total + term
        comp += np.where(
            np.abs(total) >= np.abs(term), (total - t) + term, (term - t) + total
        )
        total = t
    return total + comp


def log_sum_exp(log_terms: np.ndarray, axis: int | None = None):
    """log(sum(exp(log_terms))) anchored at the largest term.

    Subtracting the max before exponentiating keeps every intermediate in
    range; an all ``-inf`` input returns ``-inf`` rather than NaN.
    """
    log_terms = np.asarray(log_terms, dtype=float)
    anchor = np.max(log_terms, axis=axis)
    anchor_safe = np.where(np.isfinite(anchor), anchor, 0.0)
    expanded = anchor_safe if axis is None else np.expand_dims(anchor_safe, axis)
    with np.errstate(invalid="ignore", divide="ignore"):
        out = anchor_safe + np.log(np.sum(np.exp(log_terms - expanded), axis=axis))
    if axis is None:
        return float(out) if np.isfinite(anchor) else float("-inf")
    return np.where(np.isfinite(anchor), out, float("-inf"))


# Iteration cap for the incomplete-gamma routines.  Convergence near x = s
# needs O(sqrt(s)) terms; the slack beyond that is free insurance.
_GAMMA_MAX_ITER = 20_000


def _gamma_q_series(s: float, x: float) -> float:
    # Lower-gamma power series, then Q = 1 - P.  Reliable for x < s + 1.
    ap = s
    term = 1.0 / s
    total = term
    for _ in range(_GAMMA_MAX_ITER):
        ap += 1.0
        term *= x / ap
        total += term
        if abs(term) < abs(total) * 1e-17:
            p = total * math.exp(-x + s * math.log(x) - math.lgamma(s))
            return 1.0 - p
    raise RuntimeError("incomplete gamma series failed to converge")


def _gamma_q_contfrac(s: float, x: float) -> float:
    # Modified Lentz evaluation of the upper-gamma continued fraction.
    tiny = 1e-300
    b = x + 1.0 - s
    c = 1.0 / tiny
    d = 1.0 / b if b != 0.0 else 1.0 / tiny
    h = d
    for i in range(1, _GAMMA_MAX_ITER):
        an = -i * (i - s)
        b += 2.0
        d = an * d + b
        if abs(d) < tiny:
            d = tiny
        c = b + an / c
        if abs(c) < tiny:
            c = tiny
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < 1e-17:
            return math.exp(-x + s * math.log(x) - math.lgamma(s)) * h
    raise RuntimeError("incomplete gamma continued fraction failed to converge")


def regularized_gamma_q(s: float, x: float) -> float:
    """Regularized upper incomplete gamma Q(s, x) = Gamma(s, x) / Gamma(s).

    Series branch below the x = s + 1 crossover, continued fraction above,
    following the standard split.  Relative accuracy is far better than the
    1e-8 this package ever relies on.
    """
    if s <= 0.0 or not math.isfinite(s):
        raise ValueError(f"require s > 0, got {s}")
    if x < 0.0 or not math.isfinite(x):
        raise ValueError(f"require x >= 0, got {x}")
    if x == 0.0:
        return 1.0
    if x < s + 1.0:
        return _gamma_q_series(s, x)
    return _gamma_q_contfrac(s, x)
