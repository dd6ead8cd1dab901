"""Reproducible coefficient sampling.

Every Monte Carlo trial owns an independent random stream addressed by
(master_seed, trial_index).  The stream seed is a strong 64-bit hash of
that pair (a splitmix64 finalizer over a golden-ratio indexed state), so
streams can be created in any order, on any worker, and still produce
bit-identical draws.  Nothing is ever drawn from a shared generator.

Coefficient laws are restricted to mean zero and unit variance, which is
all the limit theory asks of them:

    rademacher      +-1 with probability 1/2 each
    gaussian        standard normal
    uniform         uniform on [-sqrt(3), sqrt(3)]
    two_point(p)    sqrt((1-p)/p) w.p. p, -sqrt(p/(1-p)) w.p. 1-p
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .ensembles import DomainError

__all__ = [
    "CoeffDistribution",
    "TrialStream",
    "stream_seed",
    "draw_coeffs",
]

_MASK64 = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15


def _finalize64(x: int) -> int:
    # splitmix64 output stage: full-avalanche 64-bit mixer
    x &= _MASK64
    x = ((x ^ (x >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    x = ((x ^ (x >> 27)) * 0x94D049BB133111EB) & _MASK64
    return x ^ (x >> 31)


def stream_seed(master_seed: int, trial_index: int) -> int:
    """64-bit stream seed for trial ``trial_index`` under ``master_seed``.

    Splitmix64 applied to the state master_seed + (trial_index+1) * golden;
    a pure function of the pair, independent of creation order.
    """
    if not 0 <= master_seed < (1 << 64):
        raise DomainError(f"master_seed must lie in [0, 2^64), got {master_seed}")
    if trial_index < 0:
        raise DomainError(f"trial_index must be >= 0, got {trial_index}")
    state = (master_seed + (trial_index + 1) * _GOLDEN) & _MASK64
    return _finalize64(state)


_KINDS = ("rademacher", "gaussian", "uniform", "two_point")


@dataclass(frozen=True)
class CoeffDistribution:
    """A mean-zero unit-variance coefficient law, identified by name.

    ``two_point`` carries its asymmetry parameter p in (0, 1); the other
    kinds take no parameter.  ``label()`` round-trips through ``parse``.
    """

    kind: str
    p: float | None = None

    def __post_init__(self) -> None:
        if self.kind not in _KINDS:
            raise DomainError(f"unknown coefficient distribution {self.kind!r}")
        if self.kind == "two_point":
            if self.p is None or not (0.0 < self.p < 1.0):
                raise DomainError(f"two_point requires 0 < p < 1, got {self.p!r}")
        elif self.p is not None:
            raise DomainError(f"{self.kind} takes no parameter")

    @classmethod
    def rademacher(cls) -> "CoeffDistribution":
        return cls("rademacher")

    @classmethod
    def gaussian(cls) -> "CoeffDistribution":
        return cls("gaussian")

    @classmethod
    def uniform_centered(cls) -> "CoeffDistribution":
        return cls("uniform")

    @classmethod
    def two_point(cls, p: float) -> "CoeffDistribution":
        return cls("two_point", float(p))

    def label(self) -> str:
        if self.kind == "two_point":
            return f"two_point({self.p!r})"
        return self.kind

    @classmethod
    def parse(cls, text: str) -> "CoeffDistribution":
        """Inverse of ``label``: 'gaussian', 'two_point(0.2)', etc."""
        text = text.strip()
        if text.startswith("two_point(") and text.endswith(")"):
            body = text[len("two_point(") : -1]
            try:
                return cls.two_point(float(body))
            except ValueError as exc:
                raise DomainError(f"bad two_point parameter {body!r}") from exc
        if text in ("rademacher", "gaussian", "uniform"):
            return cls(text)
        raise DomainError(
            f"unknown coefficient distribution {text!r}; expected one of "
            "rademacher, gaussian, uniform, two_point(p)"
        )


@dataclass(frozen=True)
class TrialStream:
    """Address of one trial's random stream plus its coefficient law."""

    master_seed: int
    trial_index: int
    distribution: CoeffDistribution

    def __post_init__(self) -> None:
        # validates ranges as a side effect
        stream_seed(self.master_seed, self.trial_index)

    def generator(self) -> np.random.Generator:
        """Fresh generator positioned at the start of this stream."""
        return np.random.Generator(np.random.PCG64(stream_seed(self.master_seed, self.trial_index)))


def draw_coeffs(stream: TrialStream, count: int) -> np.ndarray:
    """The first ``count`` coefficients of the stream, as float64.

    Deterministic in (master_seed, trial_index, distribution, count), and
    prefix-consistent: growing ``count`` extends the sequence without
    changing earlier values, because each law consumes generator output
    element by element.
    """
    if count < 0:
        raise DomainError(f"count must be >= 0, got {count}")
    rng = stream.generator()
    dist = stream.distribution
    if dist.kind == "gaussian":
        return rng.standard_normal(count)
    if dist.kind == "rademacher":
        return 2.0 * rng.integers(0, 2, size=count).astype(float) - 1.0
    if dist.kind == "uniform":
        half = math.sqrt(3.0)
        return rng.uniform(-half, half, size=count)
    # two_point(p)
    p = float(dist.p)  # type: ignore[arg-type]
    hi = math.sqrt((1.0 - p) / p)
    lo = -math.sqrt(p / (1.0 - p))
    return np.where(rng.random(count) < p, hi, lo)
