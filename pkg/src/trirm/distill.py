"""One round of magic-state distillation under depolarizing input noise.

Input noise is twirled to Z-type errors: each qudit independently carries no
error with probability ``1 - (p-1) delta / p`` and each ``Z**a`` (``a != 0``)
with probability ``delta / p``.  A pattern of weight ``j`` therefore has
probability ``(delta/p)**j (1 - (p-1) delta/p)**(n-j)``.  Patterns in
``PRM = G0^perp`` pass the X checks; those in ``SRM = G'^perp`` act trivially.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable

import numpy as np
from scipy.special import logsumexp

from .field_linalg import check_prime
from .triortho import WeightEnumerator


@dataclass(frozen=True)
class NoiseModel:
    p: int
    delta_in: float

    def __post_init__(self) -> None:
        check_prime(self.p)
        if not 0.0 <= self.delta_in <= 1.0:
            raise ValueError(f"depolarizing parameter {self.delta_in} outside [0, 1]")

    @property
    def error_rate(self) -> float:
        """Probability that a qudit carries some nontrivial Z power."""
        return (self.p - 1) * self.delta_in / self.p


@dataclass(frozen=True)
class DistillOutcome:
    delta_out: float
    accept_prob: float
    cost: float


def _log_pattern_probs(n: int, noise: NoiseModel) -> np.ndarray:
    j = np.arange(n + 1, dtype=np.float64)
    with np.errstate(divide="ignore"):
        return j * np.log(noise.delta_in / noise.p) + (n - j) * np.log1p(-noise.error_rate)


def _log_counts(counts: Iterable[int]) -> np.ndarray:
    return np.array([math.log(c) if c > 0 else -np.inf for c in counts])


def suppression_exact(enumerators: tuple[WeightEnumerator, WeightEnumerator], noise: NoiseModel) -> DistillOutcome:
    """Exact output error of a one-logical-qudit code from its PRM and SRM enumerators.

    ``delta_out = p/(p-1) * P(logical | accepted)`` and
    ``cost = n / (k * accept_prob)`` with ``k = 1``.
    """
    prm, srm = enumerators
    if not (isinstance(prm, WeightEnumerator) and isinstance(srm, WeightEnumerator)):
        raise TypeError("suppression_exact needs exact weight enumerators")
    if prm.n != srm.n or prm.p != srm.p or prm.p != noise.p:
        raise ValueError("enumerators and noise model disagree on n or p")
    if prm.dimension - srm.dimension != 1:
        raise ValueError("exact suppression curve is defined for k = 1 codes only")
    n, p = prm.n, prm.p
    logical = [b - a for b, a in zip(prm.coefficients, srm.coefficients)]
    if any(c < 0 for c in logical):
        raise ValueError("SRM enumerator is not dominated by the PRM enumerator")
    if noise.delta_in == 0.0:
        return DistillOutcome(0.0, 1.0, float(n))
    lq = _log_pattern_probs(n, noise)
    log_accept = logsumexp(_log_counts(prm.coefficients) + lq)
    log_bad = logsumexp(_log_counts(logical) + lq)
    accept = math.exp(log_accept)
    return DistillOutcome(p / (p - 1) * math.exp(log_bad - log_accept), accept, n / accept)


def suppression_estimate(n: int, k: int, d: int, A_d: int, noise: NoiseModel) -> DistillOutcome:
    """Leading-order average output error over the ``k`` outputs.

    ``delta_out = A_d delta**d (1 - (p-1)delta/p)**(n-d) / (n_T (p-1) p**(d-1))``
    with ``n_T = k (1 - (p-1)delta/p)**n`` expected outputs and cost ``n / n_T``.
    """
    if k < 1:
        raise ValueError("need k >= 1")
    p, delta = noise.p, noise.delta_in
    keep = 1 - noise.error_rate
    accept = keep**n
    if accept == 0:
        return DistillOutcome(math.inf, 0.0, math.inf)
    n_T = accept * k
    delta_out = A_d * delta**d * keep ** (n - d) / (n_T * (p - 1) * p ** (d - 1))
    return DistillOutcome(delta_out, accept, n / n_T)


def threshold(curve: Callable[[float], float], lo: float = 1e-3, hi: float = 0.999, tol: float = 1e-10) -> float | None:
    """Fixed point of ``delta -> curve(delta)`` in ``(lo, hi)`` by bisection.

    Returns None when ``curve(delta) - delta`` does not change sign on the bracket.
    """
    f_lo = curve(lo) - lo
    f_hi = curve(hi) - hi
    if f_lo == 0:
        return lo
    if f_hi == 0:
        return hi
    if (f_lo < 0) == (f_hi < 0):
        return None
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        f_mid = curve(mid) - mid
        if (f_mid < 0) == (f_lo < 0):
            lo, f_lo = mid, f_mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def concatenated_overhead(n: int, k: int, d: int, z: int) -> Fraction:
    """Noisy inputs per batch of ``k`` outputs after ``z`` rounds: ``n**z / k**(z-1)``."""
    if z < 1:
        raise ValueError("need z >= 1 rounds")
    if k < 1:
        raise ValueError("need k >= 1")
    return Fraction(n**z, k ** (z - 1))


def exact_curve(enumerators: tuple[WeightEnumerator, WeightEnumerator], p: int) -> Callable[[float], float]:
    return lambda delta: suppression_exact(enumerators, NoiseModel(p, delta)).delta_out


def estimate_curve(n: int, k: int, d: int, A_d: int, p: int) -> Callable[[float], float]:
    return lambda delta: suppression_estimate(n, k, d, A_d, NoiseModel(p, delta)).delta_out


@dataclass(frozen=True)
class Threshold:
    """Fixed point of the suppression map in both noise parametrizations.

    ``delta`` is the depolarizing weight; ``error_rate = (p-1) delta / p`` is
    the per-qudit probability of a nontrivial error, the axis on which
    distillation thresholds are customarily quoted.
    """

    p: int
    delta: float | None

    @property
    def error_rate(self) -> float | None:
        return None if self.delta is None else (self.p - 1) * self.delta / self.p


def code_threshold(curve: Callable[[float], float], p: int, **kw) -> Threshold:
    return Threshold(p, threshold(curve, **kw))


CURVE_HEADER = ("delta", "delta_out", "accept", "cost")


def curve_rows(outcome: Callable[[float], DistillOutcome], deltas: Iterable[float]) -> list[tuple[float, float, float, float]]:
    rows = []
    for delta in deltas:
        o = outcome(delta)
        rows.append((delta, o.delta_out, o.accept_prob, o.cost))
    return rows


def curve_csv(rows) -> str:
    lines = [",".join(CURVE_HEADER)]
    lines += [",".join(f"{v:.10g}" for v in row) for row in rows]
    return "\n".join(lines) + "\n"
