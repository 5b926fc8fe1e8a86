"""Large-m growth rates of p-nomial coefficients and the resulting yield.

``H_p(theta) = lim (1/m) log_p pnomial(m, theta m, p)`` is evaluated through the
saddle point ``xi`` of ``(1 + z + ... + z**(p-1))**m / z**(theta m)``.  That
saddle solves ``mean_xi(i) = theta`` for the distribution ``xi**i`` on
``{0, .., p-1}``, which is how it is computed here (in ``u = ln xi``).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq, minimize_scalar
from scipy.special import logsumexp

from .field_linalg import check_prime
from .pnomial import delta_distance, pnomial_gt, pnomial_le
from .reedmuller import r_max
from .report import Certainty, CodeReport

TOL = 1e-12


@dataclass(frozen=True)
class AsymptoticPoint:
    p: int
    theta: float
    xi: float
    H: float
    gamma0: float | None = None

    @property
    def t(self) -> float:
        return self.theta / (self.p - 1)


@dataclass(frozen=True)
class LargePPoint:
    t: float
    xi1: float
    Hhat: float
    p: float


def _check_theta(p: int, theta: float, upper: float | None = None) -> None:
    upper = p - 1 if upper is None else upper
    if not 0 < theta < upper:
        raise ValueError(f"theta={theta} outside (0, {upper}) for p={p}")


def _mean_and_var(p: int, u: float) -> tuple[float, float]:
    i = np.arange(p, dtype=np.float64)
    logw = i * u
    w = np.exp(logw - logw.max())
    w /= w.sum()
    mean = float(i @ w)
    return mean, float(((i - mean) ** 2) @ w)


def theta_of_xi(p: int, xi: float) -> float:
    """Left side of the saddle-point equation, ``sum i xi**i / sum xi**i``."""
    return _mean_and_var(p, math.log(xi))[0]


def _solve_u(p: int, theta: float, tol: float) -> float:
    lo, hi = -1.0, 1.0
    while _mean_and_var(p, lo)[0] > theta:
        lo *= 2
    while _mean_and_var(p, hi)[0] < theta:
        hi *= 2
    while hi - lo > 1e-6:
        mid = 0.5 * (lo + hi)
        if _mean_and_var(p, mid)[0] < theta:
            lo = mid
        else:
            hi = mid
    u = 0.5 * (lo + hi)
    # Newton polish; d theta / du is the variance
    for _ in range(50):
        mean, var = _mean_and_var(p, u)
        step = (mean - theta) / var
        u -= step
        if abs(step) < tol:
            break
    return u


def solve_xi(p: int, theta: float, tol: float = TOL) -> float:
    """Dominant saddle ``xi > 0`` for Manhattan-weight fraction ``theta``."""
    p = check_prime(p)
    _check_theta(p, theta)
    return math.exp(_solve_u(p, theta, tol))


def entropy_H(p: int, theta: float, tol: float = TOL) -> float:
    """``log_p((xi**p - 1)/(xi - 1)) - theta log_p(xi)``."""
    p = check_prime(p)
    _check_theta(p, theta)
    u = _solve_u(p, theta, tol)
    return float((logsumexp(np.arange(p) * u) - theta * u) / math.log(p))


def asymptotic_point(p: int, theta: float) -> AsymptoticPoint:
    xi = solve_xi(p, theta)
    g = gamma0(p, theta) if theta < (p - 1) / 3 else None
    return AsymptoticPoint(p, theta, xi, entropy_H(p, theta), g)


def gamma0(p: int, theta: float) -> float:
    """Asymptotic yield of Manhattan puncturing with ``w = theta m``, ``m = 3 alpha``."""
    p = check_prime(p)
    _check_theta(p, theta, (p - 1) / 3)
    top = 3 * (1 - entropy_H(p, theta))
    if theta <= (p - 1) / 6:
        return top
    return top / entropy_H(p, 3 * theta)


def optimize_gamma0(p: int, tol: float = 1e-10) -> tuple[float, float]:
    """Minimum of ``gamma0`` over ``theta``; returns ``(gamma0_min, t0)`` with ``t0 = theta0/(p-1)``.

    The lower branch decreases in ``theta`` so the minimum lies on the upper
    branch, where a bounded scalar minimization is run; both interval ends
    are checked as well.
    """
    p = check_prime(p)
    lo, hi = (p - 1) / 6, (p - 1) / 3 * (1 - 1e-9)
    res = minimize_scalar(lambda th: gamma0(p, th), bounds=(lo, hi), method="bounded",
                          options={"xatol": tol * (p - 1)})
    best_theta, best = float(res.x), float(res.fun)
    for th in (lo, hi):
        g = gamma0(p, th)
        if g < best:
            best_theta, best = th, g
    return best, best_theta / (p - 1)


# -- large p -------------------------------------------------------------------

def _t_of_xi1(x: float) -> float:
    # t = 1 - 1/x + 1/(e^x - 1), removable singularity at x = 0
    if abs(x) < 1e-4:
        return 0.5 + x / 12 - x**3 / 720
    if x > 40:
        return 1 - 1 / x + math.exp(-x) / (1 - math.exp(-x))
    return 1 - 1 / x + 1 / math.expm1(x)


def solve_xi1(t: float, tol: float = TOL) -> float:
    """Unique real ``xi1`` with ``t = 1 - 1/xi1 + 1/(exp(xi1) - 1)``."""
    if not 0 < t < 1:
        raise ValueError(f"t={t} outside (0, 1)")
    if t == 0.5:
        return 0.0
    lo, hi = -2.0 / t - 10, 2.0 / (1 - t) + 10
    return float(brentq(lambda x: _t_of_xi1(x) - t, lo, hi, xtol=tol, rtol=4 * np.finfo(float).eps))


def _hhat_numerator(x: float) -> float:
    # 1 - x e^x/(e^x - 1) + ln((e^x - 1)/x)
    if abs(x) < 1e-8:
        return 0.0
    return 1 - x / -math.expm1(-x) + math.log(math.expm1(x) / x)


def large_p_point(t: float, p: float) -> LargePPoint:
    x = solve_xi1(t)
    return LargePPoint(t, x, 1 + _hhat_numerator(x) / math.log(p), p)


def large_p_constant(t: float = 1 / 6) -> float:
    """``c`` in ``gamma_p(t) ~ c / ln p``, i.e. ``-3 * (Hhat - 1) * ln p``."""
    return -3 * _hhat_numerator(solve_xi1(t))


def gamma_large_p(p: float) -> float:
    """Large-p yield at ``t = 1/6``: ``c / ln p`` with ``c`` recomputed from ``xi1(1/6)``."""
    if p < 2:
        raise ValueError("p must be >= 2")
    return large_p_constant() / math.log(p)


def primes(count: int) -> list[int]:
    out: list[int] = []
    c = 2
    while len(out) < count:
        if all(c % q for q in out if q * q <= c):
            out.append(c)
        c += 1
    return out


def large_p_gap(p: int) -> float:
    """Relative gap between ``gamma0(p, (p-1)/6) ln p`` and the large-p constant."""
    c = large_p_constant()
    return abs(gamma0(p, (p - 1) / 6) * math.log(p) - c) / c


# -- finite codes ----------------------------------------------------------------

@dataclass(frozen=True)
class ScanEntry:
    p: int
    m: int
    r: int
    w: int
    n: int
    k: int
    d: int

    @property
    def gamma(self) -> float:
        return (math.log(self.n) - math.log(self.k)) / math.log(self.d)

    def report(self) -> CodeReport:
        return CodeReport(
            p=self.p, n=self.n, k=self.k, d=self.d, certainty=Certainty.EXACT,
            provenance={"construction": "manhattan-puncture", "m": self.m, "r": self.r, "w": self.w},
        )


def manhattan_code(p: int, m: int, w: int, r: int | None = None) -> ScanEntry | None:
    """Parameters of RM_p(r, m) punctured on the Manhattan ball of radius ``w``.

    Returns None when the construction's hypotheses fail.
    """
    r = r_max(p, m) if r is None else r
    top = m * (p - 1)
    if not (3 * r < top and 0 <= w < top - r):
        return None
    if delta_distance(m, r, w, p) == 0:
        return None
    d = delta_distance(m, top - r - 1, w, p)
    return ScanEntry(p, m, r, w, pnomial_gt(m, w, p), pnomial_le(m, w, p), d)


def smallest_code_scan(p: int, n_limit: int = 10**24, patience: int = 4) -> ScanEntry | None:
    """Smallest-``n`` Manhattan-punctured code with ``gamma < 1``.

    Scans ``m = 1, 2, ...`` with ``r = r_max(m)`` over every admissible ``w``.
    Stops once the smallest attainable ``n`` at ``m`` (the largest admissible
    ``w``) has exceeded the best hit, or ``n_limit``, for ``patience``
    consecutive ``m``.  Returns None if nothing is found.
    """
    p = check_prime(p)
    best: ScanEntry | None = None
    misses = 0
    m = 0
    while misses < patience:
        m += 1
        r = r_max(p, m)
        if r < 0:
            continue
        w_top = m * (p - 1) - r - 1
        if w_top < 0:
            continue
        floor_n = pnomial_gt(m, w_top, p)
        bound = min(n_limit, best.n if best else n_limit)
        if floor_n > bound:
            misses += 1
            continue
        misses = 0
        for w in range(w_top, -1, -1):
            e = manhattan_code(p, m, w, r)
            if e is None or e.d < 2 or e.n > bound:
                if e is not None and e.n > bound:
                    break
                continue
            if e.n < e.k * e.d and (best is None or e.n < best.n):
                best = e
                bound = e.n
    return best
