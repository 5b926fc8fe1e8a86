"""Exact p-nomial combinatorics and the punctured Reed-Muller distance formula.

``pnomial(m, s, p)`` is the coefficient of ``x**s`` in ``(1 + x + ... + x**(p-1))**m``,
i.e. the number of points of F_p^m whose Manhattan weight (coordinates read
as integers ``0..p-1`` and summed) equals ``s``.  Everything here is exact
Python integer arithmetic.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass
from enum import Enum

from .field_linalg import check_prime

_rows_lock = threading.Lock()
_rows: dict[int, list[tuple[int, ...]]] = {}
_prefix: dict[tuple[int, int], tuple[int, ...]] = {}


def _row(m: int, p: int) -> tuple[int, ...]:
    if m < 0:
        raise ValueError(f"m must be non-negative, got {m}")
    with _rows_lock:
        rows = _rows.setdefault(p, [(1,)])
        while len(rows) <= m:
            prev = rows[-1]
            # generalized Pascal rule as a sliding window of width p
            out = []
            window = 0
            for s in range(len(prev) + p - 1):
                if s < len(prev):
                    window += prev[s]
                if s - p >= 0:
                    window -= prev[s - p]
                out.append(window)
            rows.append(tuple(out))
        return rows[m]


def pnomial_row(m: int, p: int) -> tuple[int, ...]:
    """All coefficients ``pnomial(m, s, p)`` for ``s = 0 .. m(p-1)``."""
    return _row(m, check_prime(p))


def pnomial(m: int, s: int, p: int) -> int:
    row = pnomial_row(m, p)
    if s < 0 or s >= len(row):
        return 0
    return row[s]


def pnomial_series(s: int, p: int, m_max: int) -> list[int]:
    """``[pnomial(m, s, p) for m in 0..m_max]`` from rows truncated at degree ``s``.

    Avoids building (and caching) full rows when only one coefficient is needed.
    """
    p = check_prime(p)
    if s < 0:
        return [0] * (m_max + 1)
    row = [1] + [0] * s
    out = [row[s]]
    for _ in range(m_max):
        nxt = [0] * (s + 1)
        window = 0
        for j in range(s + 1):
            window += row[j]
            if j >= p:
                window -= row[j - p]
            nxt[j] = window
        row = nxt
        out.append(row[s])
    return out


def _prefix_sums(m: int, p: int) -> tuple[int, ...]:
    key = (m, p)
    got = _prefix.get(key)
    if got is None:
        acc = 0
        sums = []
        for c in pnomial_row(m, p):
            acc += c
            sums.append(acc)
        got = tuple(sums)
        _prefix[key] = got
    return got


def pnomial_le(m: int, s: int, p: int) -> int:
    """Number of points of F_p^m with Manhattan weight ``<= s``."""
    if s < 0:
        return 0
    sums = _prefix_sums(m, p)
    return sums[min(s, len(sums) - 1)]


def pnomial_gt(m: int, s: int, p: int) -> int:
    """Number of points of F_p^m with Manhattan weight ``> s``."""
    return p**m - pnomial_le(m, s, p)


def pnomial_cumulative(m: int, s: int, p: int, direction: str) -> int:
    if direction in ("<=", "le", "≤"):
        return pnomial_le(m, s, p)
    if direction in (">", "gt"):
        return pnomial_gt(m, s, p)
    raise ValueError(f"direction must be '<=' or '>', got {direction!r}")


def pnomial_multinomial(m: int, s: int, p: int) -> int:
    """Independent evaluation as a sum of multinomial coefficients.

    Sums ``m! / (k_1! ... k_{p-1}! (m - sum k)!)`` over ``sum_i i*k_i = s``.
    Only practical for small ``m`` and ``p``.
    """
    from math import factorial

    p = check_prime(p)
    total = 0

    def rec(i: int, remaining: int, used: int, denom: int) -> None:
        nonlocal total
        if i == 0:
            if remaining == 0:
                total += factorial(m) // (denom * factorial(m - used))
            return
        for k in range(0, min(m - used, remaining // i) + 1):
            rec(i - 1, remaining - i * k, used + k, denom * factorial(k))

    if 0 <= s <= m * (p - 1):
        rec(p - 1, s, 0, 1)
    return total


class WeightKind(str, Enum):
    HAMMING = "hamming"
    LEE = "lee"
    MANHATTAN = "manhattan"


@dataclass(frozen=True)
class WeightFunction:
    """Per-symbol weight table ``W: F_p -> Z>=0`` with ``W(0) = 0``."""

    kind: WeightKind
    p: int
    table: tuple[int, ...]

    def __post_init__(self) -> None:
        check_prime(self.p)
        if len(self.table) != self.p or self.table[0] != 0 or min(self.table) < 0:
            raise ValueError(f"invalid weight table {self.table} for p={self.p}")

    @classmethod
    def of(cls, kind: WeightKind | str, p: int) -> "WeightFunction":
        kind = WeightKind(kind)
        if kind is WeightKind.HAMMING:
            table = tuple(0 if a == 0 else 1 for a in range(p))
        elif kind is WeightKind.LEE:
            table = tuple(a if a <= (p - 1) // 2 else p - a for a in range(p))
        else:
            table = tuple(range(p))
        return cls(kind, p, table)

    def __call__(self, v) -> int:
        return sum(self.table[int(a) % self.p] for a in v)


def weight_count(m: int, k: int, W: WeightFunction, p: int | None = None) -> int:
    """Number of vectors in F_p^m of W-weight exactly ``k``.

    Expands ``(sum_j x**W(j))**m`` by repeated multiplication.
    """
    if p is not None and p != W.p:
        raise ValueError("weight function modulus does not match p")
    if m < 0:
        raise ValueError("m must be non-negative")
    if k < 0:
        return 0
    base: dict[int, int] = {}
    for a in W.table:
        base[a] = base.get(a, 0) + 1
    poly = [1]
    for _ in range(m):
        out = [0] * (len(poly) + max(base))
        for i, c in enumerate(poly):
            if c:
                for e, mult in base.items():
                    out[i + e] += c * mult
        poly = out
    return poly[k] if k < len(poly) else 0


def split_degree(r: int, p: int) -> tuple[int, int]:
    """Write ``r = alpha (p-1) + beta`` with ``0 <= beta <= p-2``."""
    return divmod(r, p - 1)


def delta_distance(m: int, r: int, w: int, p: int) -> int:
    """Minimum support of a nonzero degree-``<= r`` polynomial off the Manhattan ball.

    Closed form ``sum_{j=0}^{p-beta-1} pnomial_gt(m - alpha - 1, w - j)`` with
    ``r = alpha (p-1) + beta``.  A return value of 0 means the formula does
    not apply (the punctured generator is rank deficient).
    """
    p = check_prime(p)
    if m < 0 or not 0 <= r <= m * (p - 1):
        raise ValueError(f"degree r={r} outside [0, {m * (p - 1)}] for m={m}, p={p}")
    alpha, beta = split_degree(r, p)
    if alpha == m:
        # r = m(p-1): only the delta function at the origin survives the pair sum
        return pnomial_gt(0, w, p)
    return sum(pnomial_gt(m - alpha - 1, w - j, p) for j in range(p - beta))


def lemma_b1_check(m: int, r: int, w: int, A: int, p: int) -> bool:
    """Check ``sum_{i<=p-1-A} Delta(m, r-A, w-i) >= sum_{i<p} Delta(m, r, w-i)``.

    For ``A == 0`` the two sides must coincide.
    """
    if not 0 <= A <= p - 1 or r - A < 0:
        raise ValueError("need 0 <= A <= p-1 and r >= A")
    lhs = sum(delta_distance(m, r - A, w - i, p) for i in range(p - A))
    rhs = sum(delta_distance(m, r, w - i, p) for i in range(p))
    if A == 0:
        return lhs == rhs
    return lhs >= rhs
