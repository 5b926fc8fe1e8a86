"""Reed-Muller evaluation codes RM_p(r, m) and their punctured/shortened forms.

Column ``c`` (1-based) of every generator is the point ``x`` of F_p^m with
``c - 1 = x_1 + x_2 p + x_3 p**2 + ...``.  Rows are monomials
``x_1**a_1 ... x_m**a_m`` with ``a_i <= p-1`` and ``sum(a) <= r``, listed in
graded lexicographic order.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from functools import lru_cache
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .field_linalg import FpMatrix, FpVector, check_prime, rref
from .pnomial import delta_distance, pnomial_le, split_degree
from .report import Certainty, CodeReport


@dataclass(frozen=True)
class RmSpec:
    p: int
    m: int
    r: int

    def __post_init__(self) -> None:
        check_prime(self.p)
        if self.m < 1:
            raise ValueError(f"m must be >= 1, got {self.m}")
        if not 0 <= self.r <= self.m * (self.p - 1):
            raise ValueError(f"degree r={self.r} outside [0, {self.m * (self.p - 1)}]")

    @property
    def length(self) -> int:
        return self.p**self.m

    @property
    def dimension(self) -> int:
        return pnomial_le(self.m, self.r, self.p)

    @property
    def is_triorthogonal_degree(self) -> bool:
        return 3 * self.r < self.m * (self.p - 1)

    @classmethod
    def maximal(cls, p: int, m: int) -> "RmSpec":
        """Largest-degree RM space that is triorthogonal (``3r < m(p-1)``)."""
        return cls(p, m, r_max(p, m))


def r_max(p: int, m: int) -> int:
    return (m * (p - 1) - 1) // 3


# -- column encoding ---------------------------------------------------------

def decode_column(c: int, p: int, m: int) -> tuple[int, ...]:
    """1-based column number -> point of F_p^m, ``x_1`` least significant."""
    if not 1 <= c <= p**m:
        raise ValueError(f"column {c} outside [1, {p**m}]")
    t = c - 1
    out = []
    for _ in range(m):
        t, d = divmod(t, p)
        out.append(d)
    return tuple(out)


def encode_point(x: Sequence[int], p: int) -> int:
    if any(not 0 <= int(a) < p for a in x):
        raise ValueError(f"point {tuple(x)} has coordinates outside F_{p}")
    return 1 + sum(int(a) * p**i for i, a in enumerate(x))


@lru_cache(maxsize=64)
def points(p: int, m: int) -> np.ndarray:
    """All points of F_p^m as a ``(p**m, m)`` array in column order."""
    idx = np.arange(p**m, dtype=np.int64)
    pts = np.empty((p**m, m), dtype=np.int64)
    for i in range(m):
        pts[:, i] = idx % p
        idx = idx // p
    pts.setflags(write=False)
    return pts


def manhattan_weights(p: int, m: int) -> np.ndarray:
    return points(p, m).sum(axis=1)


@dataclass(frozen=True)
class PunctureSet:
    """Distinct coordinates of F_p^m, stored as sorted 1-based column numbers."""

    p: int
    m: int
    columns: tuple[int, ...] = field(default=())

    def __post_init__(self) -> None:
        check_prime(self.p)
        cols = tuple(sorted(int(c) for c in self.columns))
        if len(set(cols)) != len(cols):
            raise ValueError("puncture columns must be distinct")
        if cols and (cols[0] < 1 or cols[-1] > self.p**self.m):
            raise ValueError(f"puncture columns must lie in [1, {self.p**self.m}]")
        object.__setattr__(self, "columns", cols)

    def __len__(self) -> int:
        return len(self.columns)

    @property
    def indices(self) -> list[int]:
        """0-based column indices."""
        return [c - 1 for c in self.columns]

    @property
    def points(self) -> list[tuple[int, ...]]:
        return [decode_column(c, self.p, self.m) for c in self.columns]

    @classmethod
    def from_points(cls, pts: Iterable[Sequence[int]], p: int, m: int) -> "PunctureSet":
        return cls(p, m, tuple(encode_point(x, p) for x in pts))

    def to_json(self) -> str:
        return json.dumps({"p": self.p, "m": self.m, "columns": list(self.columns)})

    @classmethod
    def from_dict(cls, d: dict) -> "PunctureSet":
        return cls(int(d["p"]), int(d["m"]), tuple(int(c) for c in d["columns"]))

    @classmethod
    def from_json(cls, text: str) -> "PunctureSet":
        return cls.from_dict(json.loads(text))

    @classmethod
    def load(cls, path: str | Path) -> "PunctureSet":
        return cls.from_json(Path(path).read_text())


# -- generators --------------------------------------------------------------

def monomial_basis(p: int, m: int, r: int) -> list[tuple[int, ...]]:
    """Exponent vectors of degree ``<= r``, graded then lexicographic."""
    out = []
    for deg in range(r + 1):
        level = [a for a in itertools.product(range(p), repeat=m) if sum(a) == deg]
        out.extend(sorted(level, reverse=True))
    return out


def evaluate_monomials(exponents: Sequence[Sequence[int]], p: int, m: int) -> np.ndarray:
    pts = points(p, m)
    # powers[x, e] = x**e mod p with 0**0 = 1
    powers = np.array([[pow(x, e, p) for e in range(p)] for x in range(p)], dtype=np.int64)
    rows = np.ones((len(exponents), p**m), dtype=np.int64)
    for j, a in enumerate(exponents):
        for i, e in enumerate(a):
            if e:
                rows[j] = rows[j] * powers[pts[:, i], e] % p
    return rows


def rm_generator(spec: RmSpec) -> FpMatrix:
    return FpMatrix(evaluate_monomials(monomial_basis(spec.p, spec.m, spec.r), spec.p, spec.m), spec.p)


def dual_degree(spec: RmSpec) -> int:
    """Degree of the dual RM code: ``m(p-1) - r - 1``."""
    top = spec.m * (spec.p - 1)
    if spec.r >= top:
        raise ValueError("RM code of full degree has no dual Reed-Muller degree")
    return top - spec.r - 1


def rm_distance(spec: RmSpec) -> int:
    """Minimum distance ``p**(m - r//(p-1)) * (1 - (r mod (p-1))/p)`` as an integer."""
    a, b = split_degree(spec.r, spec.p)
    if b == 0:
        return spec.p ** (spec.m - a)
    return spec.p ** (spec.m - a - 1) * (spec.p - b)


def manhattan_set(p: int, m: int, w: int) -> PunctureSet:
    """All points of Manhattan weight ``<= w``."""
    if w < 0:
        raise ValueError("w must be non-negative")
    cols = np.flatnonzero(manhattan_weights(p, m) <= w) + 1
    return PunctureSet(p, m, tuple(int(c) for c in cols))


def _check_columns(M: FpMatrix, S: PunctureSet) -> None:
    if M.p != S.p:
        raise ValueError(f"matrix modulus {M.p} does not match puncture set modulus {S.p}")
    if M.ncols != S.p**S.m:
        raise ValueError(f"matrix has {M.ncols} columns, expected {S.p**S.m}")


def puncture(M: FpMatrix, S: PunctureSet) -> FpMatrix:
    """Delete the columns in ``S``."""
    _check_columns(M, S)
    return M.delete_columns(S.indices)


def split_on(M: FpMatrix, S: PunctureSet) -> tuple[FpMatrix, FpMatrix]:
    """Reduce ``M`` so its row space splits over the columns of ``S``.

    Returns ``(G1, G0)`` with the ``S`` columns already removed: ``G0`` spans
    the words vanishing on ``S`` and ``G1`` completes it to the punctured row
    space.  Elimination pivots on the ``S`` columns first.
    """
    _check_columns(M, S)
    s_idx = S.indices
    skip = set(s_idx)
    rest = [c for c in range(M.ncols) if c not in skip]
    R, pivots = rref(FpMatrix(M.rows[:, s_idx + rest], M.p))
    k = sum(1 for c in pivots if c < len(s_idx))
    body = R.rows[:, len(s_idx):]
    return FpMatrix(body[:k], M.p), FpMatrix(body[k:], M.p)


def shorten(M: FpMatrix, S: PunctureSet) -> FpMatrix:
    """Generator of the subcode vanishing on ``S``, punctured at ``S``."""
    return split_on(M, S)[1]


def extremal_witness(p: int, m: int, r: int, w: int) -> FpVector:
    """Evaluation of a degree-``r`` polynomial meeting the punctured distance bound.

    ``prod_{i<=alpha} (1 - x_i**(p-1)) * prod_{j<beta} (p - 1 - j - x_{alpha+1})``
    vanishes unless ``x_1 = ... = x_alpha = 0`` and ``x_{alpha+1} <= p-1-beta``.
    """
    spec = RmSpec(p, m, r)
    if delta_distance(m, r, w, p) == 0:
        raise ValueError(f"no witness: Delta_{p}({m},{r},{w}) = 0")
    alpha, beta = split_degree(spec.r, p)
    pts = points(p, m)
    val = np.ones(p**m, dtype=np.int64)
    for i in range(alpha):
        val = val * ((1 - pts[:, i] ** (p - 1)) % p) % p
    for j in range(beta):
        val = val * ((p - 1 - j - pts[:, alpha]) % p) % p
    return FpVector(val, p)


def support_outside_ball(v: FpVector, p: int, m: int, w: int) -> int:
    """Number of nonzero entries of ``v`` at points of Manhattan weight ``> w``."""
    return int(np.count_nonzero(v.entries[manhattan_weights(p, m) > w]))


def one_two_puncture_params(p: int, m: int, punctures: int) -> CodeReport:
    """Parameters ``[[p**m - k, k, d_RM(r~) - k]]`` of RM_p(r_max, m) with ``k <= 2`` punctures.

    The distance does not depend on where the one or two punctures sit.
    """
    if punctures not in (1, 2):
        raise ValueError("closed form covers one or two punctures only")
    spec = RmSpec.maximal(p, m)
    d_rm = rm_distance(RmSpec(p, m, dual_degree(spec)))
    k = punctures
    if d_rm <= k:
        raise ValueError(f"dual RM distance {d_rm} <= {k} punctures; closed form does not apply")
    return CodeReport(
        p=p, n=p**m - k, k=k, d=d_rm - k, certainty=Certainty.EXACT,
        provenance={"construction": "rm-one-two-puncture", "p": p, "m": m, "r": spec.r, "punctures": k},
    )
