"""Triorthogonality checks, CSS code assembly and exact code measurements.

For a triorthogonal space punctured at ``S`` the generator ``G'`` is split
as ``[G1; G0]`` where ``G0`` spans the words vanishing on ``S``.  The quantum
code is ``CSS(G0 -> X, G'^perp -> Z)``: undetected Z errors are
``G0^perp = PRM(r~, m; S)`` and harmless ones are ``G'^perp = SRM(r~, m; S)``.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Any

import numpy as np

from ._kernels import gray_weight_histogram
from .field_linalg import FpMatrix, FpVector, _matmul_mod, nullspace_basis, rank, rref
from .reedmuller import PunctureSet, RmSpec, dual_degree, rm_distance, rm_generator, split_on
from .report import Certainty, CodeReport, yield_gamma

__all__ = [
    "BudgetExceeded", "NotTriorthogonalError", "TriorthogonalPair", "WeightEnumerator",
    "build_code", "check_triorthogonal", "default_budget", "dual_weight_enumerator",
    "logical_z_count", "macwilliams", "min_weight_upper_bound", "quantum_distance",
    "weight_enumerator_exact", "yield_gamma",
]

DEFAULT_BUDGET = 10**8
DEFAULT_EFFORT = 300


def default_budget() -> int:
    """Enumeration budget in words; ``TRIRM_BUDGET`` overrides the default."""
    return int(os.environ.get("TRIRM_BUDGET", DEFAULT_BUDGET))


class BudgetExceeded(RuntimeError):
    """Exhaustive enumeration would exceed the word budget in both directions."""


class NotTriorthogonalError(ValueError):
    pass


# -- triorthogonality --------------------------------------------------------

def check_triorthogonal(G: FpMatrix) -> bool:
    """All row pairs and row triples (with repetition) have zero coordinate sum.

    By multilinearity the generator rows suffice.
    """
    p = G.p
    A = G.rows
    k = A.shape[0]
    if k == 0:
        return True
    if np.any(_matmul_mod(A, A.T, p)):
        return False
    for i in range(k):
        pairs = A[i] * A[i:] % p
        if np.any(_matmul_mod(pairs, A[i:].T, p)):
            return False
    return True


@lru_cache(maxsize=32)
def _verified_generator(spec: RmSpec) -> FpMatrix:
    if not spec.is_triorthogonal_degree:
        raise NotTriorthogonalError(f"RM_{spec.p}({spec.r},{spec.m}) needs 3r < m(p-1)")
    G = rm_generator(spec)
    if not check_triorthogonal(G):
        raise NotTriorthogonalError(f"RM_{spec.p}({spec.r},{spec.m}) failed the triorthogonality scan")
    return G


# -- weight enumerators ------------------------------------------------------

@dataclass(frozen=True)
class WeightEnumerator:
    """Exact Hamming weight distribution ``A_0 .. A_n`` of a linear code."""

    n: int
    p: int
    coefficients: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.coefficients) != self.n + 1:
            raise ValueError("need n + 1 coefficients")

    def __getitem__(self, w: int) -> int:
        return self.coefficients[w] if 0 <= w <= self.n else 0

    @property
    def size(self) -> int:
        return sum(self.coefficients)

    @property
    def dimension(self) -> int:
        size = self.size
        k = round(math.log(size, self.p)) if size > 1 else 0
        if self.p**k != size:
            raise ValueError(f"enumerator total {size} is not a power of {self.p}")
        return k

    def min_weight(self) -> int | None:
        """Smallest nonzero weight, or None for the zero code."""
        for w in range(1, self.n + 1):
            if self.coefficients[w]:
                return w
        return None

    def to_dict(self) -> dict[str, Any]:
        return {"n": self.n, "p": self.p, "coefficients": [str(c) for c in self.coefficients]}

    @classmethod
    def from_dict(cls, d: dict[str, Any]) -> "WeightEnumerator":
        return cls(int(d["n"]), int(d["p"]), tuple(int(c) for c in d["coefficients"]))


def macwilliams(W: WeightEnumerator) -> WeightEnumerator:
    """Enumerator of the dual code: ``|C|^-1 W_C(x + (p-1) y, x - y)``.

    The kernel polynomials ``(1 + (p-1)y)**(n-i) (1 - y)**i`` are generated
    from each other by one exact division and one multiplication.
    """
    n, p = W.n, W.p
    q = p - 1
    P = [math.comb(n, j) * q**j for j in range(n + 1)]
    acc = [0] * (n + 1)
    for i, a in enumerate(W.coefficients):
        if a:
            for j in range(n + 1):
                acc[j] += a * P[j]
        if i == n:
            break
        # divide by (1 + q y), then multiply by (1 - y)
        Q = [0] * n
        carry = 0
        for j in range(n):
            carry = P[j] - q * carry
            Q[j] = carry
        if P[n] - q * Q[n - 1] != 0:
            raise ArithmeticError("MacWilliams kernel division was not exact")
        P = [Q[0]] + [Q[j] - Q[j - 1] for j in range(1, n)] + [-Q[n - 1]]
    size = W.size
    out = []
    for c in acc:
        quo, rem = divmod(c, size)
        if rem:
            raise ArithmeticError("MacWilliams transform produced a non-integer count")
        out.append(quo)
    return WeightEnumerator(n, p, tuple(out))


def _basis(C: FpMatrix) -> np.ndarray:
    if C.nrows == 0:
        return C.rows
    return rref(C)[0].rows


def enumerate_row_space(C: FpMatrix, threads: int = 1) -> WeightEnumerator:
    """Weight enumerator by walking every codeword once."""
    B = _basis(C)
    n, p = C.ncols, C.p
    total = p ** B.shape[0]
    if threads <= 1 or total < 1 << 16:
        hist = gray_weight_histogram(B, p, 0, total)
    else:
        cuts = [total * i // threads for i in range(threads + 1)]
        with ThreadPoolExecutor(threads) as pool:
            parts = pool.map(lambda ab: gray_weight_histogram(B, p, ab[0], ab[1]), zip(cuts, cuts[1:]))
            hist = sum(parts)
    return WeightEnumerator(n, p, tuple(int(h) for h in hist))


def dual_weight_enumerator(H: FpMatrix, budget: int | None = None, threads: int = 1) -> WeightEnumerator:
    """Enumerator of ``H^perp``: enumerate the row space of ``H`` then transform."""
    budget = default_budget() if budget is None else budget
    dim = rank(H)
    if H.p**dim > budget:
        raise BudgetExceeded(f"{H.p}^{dim} words exceed budget {budget}")
    return macwilliams(enumerate_row_space(H, threads))


def weight_enumerator_exact(C: FpMatrix, budget: int | None = None, threads: int = 1) -> WeightEnumerator:
    """Exact weight enumerator of the row space of ``C``.

    Enumerates ``C`` directly when ``p**dim`` fits the budget, otherwise the
    dual code followed by the MacWilliams transform.
    """
    budget = default_budget() if budget is None else budget
    dim = rank(C)
    p, n = C.p, C.ncols
    if p**dim <= budget:
        return enumerate_row_space(C, threads)
    if p ** (n - dim) <= budget:
        return macwilliams(enumerate_row_space(nullspace_basis(C), threads))
    raise BudgetExceeded(f"both {p}^{dim} and {p}^{n - dim} words exceed budget {budget}")


# -- randomized low-weight search --------------------------------------------

def _light_combinations(B: np.ndarray, p: int, depth: int) -> tuple[int, np.ndarray]:
    """Lightest ``u`` with ``1 <= wt(u) <= depth`` scoring ``wt(u) + wt(u B)``.

    Only ``u`` with leading coefficient 1 are scanned (scalar multiples share
    weights).  Returns ``(weight, u)``.
    """
    f = B.shape[0]
    best_w = 1 << 62
    best_u = None
    if f == 0:
        return best_w, np.zeros(0, dtype=np.int64)
    nnz = np.count_nonzero(B, axis=1) + 1
    i = int(np.argmin(nnz))
    best_w = int(nnz[i])
    best_u = np.zeros(f, dtype=np.int64)
    best_u[i] = 1
    if depth >= 2 and f >= 2:
        for b in range(1, p):
            bB = (b * B) % p
            for i in range(f - 1):
                rows = (B[i] + bB[i + 1:]) % p
                w = np.count_nonzero(rows, axis=1) + 2
                j = int(np.argmin(w))
                if w[j] < best_w:
                    best_w = int(w[j])
                    best_u = np.zeros(f, dtype=np.int64)
                    best_u[i] = 1
                    best_u[i + 1 + j] = b
    return best_w, best_u


def _isd(H: FpMatrix, target_w: int, rng: np.random.Generator, effort: int, depth: int) -> tuple[int, np.ndarray | None]:
    """Lee-Brickell search for light words of ``H^perp`` (``H`` is a parity check)."""
    p, n = H.p, H.ncols
    best_w, best = n + 1, None
    for _ in range(max(effort, 1)):
        perm = rng.permutation(n)
        R, piv = rref(FpMatrix(H.rows[:, perm], p))
        piv_set = set(piv)
        free = np.array([c for c in range(n) if c not in piv_set], dtype=np.int64)
        if free.size == 0:
            break
        # word on free coords u, on pivot coords -Q u
        Q = R.rows[:, free]
        w, u = _light_combinations(Q.T.copy(), p, depth)
        if w < best_w:
            word = np.zeros(n, dtype=np.int64)
            word[free] = u
            word[piv] = (-(Q @ u)) % p
            full = np.zeros(n, dtype=np.int64)
            full[perm] = word
            best_w, best = w, full
        if best_w <= target_w:
            break
    return best_w, best


def min_weight_upper_bound(
    C: FpMatrix | None,
    target_w: int = 1,
    seed: int = 0,
    effort: int = DEFAULT_EFFORT,
    *,
    parity_check: FpMatrix | None = None,
    depth: int = 2,
) -> tuple[int, FpVector | None]:
    """Randomized information-set search for a light nonzero codeword.

    Each round reduces the parity check on a random column order and scans
    every combination of at most ``depth`` information coordinates.  Stops
    as soon as weight ``<= target_w`` is found or after ``effort`` rounds.
    The code is the row space of ``C``, or ``parity_check^perp`` when a
    parity check is passed instead.  Deterministic given ``seed``.
    """
    if parity_check is None:
        if C is None:
            raise ValueError("need a generator or a parity check")
        parity_check = nullspace_basis(C)
    H = parity_check
    rng = np.random.default_rng(seed)
    w, word = _isd(H, target_w, rng, effort, depth)
    if word is None:
        return H.ncols + 1, None
    return w, FpVector(word, H.p)


# -- quantum codes -----------------------------------------------------------

@dataclass(frozen=True, eq=False)
class TriorthogonalPair:
    """Punctured generator ``G' = [G1; G0]`` and the shortened generator ``G0``."""

    Gprime: FpMatrix
    G0: FpMatrix
    p: int
    n: int
    k: int
    spec: RmSpec | None = None
    punctures: PunctureSet | None = None
    _memo: dict = field(default_factory=dict, repr=False)

    @property
    def rank_deficient(self) -> bool:
        return self.punctures is not None and self.k < len(self.punctures)

    def prm_enumerator(self, budget: int | None = None, threads: int = 1) -> WeightEnumerator:
        """Enumerator of ``G0^perp`` (undetected Z errors)."""
        if "prm" not in self._memo:
            self._memo["prm"] = _space_enumerator(self.G0, budget, threads)
        return self._memo["prm"]

    def srm_enumerator(self, budget: int | None = None, threads: int = 1) -> WeightEnumerator:
        """Enumerator of ``G'^perp`` (Z stabilizers)."""
        if "srm" not in self._memo:
            self._memo["srm"] = _space_enumerator(self.Gprime, budget, threads)
        return self._memo["srm"]


def _space_enumerator(H: FpMatrix, budget: int | None, threads: int) -> WeightEnumerator:
    budget = default_budget() if budget is None else budget
    dim = rank(H)
    if H.p**dim <= budget:
        return dual_weight_enumerator(H, budget, threads)
    if H.p ** (H.ncols - dim) <= budget:
        return enumerate_row_space(nullspace_basis(H), threads)
    raise BudgetExceeded(f"both {H.p}^{dim} and {H.p}^{H.ncols - dim} words exceed budget {budget}")


def build_code(spec: RmSpec, S: PunctureSet) -> TriorthogonalPair:
    """Puncture and shorten RM_p(r, m) at ``S``.

    ``k`` is the achieved dimension ``rank(G') - rank(G0)``; it equals ``|S|``
    when the punctured generator keeps full rank.
    """
    if (S.p, S.m) != (spec.p, spec.m):
        raise ValueError("puncture set does not match the RM space")
    G = _verified_generator(spec)
    G1, G0 = split_on(G, S)
    Gprime = G1.vstack(G0) if G1.nrows else G0
    k = rank(Gprime) - G0.nrows
    return TriorthogonalPair(Gprime=Gprime, G0=G0, p=spec.p, n=spec.length - len(S), k=k, spec=spec, punctures=S)


def quantum_distance(
    pair: TriorthogonalPair,
    budget: int | None = None,
    *,
    seed: int = 0,
    effort: int = DEFAULT_EFFORT,
    target_w: int = 1,
    threads: int = 1,
) -> tuple[int, Certainty]:
    """Minimum weight of ``G0^perp``: exact when enumerable, else an upper bound."""
    try:
        d = pair.prm_enumerator(budget, threads).min_weight()
        if d is None:
            raise ValueError("G0^perp is the zero code")
        return d, Certainty.EXACT
    except BudgetExceeded:
        w, _ = min_weight_upper_bound(None, target_w, seed, effort, parity_check=pair.G0)
        return w, Certainty.UPPER_BOUND


def logical_z_count(pair: TriorthogonalPair, d: int, budget: int | None = None, threads: int = 1) -> int:
    """Weight-``d`` words of ``PRM(r~, m; S)`` minus those of ``SRM(r~, m; S)``.

    When SRM is too large to enumerate, its weight-``d`` count is still known
    to vanish if ``d`` is below the distance of the unpunctured RM_p(r~, m),
    since SRM words are RM words supported off ``S``.
    """
    prm = pair.prm_enumerator(budget, threads)
    try:
        srm_d = pair.srm_enumerator(budget, threads)[d]
    except BudgetExceeded:
        if pair.spec is None:
            raise
        d_rm = rm_distance(RmSpec(pair.p, pair.spec.m, dual_degree(pair.spec)))
        if d >= d_rm:
            raise
        srm_d = 0
    return prm[d] - srm_d


def code_report(
    pair: TriorthogonalPair,
    budget: int | None = None,
    *,
    seed: int = 0,
    effort: int = DEFAULT_EFFORT,
    target_w: int = 1,
    count_logicals: bool = True,
    threads: int = 1,
    extra: dict[str, Any] | None = None,
) -> CodeReport:
    """Measure a pair: distance (exact or bound) and ``A_d`` when exact."""
    budget = default_budget() if budget is None else budget
    d, cert = quantum_distance(pair, budget, seed=seed, effort=effort, target_w=target_w, threads=threads)
    A_d = None
    if count_logicals and cert is Certainty.EXACT and pair.k > 0:
        try:
            A_d = logical_z_count(pair, d, budget, threads)
        except BudgetExceeded:
            A_d = None
    prov: dict[str, Any] = {"budget": budget, "seed": seed, "effort": effort}
    if pair.spec is not None:
        prov.update(construction="punctured-rm", m=pair.spec.m, r=pair.spec.r)
    if pair.punctures is not None:
        prov["columns"] = list(pair.punctures.columns)
    if pair.rank_deficient:
        prov["rank_deficient"] = True
    prov.update(extra or {})
    return CodeReport(p=pair.p, n=pair.n, k=pair.k, d=d, certainty=cert, A_d=A_d, provenance=prov)
