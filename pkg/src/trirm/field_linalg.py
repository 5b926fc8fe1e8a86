"""Dense vectors and matrices over the prime field F_p.

Entries are stored as ``int64`` numpy arrays reduced into ``[0, p)``; the
modulus lives on the container.  Containers are frozen and their arrays are
marked read-only, so values can be shared freely.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np

MAX_PRIME = 1 << 15


class DimensionError(ValueError):
    """Operands disagree in length, shape or modulus."""


@lru_cache(maxsize=None)
def check_prime(p: int) -> int:
    """Return ``p`` if it is a prime in ``[2, 2**15)``, else raise ValueError."""
    p = int(p)
    if p < 2 or p >= MAX_PRIME:
        raise ValueError(f"modulus {p} outside supported range [2, {MAX_PRIME})")
    i = 2
    while i * i <= p:
        if p % i == 0:
            raise ValueError(f"modulus {p} is not prime")
        i += 1
    return p


@lru_cache(maxsize=None)
def inverse_table(p: int) -> np.ndarray:
    table = np.zeros(p, dtype=np.int64)
    for a in range(1, p):
        table[a] = pow(a, -1, p)
    table.setflags(write=False)
    return table


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.ascontiguousarray(a, dtype=np.int64)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class FpVector:
    entries: np.ndarray
    p: int

    def __post_init__(self) -> None:
        p = check_prime(self.p)
        a = np.asarray(self.entries, dtype=np.int64).reshape(-1) % p
        object.__setattr__(self, "entries", _frozen(a))

    def __len__(self) -> int:
        return int(self.entries.shape[0])

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, FpVector):
            return NotImplemented
        return self.p == other.p and np.array_equal(self.entries, other.entries)

    def __add__(self, other: FpVector) -> FpVector:
        _check_same(self, other)
        return FpVector(self.entries + other.entries, self.p)

    def __mul__(self, other: FpVector) -> FpVector:
        return star_product(self, other)

    def scale(self, c: int) -> FpVector:
        return FpVector(self.entries * (int(c) % self.p), self.p)

    def weight(self) -> int:
        return int(np.count_nonzero(self.entries))

    def support(self) -> np.ndarray:
        return np.flatnonzero(self.entries)

    def tolist(self) -> list[int]:
        return self.entries.tolist()

    @classmethod
    def ones(cls, n: int, p: int) -> FpVector:
        return cls(np.ones(n, dtype=np.int64), p)

    @classmethod
    def zeros(cls, n: int, p: int) -> FpVector:
        return cls(np.zeros(n, dtype=np.int64), p)


@dataclass(frozen=True, eq=False)
class FpMatrix:
    rows: np.ndarray
    p: int

    def __post_init__(self) -> None:
        p = check_prime(self.p)
        a = np.asarray(self.rows, dtype=np.int64)
        if a.ndim == 1 and a.size == 0:
            a = a.reshape(0, 0)
        if a.ndim != 2:
            raise DimensionError(f"matrix must be 2-D, got shape {a.shape}")
        object.__setattr__(self, "rows", _frozen(a % p))

    @classmethod
    def from_vectors(cls, vectors: Sequence[FpVector], p: int, ncols: int | None = None) -> FpMatrix:
        if not vectors:
            return cls(np.zeros((0, ncols or 0), dtype=np.int64), p)
        lengths = {len(v) for v in vectors}
        if len(lengths) != 1 or any(v.p != p for v in vectors):
            raise DimensionError("rows must share one length and modulus")
        return cls(np.stack([v.entries for v in vectors]), p)

    @classmethod
    def empty(cls, ncols: int, p: int) -> FpMatrix:
        return cls(np.zeros((0, ncols), dtype=np.int64), p)

    @property
    def shape(self) -> tuple[int, int]:
        return self.rows.shape  # type: ignore[return-value]

    @property
    def nrows(self) -> int:
        return int(self.rows.shape[0])

    @property
    def ncols(self) -> int:
        return int(self.rows.shape[1])

    def __len__(self) -> int:
        return self.nrows

    def __getitem__(self, i: int) -> FpVector:
        return FpVector(self.rows[i], self.p)

    def __iter__(self):
        for i in range(self.nrows):
            yield self[i]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, FpMatrix):
            return NotImplemented
        return self.p == other.p and np.array_equal(self.rows, other.rows)

    def columns(self, idx: Iterable[int]) -> FpMatrix:
        return FpMatrix(self.rows[:, list(idx)], self.p)

    def delete_columns(self, idx: Iterable[int]) -> FpMatrix:
        return FpMatrix(np.delete(self.rows, list(idx), axis=1), self.p)

    def vstack(self, other: FpMatrix) -> FpMatrix:
        _check_same(self, other)
        return FpMatrix(np.vstack([self.rows, other.rows]), self.p)

    def dot(self, other: FpMatrix) -> FpMatrix:
        """``self @ other.T`` mod p (pairwise row inner products)."""
        _check_same(self, other)
        return FpMatrix(_matmul_mod(self.rows, other.rows.T, self.p), self.p)


def _check_same(a, b) -> None:
    if a.p != b.p:
        raise DimensionError(f"modulus mismatch: {a.p} vs {b.p}")
    la = a.entries.shape[-1] if isinstance(a, FpVector) else a.ncols
    lb = b.entries.shape[-1] if isinstance(b, FpVector) else b.ncols
    if la != lb:
        raise DimensionError(f"length mismatch: {la} vs {lb}")


def _matmul_mod(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray:
    # float64 BLAS is exact while every partial sum stays below 2**53
    inner = a.shape[1] if a.ndim == 2 else a.shape[0]
    if inner * (p - 1) ** 2 < 2**53:
        out = np.rint(a.astype(np.float64) @ b.astype(np.float64))
        return out.astype(np.int64) % p
    return ((a.astype(object) @ b.astype(object)) % p).astype(np.int64)


def star_product(a: FpVector, b: FpVector) -> FpVector:
    """Componentwise product ``a * b`` over F_p."""
    _check_same(a, b)
    return FpVector(a.entries * b.entries, a.p)


def coordinate_sum(v: FpVector) -> int:
    """Sum of the entries of ``v`` reduced mod p."""
    return int(v.entries.sum() % v.p)


def rref(M: FpMatrix) -> tuple[FpMatrix, list[int]]:
    """Reduced row echelon form with leftmost pivot selection.

    Returns the nonzero rows of the reduced matrix and the pivot columns.
    The first nonzero entry at or below the current row is always chosen,
    so the result depends only on the row space and the column order.
    """
    p = M.p
    A = np.array(M.rows, dtype=np.int64)
    nrows, ncols = A.shape
    inv = inverse_table(p)
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        nz = np.flatnonzero(A[r:, c])
        if nz.size == 0:
            continue
        piv = r + int(nz[0])
        if piv != r:
            A[[r, piv]] = A[[piv, r]]
        A[r] = (A[r] * inv[A[r, c]]) % p
        col = A[:, c].copy()
        col[r] = 0
        hit = np.flatnonzero(col)
        if hit.size:
            A[hit] = (A[hit] - np.outer(col[hit], A[r])) % p
        pivots.append(c)
        r += 1
    return FpMatrix(A[:r], p), pivots


def rank(M: FpMatrix) -> int:
    """Row rank over F_p."""
    if M.nrows == 0 or M.ncols == 0:
        return 0
    return len(rref(M)[1])


def nullspace_basis(M: FpMatrix) -> FpMatrix:
    """Basis of ``{v : M v = 0}``, one basis vector per row.

    Built from the reduced form: each free column contributes the vector with
    a 1 in that column and the negated pivot-row entries in the pivot columns.
    """
    p = M.p
    n = M.ncols
    R, pivots = rref(M)
    free = [c for c in range(n) if c not in set(pivots)]
    if not free:
        return FpMatrix.empty(n, p)
    basis = np.zeros((len(free), n), dtype=np.int64)
    basis[np.arange(len(free)), free] = 1
    if pivots:
        basis[:, pivots] = (-R.rows[:, free].T) % p
    return FpMatrix(basis, p)


def row_space_contains(M: FpMatrix, v: FpVector) -> bool:
    """True iff ``v`` lies in the row space of ``M``."""
    _check_same(M, v)
    if M.nrows == 0:
        return not v.entries.any()
    return rank(M.vstack(FpMatrix(v.entries[None, :], M.p))) == rank(M)
