"""Exact GF(2) linear algebra on int-packed bit rows.

A vector of F_2^n is a Python ``int``: bit ``i`` holds coordinate ``i + 1``
(so ``e1`` is ``1``, ``e4`` is ``0b1000``).  Strings render coordinates
left to right, ``"1010"`` being ``e1 + e3``.

Pivots are lowest set bits, so a reduced row echelon basis lists rows by
increasing pivot column.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

__all__ = [
    "DimensionMismatch",
    "BitMatrix",
    "Subspace",
    "vec_from_str",
    "vec_to_str",
    "unit",
    "parity",
    "rref",
    "span",
    "subspace_sum",
    "subspace_intersect",
    "kernel_basis",
    "image_basis",
    "contains",
    "members",
    "span_table",
    "batch_invertible",
]


class DimensionMismatch(ValueError):
    """Raised when vectors or subspaces live in different ambient spaces."""


def unit(i: int) -> int:
    """The unit vector with a 1 in 0-based coordinate ``i``."""
    return 1 << i


def parity(x: int) -> int:
    return x.bit_count() & 1


def vec_from_str(s: str) -> int:
    s = s.replace(" ", "")
    if set(s) - {"0", "1"}:
        raise ValueError(f"not a bit string: {s!r}")
    return sum(1 << i for i, c in enumerate(s) if c == "1")


def vec_to_str(x: int, dim: int) -> str:
    return "".join("1" if (x >> i) & 1 else "0" for i in range(dim))


def _check(x: int, dim: int) -> None:
    if x < 0 or x >> dim:
        raise DimensionMismatch(f"vector {x:#b} does not fit in dimension {dim}")


def _echelon(rows: Iterable[int]) -> list[int]:
    """Fully reduced echelon rows, sorted by increasing pivot (lowest bit)."""
    piv: dict[int, int] = {}
    for r in rows:
        while r:
            p = r & -r
            q = piv.get(p)
            if q is None:
                piv[p] = r
                break
            r ^= q
    order = sorted(piv)
    for p in reversed(order):
        row = piv[p]
        for p2 in order:
            if p2 != p and piv[p2] & p:
                piv[p2] ^= row
    return [piv[p] for p in order]


@dataclass(frozen=True)
class BitMatrix:
    """A ``nrows x ncols`` matrix over GF(2) stored as packed row ints."""

    rows: tuple[int, ...]
    ncols: int

    def __post_init__(self) -> None:
        object.__setattr__(self, "rows", tuple(self.rows))
        for r in self.rows:
            _check(r, self.ncols)

    @property
    def nrows(self) -> int:
        return len(self.rows)

    @classmethod
    def identity(cls, n: int) -> BitMatrix:
        return cls(tuple(1 << i for i in range(n)), n)

    @classmethod
    def zero(cls, nrows: int, ncols: int) -> BitMatrix:
        return cls((0,) * nrows, ncols)

    @classmethod
    def from_columns(cls, cols: Sequence[int], nrows: int) -> BitMatrix:
        rows = [0] * nrows
        for j, c in enumerate(cols):
            _check(c, nrows)
            for i in range(nrows):
                if (c >> i) & 1:
                    rows[i] |= 1 << j
        return cls(tuple(rows), len(cols))

    @classmethod
    def from_strings(cls, rows: Sequence[str]) -> BitMatrix:
        width = len(rows[0].replace(" ", "")) if rows else 0
        return cls(tuple(vec_from_str(r) for r in rows), width)

    def to_strings(self) -> list[str]:
        return [vec_to_str(r, self.ncols) for r in self.rows]

    def entry(self, i: int, j: int) -> int:
        return (self.rows[i] >> j) & 1

    def columns(self) -> list[int]:
        cols = [0] * self.ncols
        for i, r in enumerate(self.rows):
            while r:
                low = r & -r
                cols[low.bit_length() - 1] |= 1 << i
                r ^= low
        return cols

    def transpose(self) -> BitMatrix:
        return BitMatrix(tuple(self.columns()), self.nrows)

    def apply(self, x: int) -> int:
        """Matrix-vector product ``M x``."""
        out = 0
        for i, r in enumerate(self.rows):
            if (r & x).bit_count() & 1:
                out |= 1 << i
        return out

    def __matmul__(self, other: BitMatrix) -> BitMatrix:
        if self.ncols != other.nrows:
            raise DimensionMismatch("inner dimensions differ")
        out = []
        for r in self.rows:
            acc = 0
            while r:
                low = r & -r
                acc ^= other.rows[low.bit_length() - 1]
                r ^= low
            out.append(acc)
        return BitMatrix(tuple(out), other.ncols)

    def __add__(self, other: BitMatrix) -> BitMatrix:
        if (self.nrows, self.ncols) != (other.nrows, other.ncols):
            raise DimensionMismatch("shapes differ")
        return BitMatrix(tuple(a ^ b for a, b in zip(self.rows, other.rows)), self.ncols)

    def power(self, k: int) -> BitMatrix:
        out = BitMatrix.identity(self.nrows)
        for _ in range(k):
            out = out @ self
        return out

    def is_zero(self) -> bool:
        return not any(self.rows)

    def rank(self) -> int:
        return len(_echelon(self.rows))

    def is_invertible(self) -> bool:
        return self.nrows == self.ncols and self.rank() == self.nrows

    def image_of(self, S: Subspace) -> Subspace:
        if S.ambient != self.ncols:
            raise DimensionMismatch("subspace ambient differs from matrix width")
        return Subspace.from_rows((self.apply(b) for b in S.basis), self.nrows)

    def vectorize(self) -> int:
        """Flatten row-major into one ``nrows * ncols``-bit int."""
        out = 0
        for i, r in enumerate(self.rows):
            out |= r << (i * self.ncols)
        return out

    @classmethod
    def unvectorize(cls, v: int, nrows: int, ncols: int) -> BitMatrix:
        mask = (1 << ncols) - 1
        return cls(tuple((v >> (i * ncols)) & mask for i in range(nrows)), ncols)


@dataclass(frozen=True)
class Subspace:
    """A subspace of F_2^ambient held by its canonical reduced echelon basis.

    Equality and hashing are by basis, which coincides with set equality.
    """

    ambient: int
    basis: tuple[int, ...]

    @classmethod
    def from_rows(cls, rows: Iterable[int], dim: int) -> Subspace:
        rows = list(rows)
        for r in rows:
            _check(r, dim)
        return cls(dim, tuple(_echelon(rows)))

    @classmethod
    def zero(cls, dim: int) -> Subspace:
        return cls(dim, ())

    @classmethod
    def full(cls, dim: int) -> Subspace:
        return cls(dim, tuple(1 << i for i in range(dim)))

    @classmethod
    def coordinate(cls, coords: Iterable[int], dim: int) -> Subspace:
        return cls.from_rows((1 << c for c in coords), dim)

    @property
    def dim(self) -> int:
        return len(self.basis)

    def reduce(self, x: int) -> int:
        for b in self.basis:
            if x & (b & -b):
                x ^= b
        return x

    def __contains__(self, x: int) -> bool:
        return self.reduce(x) == 0

    def __le__(self, other: Subspace) -> bool:
        _same(self, other)
        return all(b in other for b in self.basis)

    def __ge__(self, other: Subspace) -> bool:
        return other <= self

    def __lt__(self, other: Subspace) -> bool:
        return self <= other and self.dim < other.dim

    def __gt__(self, other: Subspace) -> bool:
        return other < self

    def __add__(self, other: Subspace) -> Subspace:
        return subspace_sum(self, other)

    def __and__(self, other: Subspace) -> Subspace:
        return subspace_intersect(self, other)

    def as_matrix(self) -> BitMatrix:
        return BitMatrix(self.basis, self.ambient)

    def to_strings(self) -> list[str]:
        return [vec_to_str(b, self.ambient) for b in self.basis]

    def __repr__(self) -> str:
        return f"Subspace(ambient={self.ambient}, basis={self.to_strings()})"


def _same(A: Subspace, B: Subspace) -> None:
    if A.ambient != B.ambient:
        raise DimensionMismatch(f"ambient dimensions {A.ambient} and {B.ambient} differ")


def rref(M: BitMatrix) -> tuple[BitMatrix, int]:
    """Reduced row echelon form (zero rows padded at the bottom) and rank."""
    rows = _echelon(M.rows)
    r = len(rows)
    return BitMatrix(tuple(rows) + (0,) * (M.nrows - r), M.ncols), r


def span(vectors: Iterable[int], ambient: int) -> Subspace:
    return Subspace.from_rows(vectors, ambient)


def subspace_sum(A: Subspace, B: Subspace) -> Subspace:
    _same(A, B)
    return Subspace.from_rows(A.basis + B.basis, A.ambient)


def subspace_intersect(A: Subspace, B: Subspace) -> Subspace:
    """Zassenhaus: eliminate ``[a | a]`` and ``[b | 0]`` on the left half."""
    _same(A, B)
    n = A.ambient
    low = (1 << n) - 1
    rows = [a | (a << n) for a in A.basis] + list(B.basis)
    inter = [r >> n for r in _echelon(rows) if not r & low]
    return Subspace.from_rows(inter, n)


def kernel_basis(M: BitMatrix) -> Subspace:
    """``{x : M x = 0}`` as a subspace of F_2^ncols."""
    rows = _echelon(M.rows)
    pivots = [r & -r for r in rows]
    pivmask = sum(pivots)
    out = []
    for j in range(M.ncols):
        c = 1 << j
        if pivmask & c:
            continue
        v = c
        for p, r in zip(pivots, rows):
            if r & c:
                v |= p
        out.append(v)
    return Subspace.from_rows(out, M.ncols)


def image_basis(M: BitMatrix) -> Subspace:
    """Column space of ``M`` as a subspace of F_2^nrows."""
    return Subspace.from_rows(M.columns(), M.nrows)


def contains(S: Subspace, x: int) -> bool:
    _check(x, S.ambient)
    return x in S


def members(S: Subspace) -> list[int]:
    """All ``2**rank`` vectors of ``S``."""
    out = [0]
    for b in S.basis:
        out += [v ^ b for v in out]
    return out


def _dtype(n: int):
    if n <= 8:
        return np.uint8
    if n <= 16:
        return np.uint16
    if n <= 32:
        return np.uint32
    if n <= 64:
        return np.uint64
    raise ValueError("batch kernels support at most 64 columns")


def span_table(basis: Sequence[BitMatrix]) -> np.ndarray:
    """Rows of every GF(2) combination of ``basis``, shape ``(2**d, n)``.

    Entry ``k`` is the sum of the basis matrices whose index bit is set in ``k``.
    """
    if not basis:
        raise ValueError("empty basis")
    n, ncols = basis[0].nrows, basis[0].ncols
    dt = _dtype(ncols)
    table = np.zeros((1, n), dtype=dt)
    for B in basis:
        b = np.array(B.rows, dtype=dt)
        table = np.concatenate([table, table ^ b], axis=0)
    return table


def batch_invertible(rows: np.ndarray) -> np.ndarray:
    """Invertibility of a stack of square matrices given as ``(N, n)`` row ints."""
    work = rows.copy()
    N, n = work.shape
    ok = np.ones(N, dtype=bool)
    idx = np.arange(N)
    one = work.dtype.type(1)
    for c in range(n):
        bit = work.dtype.type(1 << c)
        has = ((work[:, c:] >> work.dtype.type(c)) & one).astype(bool)
        found = has.any(axis=1)
        ok &= found
        p = c + np.argmax(has, axis=1)
        pivot_row = work[idx, p].copy()
        work[idx, p] = work[:, c]
        work[:, c] = pivot_row
        hit = (work & bit).astype(bool)
        hit[:, c] = False
        work ^= np.where(hit, pivot_row[:, None], 0).astype(work.dtype)
    return ok
