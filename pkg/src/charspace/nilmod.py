"""The canonical nilpotent module for a Segre characteristic.

Block ``i`` (0-based) occupies coordinates ``offset[i] .. offset[i] + t_i - 1``
and carries ``u_i, f u_i, ..., f^(t_i - 1) u_i``; ``f`` is the lower shift
inside every block.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property
from typing import Iterator, Sequence

from .gf2la import BitMatrix, DimensionMismatch, Subspace, image_basis, kernel_basis

__all__ = [
    "INFINITY",
    "NEG_INFINITY",
    "SegreChar",
    "ModuleSpace",
    "Indicator",
    "NotInvariant",
    "partitions",
    "build_module",
    "exponent",
    "height",
    "indicator",
    "has_gap",
    "ulm_invariant",
    "is_generator",
    "project",
    "cyclic",
    "min_max_laws_check",
    "segre_of_restriction",
]

INFINITY = math.inf
NEG_INFINITY = -math.inf


class NotInvariant(ValueError):
    """A subspace that should be f-invariant is not."""


def _render(h: float | int) -> int | str:
    if h == INFINITY:
        return "inf"
    if h == NEG_INFINITY:
        return "-inf"
    return int(h)


@dataclass(frozen=True)
class SegreChar:
    """Nondecreasing block sizes ``t_1 <= ... <= t_m``."""

    parts: tuple[int, ...]

    def __post_init__(self) -> None:
        parts = tuple(int(p) for p in self.parts)
        object.__setattr__(self, "parts", parts)
        if any(p < 1 for p in parts):
            raise ValueError(f"block sizes must be positive: {parts}")
        if any(a > b for a, b in zip(parts, parts[1:])):
            raise ValueError(f"block sizes must be nondecreasing: {parts}")

    @classmethod
    def of(cls, parts: Sequence[int]) -> SegreChar:
        """Build from parts in any order."""
        return cls(tuple(sorted(parts)))

    @classmethod
    def parse(cls, text: str) -> SegreChar:
        items = [s for s in text.replace(" ", "").split(",") if s]
        return cls.of([int(s) for s in items])

    @property
    def m(self) -> int:
        return len(self.parts)

    @property
    def n(self) -> int:
        return sum(self.parts)

    def multiplicity(self, r: int) -> int:
        return self.parts.count(r)

    def unrepeated_blocks(self) -> list[int]:
        return [i for i, t in enumerate(self.parts) if self.parts.count(t) == 1]

    def commutant_dim(self) -> int:
        return sum(min(a, b) for a in self.parts for b in self.parts)

    def __str__(self) -> str:
        return ",".join(map(str, self.parts))

    def to_json(self) -> list[int]:
        return list(self.parts)


def partitions(n: int, min_part: int = 1) -> Iterator[tuple[int, ...]]:
    """Nondecreasing partitions of ``n``; ``n = 0`` yields the empty one."""
    if n == 0:
        yield ()
        return
    for first in range(min_part, n + 1):
        for rest in partitions(n - first, first):
            yield (first,) + rest


class ModuleSpace:
    """F_2^n with the nilpotent ``f`` of a given Segre characteristic."""

    def __init__(self, segre: SegreChar):
        if segre.m == 0:
            raise ValueError("empty partition")
        self.segre = segre
        self.n = segre.n
        self.m = segre.m
        offs, o = [], 0
        for t in segre.parts:
            offs.append(o)
            o += t
        self.block_offsets = tuple(offs)
        self.generators = tuple(1 << o for o in offs)
        self.block_masks = tuple(
            ((1 << t) - 1) << o for o, t in zip(offs, segre.parts)
        )
        last = sum(1 << (o + t - 1) for o, t in zip(offs, segre.parts))
        self._shift_mask = ((1 << self.n) - 1) & ~last
        rows = [0] * self.n
        for o, t in zip(offs, segre.parts):
            for k in range(t - 1):
                rows[o + k + 1] |= 1 << (o + k)
        self.f_matrix = BitMatrix(tuple(rows), self.n)

    def __repr__(self) -> str:
        return f"ModuleSpace({self.segre})"

    def __eq__(self, other: object) -> bool:
        return isinstance(other, ModuleSpace) and other.segre == self.segre

    def __hash__(self) -> int:
        return hash(self.segre)

    @property
    def parts(self) -> tuple[int, ...]:
        return self.segre.parts

    def check(self, x: int) -> None:
        if x < 0 or x >> self.n:
            raise DimensionMismatch(f"vector does not fit in dimension {self.n}")

    def f(self, x: int) -> int:
        return (x & self._shift_mask) << 1

    def f_pow(self, x: int, k: int) -> int:
        for _ in range(k):
            if not x:
                break
            x = (x & self._shift_mask) << 1
        return x

    def gen(self, i: int, k: int = 0) -> int:
        """``f^k u_i``; zero once ``k >= t_i``."""
        if k >= self.parts[i]:
            return 0
        return 1 << (self.block_offsets[i] + k)

    def block(self, i: int) -> Subspace:
        """The cyclic block ``<u_i>``."""
        o, t = self.block_offsets[i], self.parts[i]
        return Subspace.coordinate(range(o, o + t), self.n)

    def blocks_subspace(self, blocks: Sequence[int]) -> Subspace:
        coords = [
            self.block_offsets[i] + k for i in blocks for k in range(self.parts[i])
        ]
        return Subspace.coordinate(coords, self.n)

    def image_subspace(self, X: Subspace) -> Subspace:
        return Subspace.from_rows((self.f(b) for b in X.basis), self.n)

    def f_power_matrix(self, k: int) -> BitMatrix:
        return self._powers[min(k, self.n)]

    @cached_property
    def _powers(self) -> list[BitMatrix]:
        out = [BitMatrix.identity(self.n)]
        for _ in range(self.n):
            out.append(out[-1] @ self.f_matrix)
        return out

    @cached_property
    def _images(self) -> list[Subspace]:
        return [image_basis(P) for P in self._powers]

    @cached_property
    def _kernels(self) -> list[Subspace]:
        return [kernel_basis(P) for P in self._powers]

    def im(self, k: int) -> Subspace:
        """``Im f^k``."""
        return self._images[min(k, self.n)]

    def ker(self, k: int) -> Subspace:
        """``Ker f^k``, written ``V[f^k]``."""
        return self._kernels[min(k, self.n)]


def build_module(t: SegreChar | Sequence[int]) -> ModuleSpace:
    if not isinstance(t, SegreChar):
        t = SegreChar(tuple(t))
    return ModuleSpace(t)


def exponent(V: ModuleSpace, x: int) -> int:
    V.check(x)
    e = 0
    while x:
        x = V.f(x)
        e += 1
    return e


def height(V: ModuleSpace, x: int) -> int | float:
    V.check(x)
    if not x:
        return NEG_INFINITY
    q = 0
    while x in V.im(q + 1):
        q += 1
    return q


@dataclass(frozen=True)
class Indicator:
    """Heights ``h(f^j x)`` for ``j < exponent``; the rest are infinite."""

    exponent: int
    heights: tuple[int, ...]

    def full(self, n: int) -> tuple[int | float, ...]:
        return self.heights + (INFINITY,) * (n - self.exponent)

    def gaps(self) -> list[int]:
        h = self.heights
        return [j for j in range(1, self.exponent) if h[j] > 1 + h[j - 1]]

    def to_json(self, n: int) -> list[int | str]:
        return [_render(h) for h in self.full(n)]


def indicator(V: ModuleSpace, x: int) -> Indicator:
    V.check(x)
    hs = []
    while x:
        hs.append(height(V, x))
        x = V.f(x)
    return Indicator(len(hs), tuple(hs))


def has_gap(ind: Indicator) -> bool:
    return bool(ind.gaps())


def ulm_invariant(V: ModuleSpace, r: int) -> int:
    """``dim(Ker f ∩ Im f^(r-1)) - dim(Ker f ∩ Im f^r)``."""
    if not 1 <= r <= V.n:
        raise ValueError(f"r must lie in 1..{V.n}, got {r}")
    K = V.ker(1)
    return (K & V.im(r - 1)).dim - (K & V.im(r)).dim


def is_generator(V: ModuleSpace, u: int) -> bool:
    V.check(u)
    if not u:
        return False
    ind = indicator(V, u)
    if ind.exponent not in V.parts:
        return False
    return all(h == j for j, h in enumerate(ind.heights))


def project(V: ModuleSpace, x: int, i: int) -> int:
    """Block-``i`` component of ``x``."""
    if not 0 <= i < V.m:
        raise IndexError(f"block index {i} out of range 0..{V.m - 1}")
    V.check(x)
    return x & V.block_masks[i]


def cyclic(V: ModuleSpace, x: int) -> Subspace:
    """``<x> = span{f^i x}``."""
    V.check(x)
    vecs = []
    while x:
        vecs.append(x)
        x = V.f(x)
    return Subspace.from_rows(vecs, V.n)


def min_max_laws_check(V: ModuleSpace, components: Sequence[int]) -> tuple[int, int]:
    """(min of component heights, max of component exponents), nonzero parts only.

    ``components[i]`` must lie in block ``i``.
    """
    if len(components) != V.m:
        raise ValueError(f"expected {V.m} components")
    hs, es = [], []
    for i, xi in enumerate(components):
        V.check(xi)
        if xi & ~V.block_masks[i]:
            raise ValueError(f"component {i} leaves its block")
        if xi:
            hs.append(height(V, xi))
            es.append(exponent(V, xi))
    if not hs:
        raise ValueError("all components are zero")
    return min(hs), max(es)


def segre_of_restriction(V: ModuleSpace, X: Subspace) -> SegreChar:
    """Block sizes of ``f`` restricted to an invariant ``X``, from ``dim f^k X``."""
    if X.ambient != V.n:
        raise DimensionMismatch("subspace ambient differs from module")
    if not V.image_subspace(X) <= X:
        raise NotInvariant("subspace is not f-invariant")
    ranks = [X.dim]
    Y = X
    while ranks[-1]:
        Y = V.image_subspace(Y)
        ranks.append(Y.dim)
    ranks += [0, 0]
    parts = []
    for k in range(1, len(ranks) - 1):
        mult = (ranks[k - 1] - ranks[k]) - (ranks[k] - ranks[k + 1])
        parts += [k] * mult
    return SegreChar(tuple(parts))
