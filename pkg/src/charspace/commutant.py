"""Maps commuting with ``f``, plus the hulls and orbits they generate.

``End(V, f)`` has the block-map basis ``phi(i, j, k): u_i -> f^k u_j`` (zero on
the other generators).  Automorphisms are generated by the transvections
``I + phi(i, j, k)`` with ``(i, j, k) != (i, i, 0)``; that this family generates
the whole unit group is an assumption checked by :func:`generated_group`
against :func:`enumerate_aut` on small cases.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .errors import BudgetExceeded, OrbitTooLarge, PreconditionError
from .gf2la import BitMatrix, Subspace, batch_invertible, kernel_basis, span_table
from .nilmod import ModuleSpace

__all__ = [
    "Label",
    "EndoBasis",
    "AutGenSet",
    "Provenance",
    "endo_basis",
    "sylvester_kernel",
    "aut_generators",
    "enumerate_aut",
    "unit_rows",
    "generated_group",
    "coefficients",
    "is_invariant",
    "is_hyperinvariant",
    "is_characteristic",
    "characteristic_hull",
    "orbit",
    "largest_hyperinvariant_inside",
    "DEFAULT_AUT_BUDGET",
    "DEFAULT_ORBIT_CAP",
]

DEFAULT_AUT_BUDGET = 1 << 22
DEFAULT_ORBIT_CAP = 1 << 20

Label = tuple[int, int, int]


def _labels(V: ModuleSpace) -> list[Label]:
    t = V.parts
    return [
        (i, j, k)
        for i in range(V.m)
        for j in range(V.m)
        for k in range(max(0, t[j] - t[i]), t[j])
    ]


def _phi(V: ModuleSpace, label: Label, x: int) -> int:
    i, j, k = label
    c = (x & V.block_masks[i]) >> V.block_offsets[i]
    return (c << (V.block_offsets[j] + k)) & V.block_masks[j]


def _phi_matrix(V: ModuleSpace, label: Label) -> BitMatrix:
    return BitMatrix.from_columns([_phi(V, label, 1 << c) for c in range(V.n)], V.n)


@dataclass(frozen=True)
class EndoBasis:
    labels: tuple[Label, ...]
    elements: tuple[BitMatrix, ...]

    @property
    def dim(self) -> int:
        return len(self.elements)


class Provenance(enum.Enum):
    TRANSVECTION_FAMILY = "transvection_family"
    FULL_ENUMERATION = "full_enumeration"


@dataclass(frozen=True)
class AutGenSet:
    generators: tuple[BitMatrix, ...]
    labels: tuple[Label, ...]
    provenance: Provenance


def endo_basis(V: ModuleSpace) -> EndoBasis:
    labels = tuple(_labels(V))
    return EndoBasis(labels, tuple(_phi_matrix(V, lb) for lb in labels))


def sylvester_kernel(V: ModuleSpace) -> list[BitMatrix]:
    """Basis of ``{A : A N = N A}`` by solving the n^2 linear equations."""
    n = V.n
    N = V.f_matrix
    eqs = []
    for r in range(n):
        for c in range(n):
            eq = 0
            for k in range(n):
                if N.entry(k, c):
                    eq ^= 1 << (r * n + k)
                if N.entry(r, k):
                    eq ^= 1 << (k * n + c)
            eqs.append(eq)
    K = kernel_basis(BitMatrix(tuple(eqs), n * n))
    return [BitMatrix.unvectorize(v, n, n) for v in K.basis]


def aut_generators(V: ModuleSpace) -> AutGenSet:
    labels = tuple(lb for lb in _labels(V) if not (lb[0] == lb[1] and lb[2] == 0))
    ident = BitMatrix.identity(V.n)
    gens = tuple(ident + _phi_matrix(V, lb) for lb in labels)
    return AutGenSet(gens, labels, Provenance.TRANSVECTION_FAMILY)


def unit_rows(V: ModuleSpace, budget: int = DEFAULT_AUT_BUDGET) -> np.ndarray:
    """Rows of every invertible commutant matrix, over the Sylvester basis."""
    basis = sylvester_kernel(V)
    if 1 << len(basis) > budget:
        raise BudgetExceeded(
            f"commutant of {V.segre} has 2^{len(basis)} elements, budget {budget}"
        )
    table = span_table(basis)
    return table[batch_invertible(table)]


def enumerate_aut(V: ModuleSpace, budget: int = DEFAULT_AUT_BUDGET) -> list[BitMatrix]:
    """Every element of ``Aut(V, f)`` exactly once."""
    return [BitMatrix(tuple(int(v) for v in r), V.n) for r in unit_rows(V, budget)]


def coefficients(V: ModuleSpace, M: BitMatrix, labels: Iterable[Label] | None = None) -> int:
    """Coordinates of a commutant matrix in the block-map basis, as a bit mask."""
    if labels is None:
        labels = _labels(V)
    cols = M.columns()
    out = 0
    for idx, (i, j, k) in enumerate(labels):
        if (cols[V.block_offsets[i]] >> (V.block_offsets[j] + k)) & 1:
            out |= 1 << idx
    return out


def generated_group(V: ModuleSpace, budget: int = 1 << 16) -> np.ndarray:
    """Rows of every element of the group generated by the transvections.

    Closure runs in coefficient space: right multiplication by a fixed
    generator is linear, so each generator becomes a lookup table.
    """
    eb = endo_basis(V)
    d = eb.dim
    if 1 << d > budget:
        raise BudgetExceeded(f"commutant dimension {d} exceeds closure budget {budget}")
    labels = eb.labels
    ident = coefficients(V, BitMatrix.identity(V.n), labels)
    tables = []
    for G in aut_generators(V).generators:
        tab = np.zeros(1, dtype=np.int64)
        for B in eb.elements:
            c = coefficients(V, B @ G, labels)
            tab = np.concatenate([tab, tab ^ c])
        tables.append(tab)
    seen = np.zeros(1 << d, dtype=bool)
    seen[ident] = True
    frontier = np.array([ident], dtype=np.int64)
    while frontier.size:
        found = []
        for tab in tables:
            nxt = tab[frontier]
            nxt = nxt[~seen[nxt]]
            if nxt.size:
                nxt = np.unique(nxt)
                seen[nxt] = True
                found.append(nxt)
        frontier = np.unique(np.concatenate(found)) if found else np.empty(0, np.int64)
    return span_table(eb.elements)[np.flatnonzero(seen)]


def _closed(X: Subspace, maps) -> bool:
    return all(g(b) in X for b in X.basis for g in maps)


def is_invariant(V: ModuleSpace, X: Subspace) -> bool:
    return _closed(X, [V.f])


def _maps(V: ModuleSpace, labels: Iterable[Label]):
    return [lambda x, lb=lb: _phi(V, lb, x) for lb in labels]


def is_hyperinvariant(V: ModuleSpace, X: Subspace) -> bool:
    return is_invariant(V, X) and _closed(X, _maps(V, _labels(V)))


def is_characteristic(V: ModuleSpace, X: Subspace) -> bool:
    # sigma(b) = b + phi(b) lies in X iff phi(b) does
    return is_invariant(V, X) and _closed(X, _maps(V, aut_generators(V).labels))


def characteristic_hull(V: ModuleSpace, B: Iterable[int]) -> Subspace:
    """Smallest subspace containing ``B`` that is ``f``- and Aut-invariant."""
    maps = [V.f] + _maps(V, aut_generators(V).labels)
    piv: dict[int, int] = {}

    def add(x: int) -> int:
        while x:
            p = x & -x
            q = piv.get(p)
            if q is None:
                piv[p] = x
                return x
            x ^= q
        return 0

    work = []
    for b in B:
        V.check(b)
        if add(b):
            work.append(b)
    while work:
        v = work.pop()
        for g in maps:
            w = g(v)
            if w and add(w):
                work.append(w)
    return Subspace.from_rows(piv.values(), V.n)


def orbit(V: ModuleSpace, x: int, cap: int = DEFAULT_ORBIT_CAP) -> set[int]:
    """``{alpha x : alpha in Aut(V, f)}`` by closure under the transvections."""
    V.check(x)
    labels = aut_generators(V).labels
    seen = {x}
    work = [x]
    while work:
        v = work.pop()
        for lb in labels:
            w = v ^ _phi(V, lb, v)
            if w not in seen:
                seen.add(w)
                if len(seen) > cap:
                    raise OrbitTooLarge(f"orbit exceeds cap {cap}")
                work.append(w)
    return seen


def largest_hyperinvariant_inside(V: ModuleSpace, X: Subspace) -> Subspace:
    """``X_H``: the direct sum of ``X ∩ <u_i>`` over all blocks."""
    if not is_characteristic(V, X):
        raise PreconditionError("X is not characteristic")
    out = Subspace.zero(V.n)
    for i in range(V.m):
        out = out + (X & V.block(i))
    return out
