"""Characteristic subspaces that are not hyperinvariant.

Shoda's criterion decides whether any exist.  The split ``V = E ⊕ G``
separates unrepeated from repeated blocks; the listings are complete when
at most two block sizes are unrepeated and constructive beyond that.
Block indices are 0-based throughout.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Mapping, Sequence

from .commutant import (
    characteristic_hull,
    is_characteristic,
    is_hyperinvariant,
    largest_hyperinvariant_inside,
)
from .errors import ConstraintViolation, MoreThanTwoUnrepeated, PreconditionError
from .gf2la import Subspace
from .hinv_lattice import count_hinv, hinv_subspaces, lattice_tuples, w_subspace
from .nilmod import ModuleSpace, SegreChar, build_module, cyclic, height, segre_of_restriction

__all__ = [
    "AT_TOP",
    "ShodaWitness",
    "EGSplit",
    "BlockRestriction",
    "ChNotHinvEntry",
    "ClassificationReport",
    "shoda",
    "split_EG",
    "check_decomposition",
    "construct_thm12",
    "classify_two_generator",
    "classify_no_unrepeated",
    "classify_two_unrepeated",
    "construct_k_unrepeated",
    "baer_normal_form",
    "extend_from_E",
    "classification_report",
    "sum_of_powers",
]

# marks a block component that is zero in a normal form
AT_TOP = None


@dataclass(frozen=True)
class ShodaWitness:
    satisfied: bool
    R: int | None = None
    S: int | None = None

    def to_json(self) -> dict:
        return {"satisfied": self.satisfied, "R": self.R, "S": self.S}


def shoda(t: SegreChar) -> ShodaWitness:
    """Least pair of unrepeated sizes ``R < S`` with ``R + 1 < S``, if any."""
    unrep = sorted({p for p in t.parts if t.multiplicity(p) == 1})
    for R, S in itertools.combinations(unrep, 2):
        if R + 1 < S:
            return ShodaWitness(True, R, S)
    return ShodaWitness(False)


@dataclass(frozen=True)
class BlockRestriction:
    """The sub-module spanned by a subset of blocks, with coordinate maps."""

    V: ModuleSpace
    blocks: tuple[int, ...]

    @property
    def sub(self) -> ModuleSpace | None:
        if not self.blocks:
            return None
        return build_module(tuple(self.V.parts[b] for b in self.blocks))

    @property
    def span(self) -> Subspace:
        return self.V.blocks_subspace(self.blocks)

    def to_sub(self, x: int) -> int:
        y, o = 0, 0
        for b in self.blocks:
            t = self.V.parts[b]
            y |= ((x >> self.V.block_offsets[b]) & ((1 << t) - 1)) << o
            o += t
        return y

    def from_sub(self, y: int) -> int:
        x, o = 0, 0
        for b in self.blocks:
            t = self.V.parts[b]
            x |= ((y >> o) & ((1 << t) - 1)) << self.V.block_offsets[b]
            o += t
        return x

    def subspace_to_sub(self, X: Subspace) -> Subspace:
        if not X <= self.span:
            raise PreconditionError("subspace leaves the selected blocks")
        dim = sum(self.V.parts[b] for b in self.blocks)
        return Subspace.from_rows((self.to_sub(b) for b in X.basis), dim)

    def subspace_from_sub(self, Y: Subspace) -> Subspace:
        return Subspace.from_rows((self.from_sub(b) for b in Y.basis), self.V.n)

    def is_characteristic(self, X: Subspace) -> bool:
        if self.sub is None:
            return X.dim == 0
        return is_characteristic(self.sub, self.subspace_to_sub(X))

    def is_hyperinvariant(self, X: Subspace) -> bool:
        if self.sub is None:
            return X.dim == 0
        return is_hyperinvariant(self.sub, self.subspace_to_sub(X))

    def hull(self, B: Sequence[int]) -> Subspace:
        """Characteristic hull computed inside the sub-module."""
        if self.sub is None:
            return Subspace.zero(self.V.n)
        Y = characteristic_hull(self.sub, [self.to_sub(b) for b in B])
        return self.subspace_from_sub(Y)


@dataclass(frozen=True)
class EGSplit:
    E: Subspace
    G: Subspace
    e_blocks: tuple[int, ...]
    g_blocks: tuple[int, ...]


def split_EG(V: ModuleSpace) -> EGSplit:
    unrep = tuple(V.segre.unrepeated_blocks())
    rep = tuple(i for i in range(V.m) if i not in unrep)
    return EGSplit(V.blocks_subspace(unrep), V.blocks_subspace(rep), unrep, rep)


def check_decomposition(V: ModuleSpace, X: Subspace, require_characteristic: bool = True) -> bool:
    """``X = (X∩E) ⊕ (X∩G)``, ``X∩E`` characteristic in E, ``X∩G`` hyperinvariant in G."""
    if require_characteristic and not is_characteristic(V, X):
        raise PreconditionError("X is not characteristic")
    sp = split_EG(V)
    XE, XG = X & sp.E, X & sp.G
    if XE + XG != X:
        return False
    E = BlockRestriction(V, sp.e_blocks)
    G = BlockRestriction(V, sp.g_blocks)
    return E.is_characteristic(XE) and G.is_hyperinvariant(XG)


@dataclass(frozen=True)
class ChNotHinvEntry:
    mu: tuple[int, ...]
    subspace: Subspace
    x_h: Subspace
    restriction_segre: SegreChar
    s_q: tuple[int, int] | None = field(default=None, compare=False)

    @property
    def dim(self) -> int:
        return self.subspace.dim

    def to_json(self) -> dict:
        out = {
            "mu": list(self.mu),
            "dim": self.dim,
            "basis": self.subspace.to_strings(),
            "x_h_basis": self.x_h.to_strings(),
            "restriction_segre": self.restriction_segre.to_json(),
        }
        if self.s_q is not None:
            out["s_q"] = list(self.s_q)
        return out


def sum_of_powers(V: ModuleSpace, mu: Sequence[int]) -> int:
    """``sum_i f^{mu_i} u_i`` (terms with ``mu_i >= t_i`` vanish)."""
    z = 0
    for i, k in enumerate(mu):
        z |= V.gen(i, k)
    return z


def _block_of_size(V: ModuleSpace, size: int) -> int:
    idx = [i for i, t in enumerate(V.parts) if t == size]
    if len(idx) != 1:
        raise PreconditionError(f"block size {size} is not an unrepeated part of {V.segre}")
    return idx[0]


def construct_thm12(V: ModuleSpace, R: int, S: int, s: int, q: int) -> Subspace:
    """Hull of ``f^{R-s} u + f^{S-q} v`` for unrepeated sizes ``R``, ``S``."""
    rho, tau = _block_of_size(V, R), _block_of_size(V, S)
    if not R + 1 < S:
        raise ConstraintViolation(f"R + 1 < S fails for (R, S) = ({R}, {S})")
    failed = []
    if not 0 < s:
        failed.append("0 < s")
    if not s <= R:
        failed.append("s <= R")
    if not s < q:
        failed.append("s < q")
    if not R - s < S - q:
        failed.append("R - s < S - q")
    if failed:
        raise ConstraintViolation(f"(s, q) = ({s}, {q}) violates " + ", ".join(failed))
    z = V.gen(rho, R - s) | V.gen(tau, S - q)
    return characteristic_hull(V, [z])


def classify_two_generator(V: ModuleSpace) -> list[ChNotHinvEntry]:
    """All characteristic non-hyperinvariant subspaces of ``<u_1> ⊕ <u_2>``."""
    if V.m != 2 or not V.parts[0] + 1 < V.parts[1]:
        raise PreconditionError(f"{V.segre} is not a two-block instance with R + 1 < S")
    R, S = V.parts
    out = []
    for s in range(1, R + 1):
        for q in range(s + 1, S + 1):
            if not R - s < S - q:
                continue
            X = construct_thm12(V, R, S, s, q)
            x_h = cyclic(V, V.gen(0, R - s + 1)) + cyclic(V, V.gen(1, S - q + 1))
            out.append(
                ChNotHinvEntry((R - s, S - q), X, x_h, segre_of_restriction(V, X), (s, q))
            )
    if len(set(e.subspace for e in out)) != len(out):
        raise AssertionError("two (s, q) pairs gave the same subspace")
    return out


def classify_no_unrepeated(V: ModuleSpace) -> list[Subspace]:
    """Hulls of ``sum f^{r_i} u_i`` over the lattice, when every size repeats."""
    if V.segre.unrepeated_blocks():
        raise PreconditionError(f"{V.segre} has unrepeated block sizes")
    return [characteristic_hull(V, [sum_of_powers(V, r)]) for r in lattice_tuples(V.segre)]


def classify_two_unrepeated(V: ModuleSpace) -> list[ChNotHinvEntry]:
    """Complete list when exactly two block sizes ``R < S`` are unrepeated.

    Candidates ``mu`` satisfy ``0 <= mu_rho < mu_tau``,
    ``0 < R - mu_rho < S - mu_tau`` and ``mu + e_rho + e_tau`` in the lattice.
    Equal hulls are merged; the kept ``mu`` is the least one whose shifted
    tuple indexes ``X_H``.
    """
    unrep = V.segre.unrepeated_blocks()
    if len(unrep) > 2:
        raise MoreThanTwoUnrepeated(f"{V.segre} has {len(unrep)} unrepeated sizes")
    if len(unrep) < 2 or not shoda(V.segre).satisfied:
        return []
    rho, tau = unrep
    R, S = V.parts[rho], V.parts[tau]
    groups: dict[Subspace, list[tuple[int, ...]]] = {}
    for shifted in lattice_tuples(V.segre):
        if shifted[rho] < 1 or shifted[tau] < 1:
            continue
        mu = list(shifted)
        mu[rho] -= 1
        mu[tau] -= 1
        if not (0 <= mu[rho] < mu[tau] and 0 < R - mu[rho] < S - mu[tau]):
            continue
        X = characteristic_hull(V, [sum_of_powers(V, mu)])
        groups.setdefault(X, []).append(tuple(mu))
    out = []
    for X, mus in groups.items():
        if is_hyperinvariant(V, X):
            raise AssertionError(f"hull for mu={mus[0]} is hyperinvariant")
        x_h = largest_hyperinvariant_inside(V, X)
        keep = None
        for mu in sorted(mus):
            shifted = list(mu)
            shifted[rho] += 1
            shifted[tau] += 1
            if w_subspace(V, shifted) == x_h:
                keep = mu
                break
        if keep is None:
            raise AssertionError(f"no candidate in {mus} indexes X_H")
        out.append(ChNotHinvEntry(keep, X, x_h, segre_of_restriction(V, X)))
    out.sort(key=lambda e: e.mu)
    return out


def construct_k_unrepeated(V: ModuleSpace, mu: Mapping[int, int] | Sequence[int]) -> Subspace:
    """Hull of ``sum_j f^{mu_j} u_{rho_j}`` over chosen unrepeated blocks.

    ``mu`` maps block index to power; a plain sequence is aligned with all
    unrepeated blocks in order.
    """
    unrep = V.segre.unrepeated_blocks()
    if not isinstance(mu, Mapping):
        if len(mu) != len(unrep):
            raise ConstraintViolation(f"expected {len(unrep)} powers, one per unrepeated block")
        mu = dict(zip(unrep, mu))
    blocks = sorted(mu)
    for b in blocks:
        if b not in unrep:
            raise ConstraintViolation(f"block {b} is not unrepeated")
    if len(blocks) < 2:
        raise ConstraintViolation("need at least two unrepeated blocks")
    t = [V.parts[b] for b in blocks]
    m = [mu[b] for b in blocks]
    for tj, mj, b in zip(t, m, blocks):
        if not 0 <= mj < tj:
            raise ConstraintViolation(f"mu[{b}] = {mj} must satisfy 0 <= mu < {tj}")
    for j in range(1, len(blocks)):
        if not m[j - 1] < m[j]:
            raise ConstraintViolation(f"mu must increase: {m[j - 1]} < {m[j]} fails")
        if not t[j - 1] - m[j - 1] < t[j] - m[j]:
            raise ConstraintViolation(
                f"t - mu must increase: {t[j - 1]} - {m[j - 1]} < {t[j]} - {m[j]} fails"
            )
    z = 0
    for b, k in zip(blocks, m):
        z |= V.gen(b, k)
    X = characteristic_hull(V, [z])
    if is_hyperinvariant(V, X):
        raise AssertionError("constructed hull is hyperinvariant")
    return X


def baer_normal_form(V: ModuleSpace, x: int) -> tuple[int | None, int | None]:
    """Powers ``(k1, k2)`` with ``f^{k1} u_1 + f^{k2} u_2`` in the orbit of ``x``."""
    if V.m != 2 or not V.parts[0] < V.parts[1]:
        raise PreconditionError("needs two blocks of distinct sizes")
    V.check(x)
    out = []
    for i in range(2):
        xi = x & V.block_masks[i]
        out.append(height(V, xi) if xi else AT_TOP)
    return out[0], out[1]


def extend_from_E(V: ModuleSpace, Y: Subspace, W: Subspace, Y_s: Subspace) -> Subspace:
    """``X = (Y + W)^c``; checks ``X ∩ E = Y`` and non-hyperinvariance transfer."""
    sp = split_EG(V)
    E = BlockRestriction(V, sp.e_blocks)
    if not Y <= sp.E:
        raise PreconditionError("Y is not inside E")
    if not W <= sp.G:
        raise PreconditionError("W is not inside G")
    if not Y_s <= Y:
        raise PreconditionError("Y_s is not inside Y")
    if not E.is_characteristic(Y):
        raise PreconditionError("Y is not characteristic in E")
    if not is_characteristic(V, Y_s + W):
        raise PreconditionError("Y_s + W is not characteristic in V")
    X = characteristic_hull(V, Y.basis + W.basis)
    if X & sp.E != Y:
        raise AssertionError("X ∩ E differs from Y")
    if not E.is_hyperinvariant(Y) and is_hyperinvariant(V, X):
        raise AssertionError("X is hyperinvariant although Y is not")
    return X


def _k_unrepeated_family(V: ModuleSpace) -> list[ChNotHinvEntry]:
    unrep = V.segre.unrepeated_blocks()
    found: dict[Subspace, tuple[int, ...]] = {}
    for k in range(2, len(unrep) + 1):
        for blocks in itertools.combinations(unrep, k):
            ranges = [range(V.parts[b]) for b in blocks]
            for powers in itertools.product(*ranges):
                try:
                    X = construct_k_unrepeated(V, dict(zip(blocks, powers)))
                except ConstraintViolation:
                    continue
                mu = [V.parts[i] for i in range(V.m)]
                for b, p in zip(blocks, powers):
                    mu[b] = p
                found.setdefault(X, tuple(mu))
    return sorted(
        (
            ChNotHinvEntry(
                mu, X, largest_hyperinvariant_inside(V, X), segre_of_restriction(V, X)
            )
            for X, mu in found.items()
        ),
        key=lambda e: e.mu,
    )


@dataclass(frozen=True)
class ClassificationReport:
    segre: SegreChar
    shoda: ShodaWitness
    hinv: dict[tuple[int, ...], Subspace]
    ch_not_hinv: list[ChNotHinvEntry]
    complete: bool

    @property
    def n_hinv(self) -> int:
        return len(self.hinv)

    def to_json(self) -> dict:
        return {
            "segre": self.segre.to_json(),
            "shoda": self.shoda.to_json(),
            "n_hinv": self.n_hinv,
            "hinv": [
                {"r": list(r), "dim": W.dim, "basis": W.to_strings()}
                for r, W in self.hinv.items()
            ],
            "ch_not_hinv": [e.to_json() for e in self.ch_not_hinv],
            "complete": self.complete,
        }


def classification_report(V: ModuleSpace) -> ClassificationReport:
    """Shoda verdict, the hyperinvariant lattice and Chinv minus Hinv.

    With three or more unrepeated sizes only the constructive family is
    listed and ``complete`` is false.
    """
    t = V.segre
    hinv = hinv_subspaces(V)
    if len(hinv) != count_hinv(t):
        raise AssertionError("lattice size differs from the product formula")
    witness = shoda(t)
    unrep = t.unrepeated_blocks()
    if not witness.satisfied:
        entries, complete = [], True
    elif len(unrep) == 2:
        entries, complete = classify_two_unrepeated(V), True
    else:
        entries, complete = _k_unrepeated_family(V), False
    return ClassificationReport(t, witness, hinv, entries, complete)
