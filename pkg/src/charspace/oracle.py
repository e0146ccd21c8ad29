"""Brute-force ground truth at small n.

Every subspace of F_2^n (or every f-invariant one) is classified from the raw
definitions: hyperinvariance against a basis of the commutant obtained by
solving ``A N = N A``, and characteristicity against a basis of the linear
span of the unit group.  The block-map basis and the transvection family of
:mod:`charspace.commutant` are never consulted here.

The span of the units is found by one of three routes, recorded in the
report as ``aut_mode``:

``enumerated``
    every unit is listed (commutant of size at most ``aut_budget``);
``sampled``
    random units already span the whole commutant, which settles the span
    exactly without listing the group;
``indicator``
    neither of the above; orbits are taken to be the indicator classes.
"""

from __future__ import annotations

import itertools
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Sequence

import numpy as np

from .classify import classification_report
from .commutant import (
    DEFAULT_AUT_BUDGET,
    is_characteristic,
    is_hyperinvariant,
    sylvester_kernel,
)
from .errors import BudgetExceeded
from .gf2la import BitMatrix, Subspace, batch_invertible, kernel_basis, members, span_table
from .hinv_lattice import hinv_subspaces
from .nilmod import ModuleSpace, SegreChar, build_module, indicator, partitions

__all__ = [
    "DEFAULT_SUBSPACE_BUDGET",
    "OracleReport",
    "galois_number",
    "enumerate_subspaces",
    "invariant_subspaces",
    "unit_span",
    "classify_brute",
    "cross_validate",
    "sweep",
    "thread_count",
]

DEFAULT_SUBSPACE_BUDGET = 10**7
_SAMPLE_BATCH = 4096
_SAMPLE_ROUNDS = 64
_CHUNK_BITS = 20


def galois_number(n: int) -> int:
    """Number of subspaces of F_2^n: ``G(k+1) = 2 G(k) + (2^k - 1) G(k-1)``."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    prev, cur = 1, 2  # G(0), G(1)
    if n == 0:
        return 1
    for k in range(1, n):
        prev, cur = cur, 2 * cur + ((1 << k) - 1) * prev
    return cur


def enumerate_subspaces(n: int, budget: int = DEFAULT_SUBSPACE_BUDGET) -> Iterator[Subspace]:
    """Every subspace of F_2^n once, by rank and then by pivot set.

    For pivots ``p_0 < ... < p_{k-1}`` (lowest set bits), row ``j`` may carry
    any bit above ``p_j`` that is not itself a pivot.
    """
    total = galois_number(n)
    if total > budget:
        raise BudgetExceeded(f"{total} subspaces of F_2^{n} exceed budget {budget}")
    for k in range(n + 1):
        for piv in itertools.combinations(range(n), k):
            pset = set(piv)
            options = []
            for p in piv:
                free = [q for q in range(p + 1, n) if q not in pset]
                opts = [1 << p]
                for q in free:
                    opts += [o | (1 << q) for o in opts]
                options.append(opts)
            for rows in itertools.product(*options):
                yield Subspace(n, rows)


def invariant_subspaces(V: ModuleSpace) -> list[Subspace]:
    """All f-invariant subspaces, grown one vector at a time from 0.

    ``X + <v>`` is invariant exactly when ``X`` is and ``f v`` lies in ``X``.
    """
    n = V.n
    seen = {Subspace.zero(n)}
    frontier = [Subspace.zero(n)]
    while frontier:
        nxt = []
        for X in frontier:
            # preimage of X under f, as the kernel of v -> (f v mod X)
            cols = [X.reduce(V.f(1 << c)) for c in range(n)]
            pre = kernel_basis(BitMatrix.from_columns(cols, n))
            extra = [b for b in pre.basis if X.reduce(b)]
            comp = Subspace.from_rows((X.reduce(b) for b in extra), n)
            for v in members(comp)[1:]:
                Y = Subspace.from_rows(X.basis + (v,), n)
                if Y not in seen:
                    seen.add(Y)
                    nxt.append(Y)
        frontier = nxt
    return sorted(seen, key=lambda S: (S.dim, S.basis))


def _span_ints(vals: Iterable[int], d: int, basis: dict[int, int] | None = None) -> dict[int, int]:
    piv = {} if basis is None else basis
    for v in vals:
        while v:
            low = v & -v
            q = piv.get(low)
            if q is None:
                piv[low] = v
                break
            v ^= q
        if len(piv) == d:
            break
    return piv


def _span_array(vals: np.ndarray, basis: list[int]) -> None:
    """Extend ``basis`` (pivots cleared from later members) by ``vals``."""
    v = vals[vals != 0]
    for p in basis:
        if not v.size:
            return
        p = np.uint64(p)
        v = np.where((v & (p & (~p + np.uint64(1)))) != 0, v ^ p, v)
    v = v[v != 0]
    while v.size:
        p = v[0]
        basis.append(int(p))
        low = p & (~p + np.uint64(1))
        v = np.where((v & low) != 0, v ^ p, v)
        v = v[v != 0]


def _combine(basis: Sequence[BitMatrix], coeff: int) -> BitMatrix:
    n = basis[0].nrows
    rows = [0] * n
    for k, B in enumerate(basis):
        if coeff >> k & 1:
            rows = [a ^ b for a, b in zip(rows, B.rows)]
    return BitMatrix(tuple(rows), basis[0].ncols)


def unit_span(
    V: ModuleSpace, aut_budget: int = DEFAULT_AUT_BUDGET, seed: int = 0
) -> tuple[list[BitMatrix] | None, str]:
    """A basis of the linear span of ``Aut(V, f)`` and how it was obtained.

    Returns ``(None, "indicator")`` when neither exact route applies.
    """
    syl = sylvester_kernel(V)
    d = len(syl)
    if 1 << d <= aut_budget:
        # low coefficient bits via one table, high bits chunk by chunk
        lo = min(d, _CHUNK_BITS)
        table = span_table(syl[:lo])
        offsets = np.arange(1 << lo, dtype=np.uint64)
        coeffs: list[int] = []
        for hi in range(1 << (d - lo)):
            shift = np.zeros(V.n, dtype=table.dtype)
            for k in range(d - lo):
                if hi >> k & 1:
                    shift ^= np.array(syl[lo + k].rows, dtype=table.dtype)
            ok = batch_invertible(table ^ shift)
            _span_array(offsets[ok] | np.uint64(hi << lo), coeffs)
        return [_combine(syl, c) for c in coeffs], "enumerated"
    rng = np.random.default_rng(seed)
    n = V.n
    B = np.array([M.rows for M in syl], dtype=np.uint64)
    weights = [1 << k for k in range(d)]
    piv: dict[int, int] = {}
    for _ in range(_SAMPLE_ROUNDS):
        C = rng.integers(0, 2, size=(_SAMPLE_BATCH, d), dtype=np.uint8).astype(bool)
        rows = np.zeros((_SAMPLE_BATCH, n), dtype=np.uint64)
        for k in range(d):
            rows ^= np.where(C[:, k, None], B[k][None, :], np.uint64(0))
        ok = batch_invertible(rows)
        units = (sum(w for w, bit in zip(weights, c) if bit) for c in C[ok].tolist())
        _span_ints(units, d, piv)
        if len(piv) == d:
            return list(syl), "sampled"
    return None, "indicator"


def _apply_cols(cols: Sequence[int], x: int) -> int:
    y, i = 0, 0
    while x:
        if x & 1:
            y ^= cols[i]
        x >>= 1
        i += 1
    return y


def _closed_under(X: Subspace, maps: Sequence[Sequence[int]]) -> bool:
    return all(_apply_cols(c, b) in X for c in maps for b in X.basis)


@dataclass
class OracleReport:
    segre: SegreChar
    counts: dict[str, int]
    mismatches: list[dict] = field(default_factory=list)
    aut_mode: str = "enumerated"
    source: str = "all"
    hyperinvariant: list[Subspace] = field(default_factory=list, repr=False)
    ch_not_hinv: list[Subspace] = field(default_factory=list, repr=False)
    extras: list[Subspace] = field(default_factory=list, repr=False)
    # (subspace, characteristic, hyperinvariant) for every invariant subspace
    verdicts: list[tuple[Subspace, bool, bool]] = field(default_factory=list, repr=False)

    @property
    def ok(self) -> bool:
        return not self.mismatches

    def to_json(self) -> dict:
        return {
            "segre": self.segre.to_json(),
            "counts": dict(sorted(self.counts.items())),
            "aut_mode": self.aut_mode,
            "source": self.source,
            "ch_not_hinv": [X.to_strings() for X in self.ch_not_hinv],
            "extras": [X.to_strings() for X in self.extras],
            "mismatches": self.mismatches,
        }


def classify_brute(
    V: ModuleSpace,
    budget: int = DEFAULT_SUBSPACE_BUDGET,
    aut_budget: int = DEFAULT_AUT_BUDGET,
    source: str = "all",
    subspaces: Iterable[Subspace] | None = None,
) -> OracleReport:
    """Verdicts for every subspace from the definitions alone.

    ``source="all"`` scans all subspaces of F_2^n, ``"invariant"`` only the
    f-invariant ones (the others are never characteristic).
    """
    if subspaces is None:
        if source == "all":
            subspaces = enumerate_subspaces(V.n, budget)
        elif source == "invariant":
            subspaces = invariant_subspaces(V)
        else:
            raise ValueError(f"unknown source {source!r}")
    f_cols = V.f_matrix.columns()
    endo = [M.columns() for M in sylvester_kernel(V)]
    span, mode = unit_span(V, aut_budget)
    if span is not None:
        units = [M.columns() for M in span]
    else:
        classes: dict[tuple, int] = {}
        for x in range(1 << V.n):
            key = indicator(V, x).heights
            classes[key] = classes.get(key, 0) | (1 << x)
        class_of = {}
        for mask in classes.values():
            y = mask
            while y:
                low = y & -y
                class_of[low.bit_length() - 1] = mask
                y ^= low
    counts = dict(total=0, invariant=0, characteristic=0, hyperinvariant=0, ch_not_hinv=0)
    rep = OracleReport(V.segre, counts, aut_mode=mode, source=source)
    for X in subspaces:
        counts["total"] += 1
        if not _closed_under(X, [f_cols]):
            continue
        counts["invariant"] += 1
        if span is not None:
            ch = _closed_under(X, units)
        else:
            mem = 0
            for v in members(X):
                mem |= 1 << v
            ch = all(class_of[v] & ~mem == 0 for v in members(X))
        hy = _closed_under(X, endo)
        if hy and not ch:
            rep.mismatches.append(
                {"subspace": X.to_strings(), "kind": "hyperinvariant but not characteristic"}
            )
        counts["characteristic"] += ch
        counts["hyperinvariant"] += hy
        if hy:
            rep.hyperinvariant.append(X)
        if ch and not hy:
            counts["ch_not_hinv"] += 1
            rep.ch_not_hinv.append(X)
        rep.verdicts.append((X, ch, hy))
    return rep


def _mismatch(X: Subspace, kind: str, structured, oracle) -> dict:
    return {
        "subspace": X.to_strings(),
        "kind": kind,
        "structured_verdict": structured,
        "oracle_verdict": oracle,
    }


def cross_validate(
    V: ModuleSpace,
    budget: int = DEFAULT_SUBSPACE_BUDGET,
    aut_budget: int = DEFAULT_AUT_BUDGET,
    source: str = "all",
    subspaces: Iterable[Subspace] | None = None,
) -> OracleReport:
    """Oracle verdicts diffed against the structured modules."""
    rep = classify_brute(V, budget, aut_budget, source, subspaces)
    for X, ch, hy in rep.verdicts:
        sc, sh = is_characteristic(V, X), is_hyperinvariant(V, X)
        if sc != ch:
            rep.mismatches.append(_mismatch(X, "characteristic", sc, ch))
        if sh != hy:
            rep.mismatches.append(_mismatch(X, "hyperinvariant", sh, hy))
    lattice = set(hinv_subspaces(V).values())
    oracle_h = set(rep.hyperinvariant)
    for X in sorted(lattice - oracle_h, key=lambda S: S.basis):
        rep.mismatches.append(_mismatch(X, "hinv lattice", True, False))
    for X in sorted(oracle_h - lattice, key=lambda S: S.basis):
        rep.mismatches.append(_mismatch(X, "hinv lattice", False, True))
    report = classification_report(V)
    listed = {e.subspace for e in report.ch_not_hinv}
    found = set(rep.ch_not_hinv)
    for X in sorted(listed - found, key=lambda S: S.basis):
        rep.mismatches.append(_mismatch(X, "ch_not_hinv", True, False))
    missing = sorted(found - listed, key=lambda S: S.basis)
    if report.complete:
        for X in missing:
            rep.mismatches.append(_mismatch(X, "ch_not_hinv", False, True))
    else:
        rep.extras = missing
    return rep


def thread_count() -> int:
    try:
        return max(1, int(os.environ.get("CHARSPACE_THREADS", "1")))
    except ValueError:
        return 1


def _sweep_one(args) -> OracleReport:
    parts, budget, aut_budget = args
    return cross_validate(build_module(parts), budget, aut_budget)


def sweep(
    ns: Iterable[int],
    budget: int = DEFAULT_SUBSPACE_BUDGET,
    aut_budget: int = DEFAULT_AUT_BUDGET,
    threads: int | None = None,
) -> list[OracleReport]:
    """``cross_validate`` over every partition of every ``n`` in ``ns``."""
    jobs = [(p, budget, aut_budget) for n in ns if n > 0 for p in partitions(n)]
    threads = thread_count() if threads is None else threads
    if threads > 1:
        with ProcessPoolExecutor(threads) as pool:
            return list(pool.map(_sweep_one, jobs))
    out = []
    cache: dict[int, list[Subspace]] = {}
    for parts, b, a in jobs:
        n = sum(parts)
        if n not in cache:
            cache.clear()
            cache[n] = list(enumerate_subspaces(n, b))
        out.append(cross_validate(build_module(parts), b, a, subspaces=cache[n]))
    return out
