"""The lattice of hyperinvariant subspaces, indexed by tuples ``r``.

``r`` ranges over tuples with ``0 <= r_1 <= ... <= r_m`` and
``0 <= t_1 - r_1 <= ... <= t_m - r_m``; the subspace is
``W(r) = f^{r_1}<u_1> + ... + f^{r_m}<u_m>``.
"""

from __future__ import annotations

from typing import Sequence

from .commutant import is_hyperinvariant
from .errors import PreconditionError
from .gf2la import Subspace
from .nilmod import ModuleSpace, SegreChar

__all__ = [
    "in_lattice",
    "lattice_tuples",
    "w_subspace",
    "w_from_intersections",
    "count_hinv",
    "hinv_subspaces",
    "covering_pairs",
    "lattice_iso_check",
    "to_dot",
    "lattice_json",
]


def in_lattice(t: Sequence[int], r: Sequence[int]) -> bool:
    if len(r) != len(t):
        return False
    prev_r, prev_d = 0, 0
    for ti, ri in zip(t, r):
        d = ti - ri
        if ri < prev_r or d < prev_d:
            return False
        prev_r, prev_d = ri, d
    return True


def lattice_tuples(t: SegreChar) -> list[tuple[int, ...]]:
    """All tuples of the lattice in lexicographic order (backtracking)."""
    parts = t.parts
    out: list[tuple[int, ...]] = []

    def extend(prefix: list[int], prev_r: int, prev_d: int) -> None:
        i = len(prefix)
        if i == len(parts):
            out.append(tuple(prefix))
            return
        ti = parts[i]
        # r >= prev_r and t_i - r >= prev_d
        for r in range(prev_r, ti - prev_d + 1):
            prefix.append(r)
            extend(prefix, r, ti - r)
            prefix.pop()

    extend([], 0, 0)
    return out


def count_hinv(t: SegreChar) -> int:
    """Product of ``1 + t_i - t_(i-1)`` with ``t_0 = 0``."""
    prev = 0
    out = 1
    for ti in t.parts:
        out *= 1 + ti - prev
        prev = ti
    return out


def w_from_intersections(V: ModuleSpace, r: Sequence[int]) -> Subspace:
    """``sum_i f^{r_i} V ∩ Ker f^{t_i - r_i}``."""
    out = Subspace.zero(V.n)
    for ti, ri in zip(V.parts, r):
        out = out + (V.im(ri) & V.ker(ti - ri))
    return out


def _w_blocks(V: ModuleSpace, r: Sequence[int]) -> Subspace:
    coords = [
        V.block_offsets[i] + k for i, ri in enumerate(r) for k in range(ri, V.parts[i])
    ]
    return Subspace.coordinate(coords, V.n)


def w_subspace(V: ModuleSpace, r: Sequence[int]) -> Subspace:
    """``W(r)``, computed both ways; the two must agree."""
    if not in_lattice(V.parts, r):
        raise PreconditionError(f"{tuple(r)} is not in the lattice of {V.segre}")
    W = _w_blocks(V, r)
    if W != w_from_intersections(V, r):
        raise AssertionError(f"W{tuple(r)}: block and intersection forms differ")
    return W


def hinv_subspaces(V: ModuleSpace) -> dict[tuple[int, ...], Subspace]:
    """``r -> W(r)`` over the whole lattice; raises on a collision."""
    out: dict[tuple[int, ...], Subspace] = {}
    seen: dict[Subspace, tuple[int, ...]] = {}
    for r in lattice_tuples(V.segre):
        W = w_subspace(V, r)
        if W in seen:
            raise AssertionError(f"W{r} coincides with W{seen[W]}")
        seen[W] = r
        out[r] = W
    return out


def _leq(r: Sequence[int], s: Sequence[int]) -> bool:
    return all(a <= b for a, b in zip(r, s))


def covering_pairs(tuples: Sequence[tuple[int, ...]]) -> list[tuple[tuple[int, ...], tuple[int, ...]]]:
    """Pairs ``(r, s)`` with ``s`` covering ``r`` in the componentwise order."""
    out = []
    for r in tuples:
        above = [s for s in tuples if s != r and _leq(r, s)]
        for s in above:
            if not any(w != s and _leq(w, s) for w in above):
                out.append((r, s))
    return out


def lattice_iso_check(V: ModuleSpace) -> bool:
    """``r <= s`` iff ``W(r) ⊇ W(s)``, and ``r -> W(r)`` is injective."""
    ws = hinv_subspaces(V)
    if len(set(ws.values())) != len(ws):
        return False
    items = list(ws.items())
    for r, Wr in items:
        if not is_hyperinvariant(V, Wr):
            return False
        for s, Ws in items:
            if _leq(r, s) != (Wr >= Ws):
                return False
    return True


def _label(r: Sequence[int]) -> str:
    return "(" + ",".join(map(str, r)) + ")"


def to_dot(V: ModuleSpace) -> str:
    ws = hinv_subspaces(V)
    lines = [f'digraph "Hinv({V.segre})" {{', "  rankdir=BT;"]
    for r, W in ws.items():
        lines.append(f'  "{_label(r)}" [label="r={_label(r)}\\ndim={W.dim}"];')
    # edges point from the smaller subspace W(s) up to W(r) ⊇ W(s)
    for r, s in covering_pairs(list(ws)):
        lines.append(f'  "{_label(s)}" -> "{_label(r)}";')
    lines.append("}")
    return "\n".join(lines) + "\n"


def lattice_json(V: ModuleSpace) -> list[dict]:
    return [
        {"r": list(r), "dim": W.dim, "basis": W.to_strings()}
        for r, W in hinv_subspaces(V).items()
    ]
