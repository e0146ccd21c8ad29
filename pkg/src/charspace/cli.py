"""Command-line front end.

Exit codes: 0 ok, 1 usage or parse error, 2 constraint violation,
3 budget exceeded, 4 oracle mismatch.
"""

from __future__ import annotations

import argparse
import json
import re
import sys
from dataclasses import dataclass

from .classify import classification_report, sum_of_powers
from .commutant import (
    DEFAULT_AUT_BUDGET,
    DEFAULT_ORBIT_CAP,
    characteristic_hull,
    is_characteristic,
    is_hyperinvariant,
    largest_hyperinvariant_inside,
    orbit,
)
from .errors import BudgetExceeded, ConstraintViolation, PreconditionError
from .gf2la import DimensionMismatch, vec_to_str
from .hinv_lattice import count_hinv, hinv_subspaces, lattice_json, to_dot
from .nilmod import ModuleSpace, SegreChar, build_module, indicator, ulm_invariant
from .oracle import DEFAULT_SUBSPACE_BUDGET, cross_validate, sweep

EXIT_OK, EXIT_USAGE, EXIT_CONSTRAINT, EXIT_BUDGET, EXIT_MISMATCH = 0, 1, 2, 3, 4


class VectorParseError(ValueError):
    def __init__(self, text: str, pos: int, message: str):
        super().__init__(f"position {pos}: {message} in {text!r}")
        self.pos = pos


_TOKEN = re.compile(r"\s*(?:(?P<num>\d+)|(?P<sym>[fu^+]))")


@dataclass(frozen=True)
class VectorExpr:
    """A GF(2) sum of terms ``f^k u_i``; ``terms`` holds ``(power, block)``, blocks 1-based."""

    terms: frozenset[tuple[int, int]]

    @classmethod
    def parse(cls, text: str) -> VectorExpr:
        toks = []
        pos = 0
        while pos < len(text):
            if text[pos:].strip() == "":
                break
            m = _TOKEN.match(text, pos)
            if not m:
                start = len(text) - len(text[pos:].lstrip())
                raise VectorParseError(text, start, f"unexpected character {text[start]!r}")
            kind = "num" if m.group("num") else m.group("sym")
            toks.append((kind, m.group("num") or m.group("sym"), m.start(m.lastindex)))
            pos = m.end()
        toks.append(("end", "", len(text)))
        if toks[0][0] == "num" and toks[0][1] == "0" and toks[1][0] == "end":
            return cls(frozenset())
        i = 0

        def expect(kind: str, what: str):
            nonlocal i
            tok = toks[i]
            if tok[0] != kind:
                found = "end of input" if tok[0] == "end" else repr(tok[1])
                raise VectorParseError(text, tok[2], f"expected {what}, found {found}")
            i += 1
            return tok

        terms: set[tuple[int, int]] = set()
        while True:
            power = 0
            if toks[i][0] == "f":
                i += 1
                power = 1
                if toks[i][0] == "^":
                    i += 1
                    power = int(expect("num", "an exponent")[1])
            expect("u", "'u' or 'f'")
            tok = expect("num", "a block number")
            block = int(tok[1])
            if block < 1:
                raise VectorParseError(text, tok[2], "block numbers start at 1")
            terms ^= {(power, block)}
            if toks[i][0] == "end":
                break
            expect("+", "'+'")
        return cls(frozenset(terms))

    @classmethod
    def from_vector(cls, V: ModuleSpace, x: int) -> VectorExpr:
        V.check(x)
        terms = set()
        for i, (o, t) in enumerate(zip(V.block_offsets, V.parts)):
            for k in range(t):
                if x >> (o + k) & 1:
                    terms.add((k, i + 1))
        return cls(frozenset(terms))

    def to_vector(self, V: ModuleSpace) -> int:
        x = 0
        for power, block in self.terms:
            if block > V.m:
                raise ConstraintViolation(f"u{block}: module has only {V.m} blocks")
            if power >= V.parts[block - 1]:
                raise ConstraintViolation(
                    f"f^{power} u{block}: power must be below the exponent {V.parts[block - 1]}"
                )
            x ^= V.gen(block - 1, power)
        return x

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        out = []
        for power, block in sorted(self.terms, key=lambda pb: (pb[1], pb[0])):
            f = "" if power == 0 else "f " if power == 1 else f"f^{power} "
            out.append(f"{f}u{block}")
        return " + ".join(out)


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def parse_segre(text: str) -> SegreChar:
    try:
        parts = [int(s) for s in text.replace(" ", "").split(",") if s]
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a comma list of integers: {text!r}")
    if not parts or any(p < 1 for p in parts):
        raise argparse.ArgumentTypeError(f"block sizes must be positive: {text!r}")
    if parts != sorted(parts):
        print(f"warning: sorting block sizes to {','.join(map(str, sorted(parts)))}", file=sys.stderr)
    return SegreChar.of(parts)


def _emit(obj) -> None:
    sys.stdout.write(json.dumps(obj, sort_keys=True, indent=2, ensure_ascii=False) + "\n")


def cmd_module(args) -> int:
    V = build_module(args.segre)
    info = {
        "segre": V.segre.to_json(),
        "n": V.n,
        "m": V.m,
        "block_offsets": list(V.block_offsets),
        "f_matrix": V.f_matrix.to_strings(),
        "commutant_dim": V.segre.commutant_dim(),
        "ulm": {str(r): ulm_invariant(V, r) for r in range(1, max(V.parts) + 1)},
        "n_hinv": count_hinv(V.segre),
    }
    if args.format == "json":
        _emit(info)
    else:
        print(f"segre {V.segre}  n={V.n}  m={V.m}")
        print(f"commutant dim {info['commutant_dim']}, hyperinvariant subspaces {info['n_hinv']}")
        print("ulm " + " ".join(f"d({r})={d}" for r, d in info["ulm"].items()))
        print("f =")
        for row in info["f_matrix"]:
            print("  " + row)
    return EXIT_OK


def _parse_vectors(V: ModuleSpace, texts) -> list[int]:
    return [VectorExpr.parse(t).to_vector(V) for t in texts]


def cmd_hull(args) -> int:
    V = build_module(args.segre)
    vecs = _parse_vectors(V, args.vector)
    X = characteristic_hull(V, vecs)
    ch, hy = is_characteristic(V, X), is_hyperinvariant(V, X)
    out = {
        "segre": V.segre.to_json(),
        "dim": X.dim,
        "basis": X.to_strings(),
        "basis_expr": [str(VectorExpr.from_vector(V, b)) for b in X.basis],
        "characteristic": ch,
        "hyperinvariant": hy,
        "x_h_basis": largest_hyperinvariant_inside(V, X).to_strings(),
    }
    if len(vecs) == 1:
        out["indicator"] = indicator(V, vecs[0]).to_json(V.n)
    if args.format == "json":
        _emit(out)
    else:
        print(f"dim {X.dim}")
        for s, e in zip(out["basis"], out["basis_expr"]):
            print(f"  {s}  {e}")
        print(f"characteristic={str(ch).lower()} hyperinvariant={str(hy).lower()}")
        if "indicator" in out:
            print("H = (" + ", ".join(map(str, out["indicator"])) + ")")
    return EXIT_OK


def cmd_classify(args) -> int:
    V = build_module(args.segre)
    rep = classification_report(V)
    if args.format == "json":
        _emit(rep.to_json())
        return EXIT_OK
    w = rep.shoda
    verdict = f"satisfied (R,S)=({w.R},{w.S})" if w.satisfied else "not satisfied"
    print(f"segre {V.segre}: shoda {verdict}")
    print(f"hyperinvariant subspaces: {rep.n_hinv}")
    note = "" if rep.complete else " (constructed family, completeness not claimed)"
    print(f"characteristic, not hyperinvariant: {len(rep.ch_not_hinv)}{note}")
    for e in rep.ch_not_hinv:
        z = VectorExpr.from_vector(V, sum_of_powers(V, e.mu))
        print(f"  mu={list(e.mu)} dim={e.dim} hull of {z}; restriction segre {e.restriction_segre}")
    return EXIT_OK


def cmd_hinv(args) -> int:
    V = build_module(args.segre)
    if args.format == "dot":
        sys.stdout.write(to_dot(V))
    elif args.format == "json":
        _emit({"segre": V.segre.to_json(), "n_hinv": count_hinv(V.segre), "lattice": lattice_json(V)})
    else:
        for r, W in hinv_subspaces(V).items():
            print(f"r={r} dim={W.dim}")
    return EXIT_OK


def cmd_oracle(args) -> int:
    if args.max_n is not None:
        reports = sweep(range(1, args.max_n + 1), args.budget, args.aut_budget)
    else:
        if args.segre is None:
            raise PreconditionError("give --segre or --max-n")
        V = build_module(args.segre)
        reports = [cross_validate(V, args.budget, args.aut_budget, args.source)]
    if args.format == "json":
        _emit([r.to_json() for r in reports] if args.max_n is not None else reports[0].to_json())
    else:
        for r in reports:
            c = r.counts
            print(
                f"{r.segre}: invariant={c['invariant']} characteristic={c['characteristic']} "
                f"hyperinvariant={c['hyperinvariant']} ch_not_hinv={c['ch_not_hinv']} "
                f"aut={r.aut_mode} mismatches={len(r.mismatches)}"
            )
    return EXIT_MISMATCH if any(r.mismatches for r in reports) else EXIT_OK


def cmd_orbit(args) -> int:
    V = build_module(args.segre)
    (x,) = _parse_vectors(V, [args.vector])
    orb = sorted(orbit(V, x, args.cap))
    shown = orb[: args.show]
    if args.format == "json":
        _emit({"size": len(orb), "members": [vec_to_str(y, V.n) for y in shown], "truncated": len(orb) > len(shown)})
    else:
        print(f"orbit size {len(orb)}")
        for y in shown:
            print(f"  {vec_to_str(y, V.n)}  {VectorExpr.from_vector(V, y)}")
        if len(orb) > len(shown):
            print(f"  ... {len(orb) - len(shown)} more")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="charspace", description="Characteristic and hyperinvariant subspaces over GF(2).")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name, func, help, formats=("json", "text"), default="text", segre_required=True):
        sp = sub.add_parser(name, help=help)
        sp.add_argument("--segre", type=parse_segre, required=segre_required, help="block sizes, e.g. 1,3,7,7")
        sp.add_argument("--format", choices=formats, default=default)
        sp.set_defaults(func=func)
        return sp

    add("module", cmd_module, "describe the canonical module")
    sp = add("hull", cmd_hull, "characteristic hull of vectors")
    sp.add_argument("--vector", action="append", required=True, help='e.g. "u1 + f u2"; repeatable')
    add("classify", cmd_classify, "Shoda verdict and classification", default="json")
    add("hinv", cmd_hinv, "hyperinvariant lattice", formats=("json", "dot", "text"), default="json")
    sp = add("oracle", cmd_oracle, "brute-force cross-validation", segre_required=False)
    sp.add_argument("--max-n", type=int, help="sweep every partition of 1..N instead")
    sp.add_argument("--budget", type=int, default=DEFAULT_SUBSPACE_BUDGET, help="subspace budget")
    sp.add_argument("--aut-budget", type=int, default=DEFAULT_AUT_BUDGET)
    sp.add_argument("--source", choices=("all", "invariant"), default="all")
    sp = add("orbit", cmd_orbit, "Aut-orbit of a vector")
    sp.add_argument("--vector", required=True)
    sp.add_argument("--cap", type=int, default=DEFAULT_ORBIT_CAP, help="orbit size budget")
    sp.add_argument("--show", type=int, default=64, help="members to print")
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except VectorParseError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except BudgetExceeded as e:
        print(f"budget exceeded: {e}", file=sys.stderr)
        return EXIT_BUDGET
    except (ConstraintViolation, PreconditionError, DimensionMismatch) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_CONSTRAINT


if __name__ == "__main__":
    sys.exit(main())
