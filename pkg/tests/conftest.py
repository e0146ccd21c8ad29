import time

import pytest
from hypothesis import strategies as st

from charspace.nilmod import build_module, partitions
from charspace.oracle import sweep

ACCEPTANCE: dict[int, tuple[bool, str]] = {}


def record(n: int, ok: bool, detail: str) -> None:
    ACCEPTANCE[n] = (ok, detail)
    print(f"criterion {n}: {'PASS' if ok else 'FAIL'}  {detail}")


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[n]
        terminalreporter.write_line(f"criterion {n:2d}: {'PASS' if ok else 'FAIL'}  {detail}")


@pytest.fixture(scope="session")
def full_sweep():
    """Oracle cross-validation of every partition of n <= 7, with per-n timings."""
    reports, seconds = {}, {}
    for n in range(1, 8):
        t0 = time.perf_counter()
        for r in sweep([n], threads=1):
            reports[r.segre.parts] = r
        seconds[n] = time.perf_counter() - t0
    return reports, seconds


def segres(max_n: int, min_n: int = 1):
    parts = [p for n in range(min_n, max_n + 1) for p in partitions(n)]
    return st.sampled_from(parts)


@st.composite
def module_and_vector(draw, max_n: int = 8):
    V = build_module(draw(segres(max_n)))
    return V, draw(st.integers(0, (1 << V.n) - 1))


@st.composite
def subspaces(draw, n: int, max_rank: int | None = None):
    from charspace.gf2la import Subspace

    k = draw(st.integers(0, n if max_rank is None else max_rank))
    rows = draw(st.lists(st.integers(0, (1 << n) - 1), min_size=k, max_size=k))
    return Subspace.from_rows(rows, n)
