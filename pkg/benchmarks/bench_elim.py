"""Compare the compiled elimination kernel against the pure-Python one.

Times rref_int on the package's own differential matrices and on synthetic
sparse matrices, checking on the way that both backends return identical
output.  Run from the repository root:

    python3 benchmarks/bench_elim.py
"""

from __future__ import annotations

import random
import time

from killingcalc import _elim_py

try:
    from killingcalc import _fastelim
except ImportError:
    _fastelim = None

from killingcalc.matrix import _clear_row
from killingcalc.prolong import build_partial


def _to_int_rows(m):
    return [_clear_row(row) for row in m.sparse_rows()]


def _synthetic(rng: random.Random, nrows: int, ncols: int, density: float):
    rows = []
    for _ in range(nrows):
        row = {}
        for c in range(ncols):
            if rng.random() < density:
                v = rng.randint(-9, 9)
                if v:
                    row[c] = v
        rows.append(row)
    return rows


def _time(fn, rows, ncols, repeats: int):
    best = None
    result = None
    for _ in range(repeats):
        work = [dict(r) for r in rows]
        t0 = time.perf_counter()
        result = fn(work, ncols)
        dt = time.perf_counter() - t0
        best = dt if best is None else min(best, dt)
    return best, result


def main() -> None:
    rng = random.Random(2024)
    cases = [
        ("partial n=3 ell=2 p=1", *_case_partial(3, 2, 1)),
        ("partial n=4 ell=2 p=1", *_case_partial(4, 2, 1)),
        ("partial n=4 ell=3 p=2", *_case_partial(4, 3, 2)),
        ("dense-ish 60x80", _synthetic(rng, 60, 80, 0.3), 80),
        ("sparse 200x150", _synthetic(rng, 200, 150, 0.05), 150),
    ]
    print(
        f"{'case':<24} {'rows':>5} {'cols':>5} {'python':>10} {'compiled':>10} {'speedup':>8}",
        flush=True,
    )
    for name, rows, ncols in cases:
        py_t, py_out = _time(_elim_py.rref_int, rows, ncols, 3)
        if _fastelim is None:
            print(
                f"{name:<24} {len(rows):>5} {ncols:>5} {py_t * 1e3:>9.1f}ms {'n/a':>10}",
                flush=True,
            )
            continue
        c_t, c_out = _time(_fastelim.rref_int, rows, ncols, 3)
        assert py_out == c_out, f"backend mismatch on {name}"
        print(
            f"{name:<24} {len(rows):>5} {ncols:>5} "
            f"{py_t * 1e3:>9.1f}ms {c_t * 1e3:>9.1f}ms {py_t / c_t:>7.1f}x",
            flush=True,
        )
    if _fastelim is None:
        print("compiled backend not built; only the reference timings above")


def _case_partial(n: int, ell: int, p: int):
    m = build_partial(n, ell, p)
    return _to_int_rows(m), m.cols


if __name__ == "__main__":
    main()
