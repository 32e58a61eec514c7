"""The compiled elimination kernel must agree bit-for-bit with the
pure-Python reference on every input, since all higher-level results
(ranks, kernels, cohomology dimensions) funnel through it."""

from __future__ import annotations

import os
import random
import subprocess
import sys
from math import gcd

import pytest

from killingcalc import _elim_py
from killingcalc import elim


def _rand_rows(rng: random.Random, nrows: int, ncols: int):
    rows = []
    for _ in range(nrows):
        row = {}
        for c in range(ncols):
            if rng.random() < 0.5:
                v = rng.randint(-20, 20)
                if v:
                    row[c] = v
        rows.append(row)
    return rows


def test_backend_is_compiled_in_this_build():
    pytest.importorskip("killingcalc._fastelim")
    assert elim.BACKEND == "compiled"


def test_rref_int_backends_agree():
    pytest.importorskip("killingcalc._fastelim")
    from killingcalc import _fastelim

    rng = random.Random(41)
    for _ in range(40):
        nrows, ncols = rng.randint(1, 9), rng.randint(1, 9)
        rows = _rand_rows(rng, nrows, ncols)
        got = _fastelim.rref_int([dict(r) for r in rows], ncols)
        ref = _elim_py.rref_int([dict(r) for r in rows], ncols)
        assert got == ref


def test_spmul_int_backends_agree():
    pytest.importorskip("killingcalc._fastelim")
    from killingcalc import _fastelim

    rng = random.Random(43)
    for _ in range(40):
        k = rng.randint(1, 6)
        a = _rand_rows(rng, k, 7)  # column-major: k columns of height <= 7
        b = _rand_rows(rng, rng.randint(1, 6), k)
        assert _fastelim.spmul_int(a, b) == _elim_py.spmul_int(a, b)


def test_rref_int_rows_have_unit_content_and_positive_pivots():
    rng = random.Random(47)
    for _ in range(30):
        ncols = rng.randint(1, 8)
        rows = _rand_rows(rng, rng.randint(1, 8), ncols)
        pivots, red = elim.rref_int(rows, ncols)
        assert len(pivots) == len(red)
        for p, row in zip(pivots, red):
            assert row[p] > 0
            g = 0
            for v in row.values():
                g = gcd(g, v)
            assert g == 1


def test_env_var_selects_python_backend():
    env = dict(os.environ, KILLINGCALC_ELIM="python")
    out = subprocess.run(
        [sys.executable, "-c", "from killingcalc import elim; print(elim.BACKEND)"],
        env=env, capture_output=True, text=True,
    )
    assert out.returncode == 0
    assert out.stdout.strip() == "python"


def test_env_var_rejects_unknown_backend():
    env = dict(os.environ, KILLINGCALC_ELIM="fortran")
    out = subprocess.run(
        [sys.executable, "-c", "import killingcalc.elim"],
        env=env, capture_output=True, text=True,
    )
    assert out.returncode != 0
    assert "KILLINGCALC_ELIM" in out.stderr
