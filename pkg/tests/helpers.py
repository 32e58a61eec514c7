"""Seeded random generators shared by the test modules.

Every test that uses randomness constructs its own ``random.Random(seed)``
so failures replay exactly; nothing here touches global RNG state.
"""

from __future__ import annotations

import random
from fractions import Fraction
from itertools import product

from killingcalc.fields import PolyTensorField, symmetrize_field
from killingcalc.matrix import ExactMatrix
from killingcalc.poly import PolyScalar, monomials
from killingcalc.tensor import Tensor


def rand_matrix(rng: random.Random, rows: int, cols: int, density: float = 0.6) -> ExactMatrix:
    entries = {}
    for r in range(rows):
        for c in range(cols):
            if rng.random() < density:
                v = rng.randint(-9, 9)
                if v:
                    entries[(r, c)] = Fraction(v)
    return ExactMatrix(rows, cols, entries)


def rand_tensor(rng: random.Random, n: int, arity: int, density: float = 0.5) -> Tensor:
    entries = {}
    for idx in product(range(1, n + 1), repeat=arity):
        if rng.random() < density:
            v = rng.randint(-5, 5)
            if v:
                entries[idx] = Fraction(v)
    return Tensor(n, arity, entries)


def rand_poly(rng: random.Random, n: int, max_degree: int, nterms: int = 4) -> PolyScalar:
    mons = monomials(n, max_degree)
    terms = {}
    for m in rng.sample(mons, min(nterms, len(mons))):
        v = rng.randint(-6, 6)
        if v:
            terms[m] = Fraction(v)
    return PolyScalar(n, terms)


def rand_field(rng: random.Random, n: int, arity: int, max_degree: int) -> PolyTensorField:
    comps = {}
    for idx in product(range(1, n + 1), repeat=arity):
        p = rand_poly(rng, n, max_degree, nterms=3)
        if not p.is_zero():
            comps[idx] = p
    return PolyTensorField(n, arity, comps)


def rand_symmetric_field(rng: random.Random, n: int, arity: int, max_degree: int) -> PolyTensorField:
    f = rand_field(rng, n, arity, max_degree)
    if arity >= 2:
        f = symmetrize_field(f, range(1, arity + 1))
    return f
