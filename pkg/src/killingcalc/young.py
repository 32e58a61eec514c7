"""Young diagrams, symmetry classes and dimension formulas.

Dimension conventions, stated once and used everywhere:

* the content of cell (i, j) (1-based row i, column j) is j - i;
* the hook length of (i, j) is arm + leg + 1, the arm counting cells to
  the right in row i and the leg cells below in column j;
* the GL(n) dimension of a diagram is the product over cells of
  (n + content) / hook, zero when the diagram has more than n rows;
* for sl(r+1) with Dynkin labels (a_1, ..., a_r), the Weyl dimension is
  the product over 1 <= i <= j <= r of
  (a_i + ... + a_j + j - i + 1) / (j - i + 1).

``realize_irreducible`` produces an explicit basis of a subspace of a
tensor power carrying the given symmetry type.  Three presentations are
implemented and selected by shape unless forced:

* ``row``: a single symmetric group;
* ``symmetric-pair``: for two rows (a, b), tensors symmetric in a first
  group of b and a second group of a indices, with the symmetrization of
  the last first-group index across the whole second group vanishing;
* ``column-skew``: one antisymmetric group per column of the diagram,
  with the skew of each column group together with one index of the
  next column vanishing.

Every realization asserts that its basis cardinality equals the
hook-content dimension, so an unsupported shape cannot fail silently.
"""

from __future__ import annotations

import json
import os
import threading
from dataclasses import dataclass
from fractions import Fraction

from killingcalc.matrix import ColumnSolver, ExactMatrix, kernel_basis
from killingcalc.symspace import (
    ALT,
    SYM,
    Group,
    GroupedSpace,
    alt_extend,
    embed,
    sym_extend,
)
from killingcalc.tensor import Tensor, flatten_sparse

__all__ = [
    "YoungDiagram",
    "DynkinLabel",
    "SubspaceBasis",
    "gl_dimension",
    "weyl_dimension",
    "realize_irreducible",
    "clear_realization_cache",
]


@dataclass(frozen=True)
class YoungDiagram:
    rows: tuple[int, ...]

    def __post_init__(self):
        rows = tuple(int(r) for r in self.rows)
        object.__setattr__(self, "rows", rows)
        if any(r < 1 for r in rows):
            raise ValueError("row lengths must be positive")
        if any(rows[i] < rows[i + 1] for i in range(len(rows) - 1)):
            raise ValueError("row lengths must be weakly decreasing")

    @property
    def size(self) -> int:
        return sum(self.rows)

    def conjugate(self) -> tuple[int, ...]:
        if not self.rows:
            return ()
        return tuple(
            sum(1 for r in self.rows if r >= j) for j in range(1, self.rows[0] + 1)
        )

    def cells(self):
        for i, r in enumerate(self.rows, start=1):
            for j in range(1, r + 1):
                yield i, j


@dataclass(frozen=True)
class DynkinLabel:
    """Highest weight labels for a special linear algebra of rank len(labels)."""

    labels: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "labels", tuple(int(a) for a in self.labels))
        if any(a < 0 for a in self.labels):
            raise ValueError("Dynkin labels must be nonnegative")


def gl_dimension(d: YoungDiagram, n: int) -> int:
    """Hook-content dimension of the GL(n) module of shape d."""
    if n < 1:
        raise ValueError("n must be positive")
    if len(d.rows) > n:
        return 0
    cols = d.conjugate()
    num = Fraction(1)
    for i, j in d.cells():
        content = j - i
        arm = d.rows[i - 1] - j
        leg = cols[j - 1] - i
        num *= Fraction(n + content, arm + leg + 1)
    if num.denominator != 1:
        raise RuntimeError("hook-content product is not an integer")
    return int(num)


def weyl_dimension(label) -> int:
    """Dimension of the sl representation with the given Dynkin labels."""
    labels = label.labels if isinstance(label, DynkinLabel) else tuple(label)
    if any(int(a) < 0 for a in labels):
        raise ValueError("Dynkin labels must be nonnegative")
    r = len(labels)
    out = Fraction(1)
    for i in range(r):
        total = 0
        for j in range(i, r):
            total += labels[j]
            out *= Fraction(total + j - i + 1, j - i + 1)
    if out.denominator != 1:
        raise RuntimeError("Weyl dimension product is not an integer")
    return int(out)


class SubspaceBasis:
    """Explicit basis of a symmetry-constrained subspace of a tensor power.

    ``coord_basis`` holds the basis in the value coordinates of
    ``space``; ``basis`` expands it to flattened full-index columns on
    demand.  Both are canonical: the columns are the reduced-echelon
    kernel basis of the constraint matrix.
    """

    def __init__(self, space: GroupedSpace, coord_basis: ExactMatrix):
        if coord_basis.rows != space.dim:
            raise ValueError("coordinate basis does not match the space")
        self.space = space
        self.n = space.n
        self.arity = space.arity
        self.coord_basis = coord_basis
        self._ambient = None
        self._solver = None

    @property
    def ambient(self) -> tuple[int, int]:
        return (self.n, self.arity)

    @property
    def dim(self) -> int:
        return self.coord_basis.cols

    def tensor(self, j: int) -> Tensor:
        return embed(self.space, self.coord_basis.column(j))

    @property
    def basis(self) -> ExactMatrix:
        if self._ambient is None:
            cols = [flatten_sparse(self.tensor(j)) for j in range(self.dim)]
            self._ambient = ExactMatrix.from_columns(cols, self.n ** self.arity)
        return self._ambient

    @property
    def solver(self) -> ColumnSolver:
        if self._solver is None:
            self._solver = ColumnSolver(self.coord_basis)
        return self._solver

    def __repr__(self) -> str:
        return f"SubspaceBasis(n={self.n}, arity={self.arity}, dim={self.dim})"


def _resolve_presentation(d: YoungDiagram, presentation: str) -> str:
    if presentation != "auto":
        return presentation
    if len(d.rows) <= 1:
        return "row"
    if len(d.rows) == 2 and d.rows[0] > d.rows[1]:
        return "symmetric-pair"
    return "column-skew"


def _kernel_matrix(constraints: ExactMatrix) -> ExactMatrix:
    vectors = kernel_basis(constraints)
    cols = [{i: v for i, v in enumerate(vec) if v} for vec in vectors]
    return ExactMatrix.from_columns(cols, constraints.cols)


def _realize(d: YoungDiagram, n: int, presentation: str) -> SubspaceBasis:
    kind = _resolve_presentation(d, presentation)
    if kind == "row":
        if len(d.rows) != 1:
            raise ValueError(f"row presentation needs a single row, got {d.rows}")
        space = GroupedSpace(n, [Group(SYM, d.rows[0])])
        return SubspaceBasis(space, ExactMatrix.identity(space.dim))
    if kind == "symmetric-pair":
        if len(d.rows) != 2:
            raise ValueError(f"symmetric-pair needs two rows, got {d.rows}")
        a, b = d.rows
        space = GroupedSpace(n, [Group(SYM, b), Group(SYM, a)])
        constraints, _ = sym_extend(space, 0, 1)
        return SubspaceBasis(space, _kernel_matrix(constraints))
    if kind == "column-skew":
        cols = d.conjugate()
        if cols and cols[0] > n:
            # more rows than the base dimension: zero module
            space = GroupedSpace(n, [Group(ALT, cols[0])] if cols else [])
            return SubspaceBasis(space, ExactMatrix.zero(space.dim, 0))
        space = GroupedSpace(n, [Group(ALT, c) for c in cols])
        stacked = None
        for g in range(len(cols) - 1):
            m, _ = alt_extend(space, g, g + 1)
            stacked = m if stacked is None else stacked.vstack(m)
        if stacked is None:
            return SubspaceBasis(space, ExactMatrix.identity(space.dim))
        return SubspaceBasis(space, _kernel_matrix(stacked))
    raise ValueError(f"unknown presentation {presentation!r}")


_CACHE: dict = {}
_CACHE_LOCK = threading.Lock()


def clear_realization_cache() -> None:
    with _CACHE_LOCK:
        _CACHE.clear()


def _disk_cache_path(key) -> str | None:
    root = os.environ.get("KILLINGCALC_CACHE_DIR")
    if not root:
        return None
    rows, n, kind = key
    name = f"basis_{'-'.join(map(str, rows))}_{n}_{kind}.json"
    return os.path.join(root, name)


def realize_irreducible(
    d: YoungDiagram, n: int, presentation: str = "auto"
) -> SubspaceBasis:
    """Basis of the symmetry class of shape d inside the tensor power.

    Results are memoized per (shape, n, presentation); the cache is
    transparent since every construction path is deterministic.  Set
    KILLINGCALC_CACHE_DIR to also persist coordinate bases on disk.
    """
    if not isinstance(d, YoungDiagram):
        d = YoungDiagram(tuple(d))
    kind = _resolve_presentation(d, presentation)
    key = (d.rows, n, kind)
    with _CACHE_LOCK:
        hit = _CACHE.get(key)
    if hit is not None:
        return hit
    path = _disk_cache_path(key)
    result = None
    if path and os.path.exists(path):
        with open(path, "r", encoding="utf-8") as fh:
            payload = json.load(fh)
        space = GroupedSpace(
            n, [Group(k, s) for k, s in payload["groups"]]
        )
        result = SubspaceBasis(space, ExactMatrix.from_json_dict(payload["coord_basis"]))
    if result is None:
        result = _realize(d, n, kind)
        if path:
            os.makedirs(os.path.dirname(path) or ".", exist_ok=True)
            payload = {
                "groups": [[g.kind, g.size] for g in result.space.groups],
                "coord_basis": result.coord_basis.to_json_dict(),
            }
            tmp = path + ".tmp"
            with open(tmp, "w", encoding="utf-8") as fh:
                json.dump(payload, fh, sort_keys=True)
            os.replace(tmp, path)
    expected = gl_dimension(d, n)
    if result.dim != expected:
        raise RuntimeError(
            f"realization of {d.rows} over n={n} produced {result.dim} basis "
            f"columns, hook content gives {expected}"
        )
    with _CACHE_LOCK:
        _CACHE[key] = result
    return result
