"""Finite cochain complexes of exact matrices.

A complex is a list of space dimensions d_0 .. d_m together with maps
D_p : space_p -> space_{p+1}; the map out of the last space is taken to
be zero.  Cohomology dimensions are computed as

    h_p = dim ker D_p - rank D_{p-1}

which is meaningful only when D_{p+1} D_p = 0, so that is checked first.
"""

from __future__ import annotations

from dataclasses import dataclass

from killingcalc.matrix import ExactMatrix, rank

__all__ = ["ChainComplex", "cohomology_dims"]


@dataclass(frozen=True)
class ChainComplex:
    spaces: tuple[int, ...]
    maps: tuple[ExactMatrix, ...]

    def __post_init__(self):
        if len(self.maps) != len(self.spaces) - 1:
            raise ValueError(
                f"{len(self.spaces)} spaces need {len(self.spaces) - 1} maps, "
                f"got {len(self.maps)}"
            )
        for p, m in enumerate(self.maps):
            if m.cols != self.spaces[p] or m.rows != self.spaces[p + 1]:
                raise ValueError(
                    f"map {p} is {m.rows}x{m.cols}, expected "
                    f"{self.spaces[p + 1]}x{self.spaces[p]}"
                )

    def composites_vanish(self) -> bool:
        return all(
            (self.maps[p + 1] * self.maps[p]).is_zero()
            for p in range(len(self.maps) - 1)
        )


def cohomology_dims(complex_: ChainComplex) -> list[int]:
    """Exact cohomology dimensions; rejects non-complexes."""
    if not complex_.composites_vanish():
        raise ValueError("not a complex: some composite map is nonzero")
    ranks = [rank(m) for m in complex_.maps]
    out = []
    for p, d in enumerate(complex_.spaces):
        rank_out = ranks[p] if p < len(ranks) else 0
        rank_in = ranks[p - 1] if p > 0 else 0
        out.append(d - rank_out - rank_in)
    return out
