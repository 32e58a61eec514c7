# cython: language_level=3
# cython: boundscheck=False
# cython: wraparound=False
"""Compiled integer elimination kernel.

Semantics are identical to killingcalc._elim_py (the pure-Python
reference); see that module for the algorithm description.  Entries stay
Python ints so arbitrary precision is preserved; the speedup comes from
compiled loop and dict traffic.
"""

from math import gcd


cdef void _reduce_content(dict row, lead):
    cdef object g = 0
    for v in row.values():
        g = gcd(g, v)
    if g == 0:
        return
    if lead is not None and row.get(lead, 0) < 0:
        g = -g
    if g != 1:
        for k in row:
            row[k] = row[k] // g


def rref_int(rows, Py_ssize_t ncols):
    """Reduce sparse integer rows; returns (pivot columns, reduced rows)."""
    cdef list work = [dict(one_row) for one_row in rows]
    cdef Py_ssize_t nrows = len(work)
    cdef list pivots = []
    cdef Py_ssize_t r = 0, c, i, src
    cdef dict row, piv_row, new
    cdef object piv, f, v, w
    for c in range(ncols):
        if r == nrows:
            break
        src = -1
        for i in range(r, nrows):
            if (<dict>work[i]).get(c, 0):
                src = i
                break
        if src < 0:
            continue
        work[r], work[src] = work[src], work[r]
        piv_row = <dict>work[r]
        _reduce_content(piv_row, c)
        piv = piv_row[c]
        for i in range(nrows):
            if i == r:
                continue
            row = <dict>work[i]
            f = row.get(c, 0)
            if not f:
                continue
            new = {}
            for k, v in row.items():
                new[k] = v * piv
            for k, v in piv_row.items():
                w = new.get(k, 0) - f * v
                if w:
                    new[k] = w
                elif k in new:
                    del new[k]
            _reduce_content(new, None)
            work[i] = new
        pivots.append(c)
        r += 1
    return pivots, work[:r]


def spmul_int(a_cols, b_cols):
    """Sparse integer product, column-wise; see the reference module."""
    cdef list out = []
    cdef dict acc, acol
    cdef object f, v, w
    for bc in b_cols:
        acc = {}
        for i, f in (<dict>bc).items():
            acol = <dict>a_cols[i]
            for r, v in acol.items():
                w = acc.get(r, 0) + f * v
                if w:
                    acc[r] = w
                elif r in acc:
                    del acc[r]
        out.append(acc)
    return out
