"""Elimination backend selection.

The compiled kernel is preferred when present; the pure-Python reference
is the fallback.  Both produce bit-identical results, so the choice is
purely a matter of speed.  Set ``KILLINGCALC_ELIM=python`` or
``KILLINGCALC_ELIM=compiled`` to force one (the latter raises if the
extension is missing).
"""

import os

_choice = os.environ.get("KILLINGCALC_ELIM", "auto")

if _choice not in ("auto", "python", "compiled"):
    raise RuntimeError(f"KILLINGCALC_ELIM must be auto, python or compiled, got {_choice!r}")

if _choice == "python":
    from killingcalc import _elim_py as _impl

    BACKEND = "python"
else:
    try:
        from killingcalc import _fastelim as _impl  # type: ignore[attr-defined]

        BACKEND = "compiled"
    except ImportError:
        if _choice == "compiled":
            raise
        from killingcalc import _elim_py as _impl

        BACKEND = "python"

rref_int = _impl.rref_int
spmul_int = _impl.spmul_int
