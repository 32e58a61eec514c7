"""killingcalc: exact verification of Killing-operator prolongation complexes.

Everything is computed over the rationals with no floating point and no
numerical tolerances.  The package realizes symmetry-constrained tensor
spaces explicitly, prolongs the (higher) Killing operator on flat space
into a connection on a finite-rank bundle, builds the associated flat
cochain complexes, and cross-checks their cohomology against hook
content dimensions and against the matching Lie algebra cohomology of a
graded special linear algebra.  A polynomial field layer carries the
operators themselves: symmetrized gradients, their kernels, the range
obstruction with its potential solver, and the exact curvature of flat,
stereographic, and sampled metrics.
"""

__version__ = "0.1.0"

from killingcalc.chain import ChainComplex, cohomology_dims
from killingcalc.fields import MetricField, PolyTensorField
from killingcalc.killing import (
    integrability_operator,
    killing_kernel,
    killing_operator,
    killing_potential_solve,
)
from killingcalc.kostant import branching_check, lie_algebra_cohomology
from killingcalc.matrix import ExactMatrix
from killingcalc.prolong import (
    build_T,
    complex_cohomology,
    graded_diagonal_complex,
    key_isomorphism_check,
)
from killingcalc.rationals import Fraction
from killingcalc.tractor import killing_lift, tractor_curvature, tractor_derivative
from killingcalc.young import YoungDiagram, gl_dimension, realize_irreducible

__all__ = [
    "ChainComplex",
    "ExactMatrix",
    "Fraction",
    "MetricField",
    "PolyTensorField",
    "YoungDiagram",
    "branching_check",
    "build_T",
    "cohomology_dims",
    "complex_cohomology",
    "gl_dimension",
    "graded_diagonal_complex",
    "integrability_operator",
    "key_isomorphism_check",
    "killing_kernel",
    "killing_lift",
    "killing_operator",
    "killing_potential_solve",
    "lie_algebra_cohomology",
    "realize_irreducible",
    "tractor_curvature",
    "tractor_derivative",
    "__version__",
]
