from __future__ import annotations

import random
from fractions import Fraction

import pytest

from helpers import rand_field
from killingcalc.fields import (
    MetricField,
    PolyTensorField,
    antisymmetrize_field,
    christoffel_closed_form,
    christoffel_field,
    christoffel_homogeneous_kernel_dim,
    christoffel_solve,
    covariant_derivative,
    delta_field,
    flat_derivative,
    lie_derivative_delta,
    riemann,
    symmetrize_field,
)
from killingcalc.poly import PolyScalar, RatScalar, _as_rat
from killingcalc.tensor import Tensor

P = PolyScalar


def _rotation_field():
    return PolyTensorField(
        2, 1, {(1,): P.variable(2, 2), (2,): P.variable(2, 1).neg()}
    )


def test_field_algebra_and_evaluate():
    f = _rotation_field()
    assert not f.is_zero()
    assert f.add(f.neg()).is_zero()
    assert f.scale(3).at(1) == P.variable(2, 2).scale(3)
    t = f.evaluate((Fraction(3), Fraction(5)))
    assert t.at(1) == 5 and t.at(2) == -3
    assert f.degree() == 1
    assert PolyTensorField.zero(2, 1).degree() == -1


def test_flat_derivative_prepends_the_direction_slot():
    f = _rotation_field()
    d = flat_derivative(f)
    assert d.at(2, 1) == P.const(2, 1)  # direction x2, component 1
    assert d.at(1, 2) == P.const(2, -1)
    assert d.at(1, 1).is_zero()
    # rotation generator has an antisymmetric gradient
    assert symmetrize_field(d, (1, 2)).is_zero()
    assert antisymmetrize_field(d, (1, 2)) == d


def test_mixed_partials_commute():
    rng = random.Random(71)
    for _ in range(100):
        n = rng.choice((2, 3))
        f = rand_field(rng, n, 1, 4)
        dd = flat_derivative(flat_derivative(f))
        for a in range(1, n + 1):
            for b in range(a + 1, n + 1):
                for c in range(1, n + 1):
                    assert dd.at(a, b, c) == dd.at(b, a, c)


def test_symmetrize_field_is_a_projection():
    rng = random.Random(73)
    f = rand_field(rng, 3, 2, 3)
    s = symmetrize_field(f, (1, 2))
    assert symmetrize_field(s, (1, 2)) == s
    a = antisymmetrize_field(f, (1, 2))
    assert s.add(a) == f


def test_json_round_trip_and_validation():
    f = _rotation_field()
    doc = f.to_json_dict()
    assert PolyTensorField.from_json_dict(doc) == f
    assert doc["entries"][0]["idx"] == [1]
    bad = {"n": 2, "arity": 1, "entries": [{"idx": [3], "poly": []}]}
    with pytest.raises(ValueError):
        PolyTensorField.from_json_dict(bad)
    bad2 = {
        "n": 2,
        "arity": 1,
        "entries": [{"idx": [1], "poly": [{"exp": [1], "coef": "1"}]}],
    }
    with pytest.raises(ValueError):
        PolyTensorField.from_json_dict(bad2)  # exponent length != n


def test_json_rejects_rational_mode():
    g = MetricField.stereographic(2, 1)
    with pytest.raises(ValueError):
        g.field.to_json_dict()


def test_rational_fields_need_the_covariant_derivative():
    g = MetricField.stereographic(2, 1)
    with pytest.raises(ValueError):
        flat_derivative(g.field)


def test_christoffel_witness():
    dg = Tensor(2, 3, {(1, 2, 2): Fraction(2)})
    gam = christoffel_solve(dg)
    assert gam.at(1, 2, 2) == 1
    assert gam.at(2, 1, 2) == 1
    assert gam.at(2, 2, 1) == -1
    assert gam == christoffel_closed_form(dg)


def test_christoffel_unique():
    for n in (2, 3, 4):
        assert christoffel_homogeneous_kernel_dim(n) == 0


def test_christoffel_dual_routes_agree_on_random_jets():
    rng = random.Random(79)
    for _ in range(50):
        n = rng.choice((2, 3))
        entries = {}
        for a in range(1, n + 1):
            for b in range(1, n + 1):
                for c in range(b, n + 1):
                    v = Fraction(rng.randint(-5, 5))
                    if v:
                        entries[(a, b, c)] = v
                        if c != b:
                            entries[(a, c, b)] = v
        dg = Tensor(n, 3, entries)
        assert christoffel_solve(dg) == christoffel_closed_form(dg)


def test_christoffel_rejects_asymmetric_jet():
    dg = Tensor(2, 3, {(1, 1, 2): Fraction(1)})  # not symmetric in (b, c)
    with pytest.raises(ValueError):
        christoffel_closed_form(dg)


def test_flat_metric_is_genuinely_flat():
    g = MetricField.flat(2)
    assert christoffel_field(g).is_zero()
    assert riemann(g).is_zero()
    f = _rotation_field()
    assert covariant_derivative(f, g) == flat_derivative(f)
    assert g.inverse() == delta_field(2)


def test_lie_derivative_of_delta():
    rng = random.Random(83)
    for _ in range(50):
        n = rng.choice((2, 3))
        X = rand_field(rng, n, 1, 3)
        lhs = lie_derivative_delta(X)
        rhs = symmetrize_field(flat_derivative(X), (1, 2)).scale(2)
        assert lhs == rhs


def test_stereographic_metric_compatibility():
    for n, kappa in [(2, Fraction(1)), (3, Fraction(-1, 2))]:
        g = MetricField.stereographic(n, kappa)
        assert covariant_derivative(g.field, g).is_zero()


def test_stereographic_curvature_identity():
    # R_ab^c_d = kappa (delta_a^c g_bd - delta_b^c g_ad), exactly
    for n, kappa in [(2, Fraction(1)), (3, Fraction(-1, 2))]:
        g = MetricField.stereographic(n, kappa)
        R = riemann(g)
        for a in range(1, n + 1):
            for b in range(1, n + 1):
                for c in range(1, n + 1):
                    for d in range(1, n + 1):
                        want = RatScalar.const(n, 0)
                        if a == c:
                            want = want.add(_as_rat(g.field.at(b, d), n))
                        if b == c:
                            want = want.sub(_as_rat(g.field.at(a, d), n))
                        want = want.scale(kappa)
                        assert _as_rat(R.at(a, b, c, d), n) == want


def test_stereographic_kappa_zero_is_constant():
    g = MetricField.stereographic(2, 0)
    assert riemann(g).is_zero()
    assert g.field.at(1, 1) == _as_rat(P.const(2, 4), 2)


def test_metric_inverse():
    for g in (MetricField.stereographic(2, 1), _sample_metric()):
        inv = g.inverse()
        n = g.n
        for a in range(1, n + 1):
            for b in range(1, n + 1):
                acc = RatScalar.const(n, 0)
                for e in range(1, n + 1):
                    acc = acc.add(
                        _as_rat(g.field.at(a, e), n).mul(_as_rat(inv.at(e, b), n))
                    )
                assert acc == RatScalar.const(n, 1 if a == b else 0)


def test_degenerate_metric_rejected():
    bad = PolyTensorField(2, 2, {(1, 1): P.const(2, 1)})  # det = 0
    g = MetricField(2, bad, "sample")
    with pytest.raises(ValueError):
        g.inverse()


def _sample_metric():
    g0 = Tensor(2, 2, {(1, 1): Fraction(1), (2, 2): Fraction(1)})
    ddg0 = Tensor(2, 4, {(2, 2, 1, 1): Fraction(2)})  # g_11 = 1 + x2^2
    return MetricField.from_jet2(g0, Tensor(2, 3, {}), ddg0)


def test_jet2_taylor_data():
    g0 = Tensor(2, 2, {(1, 1): Fraction(1), (2, 2): Fraction(1)})
    dg0 = Tensor(2, 3, {(1, 2, 2): Fraction(2)})
    g = MetricField.from_jet2(g0, dg0, Tensor(2, 4, {}))
    assert g.mode == "sample"
    assert g.field.at(2, 2) == P(2, {(0, 0): Fraction(1), (1, 0): Fraction(2)})
    # at the origin the christoffel field matches the pointwise solve
    gam0 = christoffel_field(g).evaluate((Fraction(0), Fraction(0)))
    assert gam0 == christoffel_solve(dg0)


def test_jet2_rejects_bad_symmetry():
    g0 = Tensor(2, 2, {(1, 2): Fraction(1)})  # not symmetric
    with pytest.raises(ValueError):
        MetricField.from_jet2(g0, Tensor(2, 3, {}), Tensor(2, 4, {}))


def test_jet2_curvature_nonzero():
    g = _sample_metric()
    R = riemann(g)
    assert not R.is_zero()
    assert not R.evaluate((Fraction(0), Fraction(0))).is_zero()


def test_commutator_convention():
    # [nabla_a, nabla_b] X^c = + R_ab^c_d X^d on 20 random upper fields
    rng = random.Random(89)
    metrics = [MetricField.stereographic(2, 1), _sample_metric()]
    for trial in range(20):
        g = metrics[trial % 2]
        n = g.n
        X = rand_field(rng, n, 1, 2)
        nX = covariant_derivative(X, g, "+")
        nnX = covariant_derivative(nX, g, "-+")
        R = riemann(g)
        for a in range(1, n + 1):
            for b in range(1, n + 1):
                for c in range(1, n + 1):
                    lhs = _as_rat(nnX.at(a, b, c), n).sub(_as_rat(nnX.at(b, a, c), n))
                    rhs = RatScalar.const(n, 0)
                    for d in range(1, n + 1):
                        rhs = rhs.add(
                            _as_rat(R.at(a, b, c, d), n).mul(_as_rat(X.at(d), n))
                        )
                    assert lhs == rhs


def test_second_covariant_derivative_on_scalars_is_symmetric():
    # torsion-freeness: nabla^2 of a scalar has no antisymmetric part
    rng = random.Random(97)
    g = _sample_metric()
    for _ in range(10):
        s = rand_field(rng, 2, 0, 3)
        dds = covariant_derivative(covariant_derivative(s, g), g)
        assert antisymmetrize_field(dds, (1, 2)).is_zero()


def test_duplicate_json_indices_accumulate():
    doc = {
        "n": 2,
        "arity": 1,
        "entries": [
            {"idx": [1], "poly": [{"exp": [1, 0], "coef": "2"}]},
            {"idx": [1], "poly": [{"exp": [1, 0], "coef": "3"}]},
        ],
    }
    f = PolyTensorField.from_json_dict(doc)
    assert f.at(1) == P(2, {(1, 0): Fraction(5)})
