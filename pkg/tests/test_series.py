"""Novikov scalars, Laurent polynomials, rendering round trips."""

from fractions import Fraction
from math import inf

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from orbifloer import series
from orbifloer.errors import NonLinearSymbolic, NotUnimodular, ZeroCoordinate
from orbifloer.series import QC, LambdaClass, LaurentPoly, NovikovScalar, SymLin

rationals = st.fractions(min_value=-5, max_value=5, max_denominator=12)


def scalars():
    return st.lists(
        st.tuples(rationals, st.builds(QC, rationals, rationals)), min_size=0, max_size=4
    ).map(NovikovScalar)


@given(scalars(), scalars(), scalars())
@settings(max_examples=100, deadline=None)
def test_scalar_ring_axioms(a, b, c):
    assert a + b == b + a
    assert (a + b) + c == a + (b + c)
    assert a * b == b * a
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a + NovikovScalar.zero() == a
    assert a * NovikovScalar.one() == a
    assert (a - a).is_zero()


@given(scalars(), scalars())
@settings(max_examples=100, deadline=None)
def test_valuation_inequalities(a, b):
    va, vb = a.valuation(), b.valuation()
    assert (a + b).valuation() >= min(va, vb)
    if a.is_zero() or b.is_zero():
        assert (a * b).valuation() == inf
    else:
        assert (a * b).valuation() == va + vb


def test_valuation_and_membership():
    assert series.valuation(NovikovScalar.zero()) == inf
    s = NovikovScalar.of(3, Fraction(1, 2)) + NovikovScalar.of(QC(0, 1), 2)
    assert series.valuation(s) == Fraction(1, 2)
    assert series.lambda_membership(s) == LambdaClass.LambdaPlus
    assert series.lambda_membership(NovikovScalar.of(5)) == LambdaClass.Units
    assert series.lambda_membership(NovikovScalar.of(1, Fraction(-1, 3))) == LambdaClass.Neither
    assert series.lambda_membership(NovikovScalar.zero()) == LambdaClass.LambdaPlus
    sym = NovikovScalar.of(SymLin.symbol("c1"))
    assert series.lambda_membership(sym) == LambdaClass.Lambda0


def test_symbolic_degree_cap():
    c = NovikovScalar.of(SymLin.symbol("c1"))
    with pytest.raises(NonLinearSymbolic):
        _ = c * c
    # multiplying by constants stays legal
    assert not (c * 3).is_zero()
    assert (c * 3).substitute_symbols({"c1": QC(2)}) == NovikovScalar.of(6)


def test_qc_arithmetic():
    z = QC(1, 2) * QC(3, -1)
    assert z == QC(5, 5)
    assert (QC(1, 1) / QC(1, 1)) == QC(1)
    assert QC(2, 3).abs2() == 13
    with pytest.raises(ZeroDivisionError):
        QC(1) / QC(0)


def exponent_vectors(n):
    return st.tuples(*([st.integers(-3, 3)] * n))


def polys(n):
    return st.lists(st.tuples(exponent_vectors(n), scalars()), max_size=4).map(
        lambda ts: LaurentPoly(n, ts)
    )


@given(polys(2), polys(2), polys(2))
@settings(max_examples=60, deadline=None)
def test_poly_ring_axioms(p, q, r):
    assert p + q == q + p
    assert (p * q) * r == p * (q * r)
    assert p * (q + r) == p * q + p * r
    assert (p - p).is_zero()


@given(polys(2))
@settings(max_examples=60, deadline=None)
def test_derivative_is_linear_and_leibniz(p):
    q = LaurentPoly.monomial((1, -2), NovikovScalar.of(3, Fraction(1, 2)))
    for i in range(2):
        lhs = (p * q).partial_derivative(i)
        rhs = p.partial_derivative(i) * q + p * q.partial_derivative(i)
        assert lhs == rhs
        assert p.log_derivative(i) == LaurentPoly.monomial((1 if i == 0 else 0, 1 if i == 1 else 0), 1) * p.partial_derivative(i)


def test_eval_paths_agree():
    p = LaurentPoly(
        2,
        [
            ((1, 0), NovikovScalar.of(1)),
            ((0, -2), NovikovScalar.of(QC(0, 1), Fraction(1, 3))),
        ],
    )
    got = p.eval_complex((2 + 0j, 1j), 0.5)
    expect = 2 + 1j * 0.5 ** (1 / 3) * (1j) ** -2
    assert abs(got - expect) < 1e-12
    with pytest.raises(ZeroCoordinate):
        p.eval_complex((0j, 1j), 0.5)


def test_eval_exact_requires_t_free():
    p = LaurentPoly(1, [((2,), NovikovScalar.of(1)), ((-1,), NovikovScalar.of(-2))])
    assert p.eval_exact((QC(2),)) == QC(3)
    q = LaurentPoly(1, [((0,), NovikovScalar.of(1, Fraction(1, 2)))])
    with pytest.raises(ValueError):
        q.eval_exact((QC(1),))


def test_monomial_rewrite_unimodular_only():
    # y1*y2 under M = [[1,0],[1,1]] becomes y1'^2 * y2'
    p = LaurentPoly(2, [((1, 1), NovikovScalar.of(1))])
    q = series.monomial_rewrite(p, ((1, 0), (1, 1)))
    assert q == LaurentPoly(2, [((2, 1), NovikovScalar.of(1))])
    with pytest.raises(NotUnimodular):
        series.monomial_rewrite(p, ((2, 0), (0, 1)))


def test_monomial_rewrite_identity_and_inverse():
    p = LaurentPoly(2, [((1, 0), NovikovScalar.of(1)), ((0, 1), NovikovScalar.of(2))])
    assert series.monomial_rewrite(p, ((1, 0), (0, 1))) == p
    m = ((1, 1), (0, 1))
    minv = ((1, -1), (0, 1))
    assert series.monomial_rewrite(series.monomial_rewrite(p, m), minv) == p


@given(polys(2))
@settings(max_examples=60, deadline=None)
def test_monomial_rewrite_preserves_evaluation(p):
    m = ((1, 1), (0, 1))
    q = series.monomial_rewrite(p, m)
    # q(z) = p(w) with w_i = prod_j z_j^(M_ij), reading row i of M
    z = (1.5 + 0.25j, -0.75 + 1j)
    w = (z[0] * z[1], z[1])
    got = q.eval_complex(z, 0.5)
    expect = p.eval_complex(w, 0.5)
    assert abs(got - expect) < 1e-9


def simple_polys(n):
    simple_scalars = st.lists(
        st.tuples(
            st.fractions(min_value=-3, max_value=3, max_denominator=6),
            st.builds(QC, st.fractions(min_value=-3, max_value=3, max_denominator=4),
                      st.fractions(min_value=-3, max_value=3, max_denominator=4)),
        ),
        max_size=3,
    ).map(NovikovScalar)
    return st.lists(st.tuples(exponent_vectors(n), simple_scalars), max_size=3).map(
        lambda ts: LaurentPoly(n, ts)
    )


@given(simple_polys(3))
@settings(max_examples=100, deadline=None)
def test_render_parse_round_trip(p):
    text = series.render_poly(p)
    assert series.parse_poly(text, 3) == p


def test_render_format():
    p = LaurentPoly(
        2,
        [
            ((2, -1), NovikovScalar.of(2, Fraction(1, 2))),
            ((0, 0), NovikovScalar.of(QC(1, -3))),
        ],
    )
    assert series.render_poly(p) == "(1-3i) + 2*T^{1/2}*y1^2*y2^-1"
    assert series.render_poly(LaurentPoly.zero(2)) == "0"
