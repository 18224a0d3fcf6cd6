import json
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from sigma3.curve import (CurveFunction, CurvePoint, Monomial, curve_from_json, derive_along_curve,
                          dump_curve, eval_curve_function, load_curve, make_curve,
                          monomial_basis, parse_curve_function, point_near_infinity, pole_order)
from sigma3.errors import InfinityNotSupported, PoleAtPoint, RepeatedRoots, TooFarFromInfinity
from sigma3.exact import GaussianRational, LaurentPoly
from sigma3.identities import local_increment

X7P1 = make_curve(1, 0, 0, 0, 0, 0, 0)
REAL = make_curve(0, -36, 0, 49, 0, -14, 0)


def test_stock_curves_have_expected_roots():
    r = np.sort_complex(REAL.numeric_roots)
    assert np.allclose(r, [-3, -2, -1, 0, 1, 2, 3], atol=1e-10)
    w = X7P1.numeric_roots
    assert np.allclose(w ** 7, -1, atol=1e-12)


def test_repeated_roots_rejected():
    with pytest.raises(RepeatedRoots):
        make_curve(0, 0, 0, 0, 0, 0, 0)
    # (x - 1)^2 (x^5 + 1): the numerical roots are distinct at 1e-8, the gcd catches it
    coeffs = np.polynomial.polynomial.polymul([1, -2, 1], [1, 0, 0, 0, 0, 1])
    with pytest.raises(RepeatedRoots):
        make_curve(*[int(round(c)) for c in coeffs[:7]])


def test_coefficient_forms():
    c = make_curve("1/3", 0, 2.5, 1j, 0, 0, GaussianRational(0, Fraction(1, 7)))
    assert c.coeffs[0] == GaussianRational(Fraction(1, 3))
    assert c.coeffs[3] == GaussianRational(0, 1)
    assert c.coeffs[7] == 1
    with pytest.raises(ValueError):
        make_curve(1, 2, 3)


def test_curve_json_round_trip(tmp_path):
    c = make_curve("1/3", -2, 0, 1j, 0, "5/2", 0)
    p = tmp_path / "c.json"
    dump_curve(c, p)
    assert load_curve(p) == c
    assert json.loads(p.read_text())["lambda"][0] == ["1/3", 0]
    with pytest.raises(ValueError):
        curve_from_json({"lambda": [[1, 0]] * 6})


def test_monomial_basis_examples():
    assert [str(m) for m in monomial_basis(4)] == ["1", "x", "x^2", "x^3", "y"]
    assert [str(m) for m in monomial_basis(7)] == ["1", "x", "x^2", "x^3", "y", "x^4", "yx", "x^5"]
    assert monomial_basis(0) == [Monomial(0, 0)]


@given(st.integers(0, 60))
def test_pole_orders_strictly_increase(n):
    orders = [pole_order(m) for m in monomial_basis(n)]
    assert all(a < b for a, b in zip(orders, orders[1:]))
    # gaps at infinity are exactly 1, 3, 5
    assert set(range(orders[-1] + 1)) - set(orders) <= {1, 3, 5}


def test_pole_order_examples():
    assert pole_order(Monomial(3)) == 6
    assert pole_order(Monomial(0, 1)) == 7
    assert pole_order(Monomial(2, 1)) == 11


def _exact_funcs(curve):
    coeff = st.integers(-5, 5)
    poly = st.dictionaries(st.integers(0, 4), coeff, max_size=3).map(LaurentPoly)
    return st.builds(lambda a, b: curve.function(a, b), poly, poly)


@pytest.mark.parametrize("j", [1, 2, 3])
@given(data=st.data())
def test_derivation_leibniz(j, data):
    g = data.draw(_exact_funcs(REAL))
    h = data.draw(_exact_funcs(REAL))
    D = lambda v: derive_along_curve(v, j, REAL)
    assert D(g * h) == D(g) * h + g * D(h)


def test_derivation_examples():
    c = X7P1
    x, y = c.x, c.y
    f = c.function(c.f_exact)
    df = c.function(c.df_exact)
    assert derive_along_curve(x, 1, c) == 2 * y
    assert derive_along_curve(y, 1, c) == df
    assert derive_along_curve(x, 3, c) == c.function(LaurentPoly(), LaurentPoly({-2: 2}))
    D1 = lambda g: derive_along_curve(g, 1, c)
    assert D1(D1(x ** 2)) == 8 * f + 4 * x * df
    for k in range(1, 7):
        assert D1(x ** k) == 2 * k * x ** (k - 1) * y


@pytest.mark.parametrize("j", [1, 2, 3])
def test_derivation_matches_central_difference(j):
    rng = np.random.default_rng(j)
    g = REAL.x ** 3 + REAL.y * REAL.x - 2 * REAL.y
    Dg = derive_along_curve(g, j, REAL)
    for _ in range(5):
        P = REAL.point(complex(*rng.uniform(0.5, 2.5, 2)), 1)
        h = 1e-4
        Qp, dp = local_increment(P, h, REAL)
        Qm, dm = local_increment(P, -h, REAL)
        fd = (g(Qp.x, Qp.y) - g(Qm.x, Qm.y)) / (dp[j - 1] - dm[j - 1])
        assert abs(fd - eval_curve_function(Dg, P)) <= 1e-5 * abs(fd)


def test_evaluation_examples():
    P = X7P1.point(2)
    assert P.y ** 2 == pytest.approx(129)
    assert eval_curve_function(X7P1.y, P) == P.y
    assert eval_curve_function(X7P1.x ** 2, X7P1.point(3)) == pytest.approx(9)
    assert eval_curve_function(derive_along_curve(X7P1.x, 1, X7P1), P) == pytest.approx(2 * P.y)
    with pytest.raises(InfinityNotSupported):
        eval_curve_function(X7P1.x, CurvePoint.infinity())
    with pytest.raises(PoleAtPoint):
        eval_curve_function(derive_along_curve(X7P1.x, 2, X7P1), CurvePoint(0j, 1 + 0j))


@given(data=st.data())
def test_text_form_round_trip(data):
    g = data.draw(_exact_funcs(REAL)) * GaussianRational(Fraction(3, 7), -1)
    assert parse_curve_function(g.to_text(), REAL) == g


def test_text_form_layout():
    g = REAL.x ** 2 * 3 + REAL.y * Fraction(1, 2) - 1
    assert g.to_text() == "3*x^2 + -1*x^0 + 1/2*x^0*y"
    assert REAL.const(0).to_text() == "0"


def test_point_near_infinity():
    P = point_near_infinity(X7P1, 0.01)
    assert P.x == pytest.approx(1e4)
    # y = -t^-7 sqrt(1 + t^14)
    assert P.y / -1e14 == pytest.approx(1 + 0.5e-28, rel=1e-15)
    for c in (X7P1, REAL):
        Q = point_near_infinity(c, 0.05)
        assert abs(Q.y ** 2 - c.f(Q.x)) <= 1e-12 * abs(c.f(Q.x))
        assert (point_near_infinity(c, 1e-4).x * 1e-8) == pytest.approx(1)
    with pytest.raises(TooFarFromInfinity):
        point_near_infinity(REAL, 0.7)
    assert point_near_infinity(REAL, 0).at_infinity


def test_on_curve_check():
    P = REAL.point(1.5 + 0.5j, -1)
    assert REAL.is_on_curve(P)
    assert not REAL.is_on_curve(CurvePoint(P.x, P.y * 1.001))
    assert P.conjugate_sheet().y == -P.y
