import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from vacstat import jets
from vacstat.jets import Jet, JetSpace, compose, constant, inv, jeinsum, stack, variables

finite = st.floats(-1.5, 1.5, allow_nan=False)


def test_partials_of_product_match_hand_derivatives():
    x, y = variables([0.5, 2.0], order=3)
    f = np.sin(x) * y ** 2
    grad = f.partials(1)
    hess = f.partials(2)
    assert grad[0] == pytest.approx(math.cos(0.5) * 4.0, abs=1e-14)
    assert grad[1] == pytest.approx(math.sin(0.5) * 4.0, abs=1e-14)
    assert hess[0, 1] == pytest.approx(math.cos(0.5) * 4.0, abs=1e-14)
    assert hess[1, 1] == pytest.approx(2 * math.sin(0.5), abs=1e-14)
    assert f.partials(3)[0, 0, 0] == pytest.approx(-math.cos(0.5) * 4.0, abs=1e-13)


def test_univariate_derivatives_of_exp():
    (t,) = variables([0.3], order=5)
    d = np.exp(2 * t).derivatives()
    want = [2.0 ** m * math.exp(0.6) for m in range(6)]
    np.testing.assert_allclose(d, want, rtol=1e-13)


@pytest.mark.parametrize("fn, dfn", [
    (np.sin, np.cos), (np.cos, lambda v: -np.sin(v)), (np.sinh, np.cosh),
    (np.cosh, np.sinh), (np.log, lambda v: 1 / v), (np.sqrt, lambda v: 0.5 / np.sqrt(v)),
])
def test_elementary_first_derivatives(fn, dfn):
    (t,) = variables([0.7], order=3)
    assert fn(t).derivatives()[1] == pytest.approx(dfn(0.7), rel=1e-13)


def test_validity_order_drops_under_differentiation():
    x, y = variables([0.0, 0.0], order=3)
    assert (x * y).d(0).order == 2
    assert ((x * y).d(0) * x).order == 2


def test_division_and_reciprocal():
    (t,) = variables([2.0], order=4)
    d = (1 / t).derivatives()
    want = [1 / 2, -1 / 4, 2 / 8, -6 / 16, 24 / 32]
    np.testing.assert_allclose(d, want, rtol=1e-13)


def test_negative_and_fractional_powers():
    (t,) = variables([1.5], order=3)
    np.testing.assert_allclose((t ** -2).derivatives()[:3], [1.5 ** -2, -2 * 1.5 ** -3, 6 * 1.5 ** -4])
    np.testing.assert_allclose((t ** 0.5).derivatives()[1], 0.5 / math.sqrt(1.5))


def test_jeinsum_contracts_tensor_axes_and_keeps_coefficients():
    x, y = variables([1.0, 2.0], order=2)
    a = stack([[x, y], [y, x * y]])
    v = np.array([1.0, -1.0])
    out = jeinsum("ij,j->i", a, v)
    np.testing.assert_allclose(out.value(), [1 - 2, 2 - 2])
    np.testing.assert_allclose(out.partials(1)[0], [1.0, -1.0])


def test_inverse_metric_jet():
    x, y = variables([0.4, 0.9], order=3)
    g = stack([[1 + x * x, x * y], [x * y, 2 + y * y]])
    gi = inv(g)
    prod = jeinsum("ij,jk->ik", g, gi)
    eye = np.eye(2)
    np.testing.assert_allclose(prod.value(), eye, atol=1e-14)
    np.testing.assert_allclose(prod.partials(1), 0.0, atol=1e-13)
    np.testing.assert_allclose(prod.partials(3), 0.0, atol=1e-12)


def test_compose_matches_direct_evaluation():
    x, y = variables([0.3, -0.4], order=4)
    inner = x * y + x
    v = float(inner.value())
    derivs = [math.sin(v), math.cos(v), -math.sin(v), -math.cos(v), math.sin(v)]
    composed = compose(inner, derivs)
    direct = np.sin(inner)
    np.testing.assert_allclose(composed.coef, direct.coef, atol=1e-14)


def test_constant_has_zero_derivatives():
    c = constant(3.0, JetSpace.get(2, 3))
    assert float(c.value()) == 3.0
    np.testing.assert_array_equal(c.partials(2), 0.0)


@given(finite, finite)
def test_product_rule(a, b):
    x, y = variables([a, b], order=2)
    u = np.sin(x) + y * y
    w = np.cos(y) * x
    lhs = (u * w).partials(1)
    rhs = u.partials(1) * float(w.value()) + w.partials(1) * float(u.value())
    np.testing.assert_allclose(lhs, rhs, atol=1e-12)


@given(finite, finite)
def test_mixed_partials_commute(a, b):
    x, y = variables([a, b], order=3)
    f = np.exp(x * y) * np.sin(x + 2 * y)
    t = f.partials(3)
    np.testing.assert_allclose(t, t.transpose(1, 0, 2), atol=1e-11)
    np.testing.assert_allclose(t, t.transpose(0, 2, 1), atol=1e-11)


@given(st.floats(0.2, 3.0))
def test_partials_against_central_differences(a):
    def fn(v):
        return np.log(v) * np.cos(v) + v ** 3

    (t,) = variables([a], order=2)
    h = 1e-5
    fd = (fn(a + h) - fn(a - h)) / (2 * h)
    assert fn(t).derivatives()[1] == pytest.approx(fd, rel=1e-7, abs=1e-8)


def test_value_helper_accepts_floats_and_jets():
    (t,) = variables([0.25], order=1)
    assert jets.value(t * 2) == pytest.approx(0.5)
    assert jets.value(1.5) == 1.5
