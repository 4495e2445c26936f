import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from vacstat.roots import bisect_newton, bracket_sign_changes


def test_cubic_root_to_full_precision():
    r = bisect_newton(lambda x: x ** 3 - 2, lambda x: 3 * x * x, 0.0, 3.0)
    assert r == pytest.approx(2 ** (1 / 3), abs=1e-13)


def test_requires_bracket():
    with pytest.raises(ValueError):
        bisect_newton(lambda x: x * x + 1, lambda x: 2 * x, -1.0, 1.0)


def test_endpoint_root_returned_directly():
    assert bisect_newton(lambda x: x - 1, lambda x: 1.0, 1.0, 2.0) == 1.0


def test_flat_derivative_falls_back_to_bisection():
    # derivative vanishes at the root: Newton alone would stall
    r = bisect_newton(lambda x: (x - 0.3) ** 3, lambda x: 3 * (x - 0.3) ** 2, 0.0, 1.0, xtol=1e-12)
    assert abs(r - 0.3) < 1e-4


@given(st.floats(-5, 5), st.floats(0.1, 4))
def test_recovers_shifted_root(c, width):
    lo, hi = c - width, c + 0.5 * width
    r = bisect_newton(lambda x: math.tanh(x - c), lambda x: 1 / math.cosh(x - c) ** 2, lo, hi)
    assert abs(r - c) <= 1e-11 * max(1, abs(c))


def test_bracketing_finds_every_sign_change():
    grid = np.linspace(0, 10, 101)
    brackets = bracket_sign_changes(np.sin, grid)
    roots = [0.5 * (a + b) for a, b in brackets]
    assert len(brackets) == 4  # 0 (exact hit), pi, 2pi, 3pi
    assert roots[1] == pytest.approx(math.pi, abs=0.1)
