import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from vacstat.errors import NotStatic, SNotConstant
from vacstat.oracles import radial_chart_pairs
from vacstat.warped import (RadialField, WarpedSpace, bochner_F3_residual, bochner_S_residual,
                            eq41_balance, eq41_max, lemma31_residuals, radial_d_cotton,
                            radial_invariants, radial_laplacian, s_prime, static_residual)

S3 = WarpedSpace(3, 1.0, np.sin, domain=(0.0, math.pi), singular_s=(0.0, math.pi))
H3 = WarpedSpace(3, 1.0, np.sinh, domain=(0.0, 3.0), singular_s=(0.0,))
CYL = WarpedSpace(3, 1.0, lambda t: 0.0 * t + 1.0, domain=(-3.0, 3.0))
WAVY = WarpedSpace(3, 1.0, lambda t: 1.2 + 0.3 * np.sin(t))
COS = RadialField(np.cos)


def hand_invariants(h, dh, ddh, k, n=3):
    """Ricci eigenvalues of ds^2 + h^2 g_N(k) from the textbook formulas."""
    lam_rad = -(n - 1) * ddh / h
    lam_tan = -ddh / h + (n - 2) * (k - dh * dh) / (h * h)
    return lam_rad, lam_tan


@pytest.mark.parametrize("s", [0.4, 1.1, 2.5])
def test_wavy_ricci_matches_textbook(s):
    h = 1.2 + 0.3 * math.sin(s)
    dh, ddh = 0.3 * math.cos(s), -0.3 * math.sin(s)
    want = hand_invariants(h, dh, ddh, 1.0)
    inv = radial_invariants(WAVY, s)
    assert inv.lambda_rad == pytest.approx(want[0], abs=1e-13)
    assert inv.lambda_tan == pytest.approx(want[1], abs=1e-13)
    assert inv.R == pytest.approx(want[0] + 2 * want[1], abs=1e-13)


def test_space_forms_are_einstein():
    for space, R in ((S3, 6.0), (H3, -6.0)):
        inv = radial_invariants(space, 1.0)
        assert inv.R == pytest.approx(R, abs=1e-12)
        assert abs(inv.S) < 1e-12 and abs(inv.F3) < 1e-12 and abs(inv.cotton_sq) < 1e-12


def test_cylinder_values():
    inv = radial_invariants(CYL, 0.7)
    assert (inv.lambda_rad, inv.lambda_tan, inv.R) == pytest.approx((0.0, 1.0, 2.0), abs=1e-14)
    assert inv.S == pytest.approx(2 / 3, abs=1e-14)
    assert inv.F3 == pytest.approx(-2 / 9, abs=1e-14)
    assert inv.ambrozio_margin == pytest.approx(0.0, abs=1e-14)


def test_radial_laplacian_of_r_squared_on_flat_space():
    flat = WarpedSpace(3, 1.0, lambda t: t, domain=(0.0, 5.0))
    assert radial_laplacian(flat, lambda t: t * t, 1.3) == pytest.approx(6.0, abs=1e-12)


@pytest.mark.parametrize("space, f", [(S3, COS), (H3, RadialField(np.cosh)), (CYL, COS)])
def test_static_pairs(space, f):
    for s in (0.5, 1.2, 2.1):
        assert static_residual(space, f, s) < 1e-13


@pytest.mark.parametrize("space, f", [(S3, COS), (H3, RadialField(np.cosh)), (CYL, COS)])
def test_bochner_and_laplacian_formulas(space, f):
    for s in (0.5, 1.2, 2.1):
        assert bochner_S_residual(space, f, s) < 1e-11
        assert bochner_F3_residual(space, f, s) < 1e-11
        assert max(lemma31_residuals(space, f, s)) < 1e-11


def test_identities_refuse_non_static_input():
    with pytest.raises(NotStatic):
        bochner_S_residual(WAVY, COS, 0.5)


def test_balance_law_on_constant_S():
    assert abs(eq41_balance(CYL, COS, 0.3)) < 1e-13
    assert eq41_max(S3, COS, [0.5, 1.5]) < 1e-12


def test_balance_law_refuses_varying_S():
    from vacstat.catalog import lookup
    spec = lookup("sds")
    assert abs(s_prime(spec.warped, 1.0)) > 1e-3
    with pytest.raises(SNotConstant):
        eq41_max(spec.warped, spec.radial_potential, [0.5, 1.0, 2.0])


def test_cotton_and_d_on_cylinder():
    c2, d2, f = radial_d_cotton(CYL, COS, 0.4)
    assert c2 < 1e-26
    # |D|^2 = 8 S |df|^2 - 12 E^2(df, df) with E_rad = -2/3
    want = 8 * (2 / 3) * math.sin(0.4) ** 2 - 12 * (4 / 9) * math.sin(0.4) ** 2
    assert d2 == pytest.approx(want, abs=1e-13)


@pytest.mark.parametrize("space, f", [(WAVY, RadialField(lambda t: np.cos(t) + 0.2 * t * t)),
                                      (S3, COS), (H3, RadialField(np.cosh))])
def test_closed_forms_agree_with_chart_engine(space, f):
    for s in (0.6, 1.9):
        for key, (a, b) in radial_chart_pairs(space, s, f).items():
            assert a == pytest.approx(b, abs=1e-10), key


@given(st.floats(0.3, 3.0), st.floats(-2, 2), st.floats(-2, 2))
def test_static_defect_is_linear_in_potential(s, a, b):
    f1, f2 = RadialField(np.cos), RadialField(lambda t: 0.0 * t + 1.0)
    # cylinder: the defect of cos vanishes, the constant has defect f(Ric - R/2 g) = diag(-1, 0)
    comb = RadialField(lambda t: a * np.cos(t) + b * (0.0 * t + 1.0))
    assert static_residual(CYL, comb, s) == pytest.approx(abs(b), abs=1e-12)
    assert static_residual(CYL, f1, s) < 1e-14
    assert static_residual(CYL, f2, s) == pytest.approx(1.0, abs=1e-14)


def test_rejects_low_dimension_and_bad_source():
    with pytest.raises(ValueError):
        WarpedSpace(2, 1.0, np.sin)
    with pytest.raises(ValueError):
        WarpedSpace(3, 1.0, np.sin, source="other")
