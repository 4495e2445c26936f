import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from vacstat.catalog import lookup
from vacstat.errors import ConstantPotential, DimensionTooLow, NotStatic
from vacstat.verify import (ambrozio_gate, ambrozio_label, check_3d_relations, d_tensor,
                            verify_space, verify_static)

vec3 = arrays(float, 3, elements=st.floats(-2, 2))
mat3 = arrays(float, (3, 3), elements=st.floats(-2, 2))


@pytest.mark.parametrize("name", ["s3", "r3", "h3", "s1xs2", "rxs2", "s2xs2", "sds"])
def test_catalog_entries_verify(name):
    rep = verify_space(lookup(name), samples=16)
    assert rep.passed, {k: (p.max_residual, p.note) for k, p in rep.predicates.items() if not p.passed}


def test_non_static_potential_detected():
    spec = lookup("s1xs2")
    res = verify_static(spec.chart, lambda x: x[1], samples=8)
    assert not res["static"].passed
    with pytest.raises(NotStatic):
        check_3d_relations(spec.chart, lambda x: x[1], samples=4)


def test_constant_potential_refused():
    with pytest.raises(ConstantPotential):
        verify_static(lookup("s3").chart, lambda x: 1.0 + 0.0 * x[0], samples=4)


def test_d_tensor_needs_three_dimensions():
    with pytest.raises(DimensionTooLow):
        d_tensor(np.eye(2), np.eye(2), np.eye(2), np.ones(2))


@given(mat3, vec3)
def test_d_forms_agree_and_are_antisymmetric(a, df):
    ric = a + a.T
    d = d_tensor(ric, np.eye(3), np.eye(3), df)
    np.testing.assert_allclose(d.components, d.e_form, atol=1e-11)
    np.testing.assert_allclose(d.components, -d.components.transpose(0, 2, 1), atol=1e-12)


@given(mat3, vec3)
def test_d_norm_identity_for_arbitrary_ricci(a, df):
    ric = a + a.T
    e = ric - np.trace(ric) / 3 * np.eye(3)
    S = float(np.sum(e * e))
    d = d_tensor(ric, np.eye(3), np.eye(3), df).components
    want = 8 * S * (df @ df) - 12 * (df @ e @ e @ df)
    assert float(np.sum(d * d)) == pytest.approx(want, abs=1e-9 * max(1.0, abs(want)))


@given(mat3)
def test_f3_bound_on_traceless_matrices(a):
    e = a + a.T
    e = e - np.trace(e) / 3 * np.eye(3)
    S = float(np.trace(e @ e))
    F3 = float(np.trace(e @ e @ e))
    assert abs(F3) <= S ** 1.5 / math.sqrt(6) + 1e-9 * max(1.0, S ** 1.5)


def test_f3_bound_is_sharp_for_two_equal_eigenvalues():
    e = np.diag([-2.0, 1.0, 1.0])
    S, F3 = np.trace(e @ e), np.trace(e @ e @ e)
    assert abs(F3) == pytest.approx(S ** 1.5 / math.sqrt(6), rel=1e-14)


def test_ambrozio_gate_and_labels():
    lo, hi = ambrozio_gate(lookup("s3").chart, 8)
    assert lo == pytest.approx(6.0, abs=1e-9) and hi == pytest.approx(6.0, abs=1e-9)
    lo, _ = ambrozio_gate(lookup("sds").warped, 64)
    assert lo < -2.5
    assert ambrozio_label((0.0, 0.0), 1e-10) == "equality"
    assert ambrozio_label((-1.0, 1.0), 1e-10) == "violated"
    assert ambrozio_label((1.0, 2.0), 1e-10) == "strict"
    assert ambrozio_label((0.0, 2.0), 1e-10) == "satisfied"
    with pytest.raises(DimensionTooLow):
        ambrozio_gate(lookup("s2xs2").chart, 4)


def test_s2xs2_is_cotton_flat_but_not_d_flat():
    rep = verify_space(lookup("s2xs2"), samples=8)
    assert rep.predicates["cotton_flat"].max_residual < 1e-9
    assert rep.predicates["d_flat"].max_residual > 0.5
