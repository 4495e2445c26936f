import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from vacstat.catalog import sphere2_chart
from vacstat.chart import (Chart, check_identities, christoffel, covariant_jets, curvature,
                           identity_residuals, scalar_jet)
from vacstat.errors import OutOfDomain, SingularMetric
from vacstat.oracles import fd_curvature, fd_gaps


def polar_plane():
    return Chart(2, lambda x: [[1.0 + 0.0 * x[0], 0.0], [0.0, x[0] * x[0]]],
                 ((0.0, 5.0), (-math.pi, math.pi)), ((0, 0.0),), "polar")


def bumpy_chart():
    """A generic non-symmetric 3-metric with off-diagonal terms."""
    def metric(x):
        a = 1.0 + 0.2 * np.sin(x[0] + 2 * x[1])
        b = 0.1 * np.cos(x[2]) * x[0]
        c = 1.5 + 0.3 * x[1] * x[1]
        d = 1.2 + 0.1 * np.sin(x[0] * x[2])
        return [[a, b, 0.05 * x[1]], [b, c, 0.0 * x[0]], [0.05 * x[1], 0.0 * x[0], d]]

    return Chart(3, metric, ((-1.0, 1.0),) * 3, (), "bumpy")


def test_polar_plane_christoffels_by_hand():
    gam, _ = christoffel(polar_plane(), [2.0, 0.3])
    assert gam[0, 1, 1] == pytest.approx(-2.0, abs=1e-14)
    assert gam[1, 0, 1] == pytest.approx(0.5, abs=1e-14)
    assert gam[1, 1, 0] == pytest.approx(0.5, abs=1e-14)
    assert abs(gam[0, 0, 0]) < 1e-15


def test_polar_plane_is_flat():
    b = curvature(polar_plane(), [1.3, 0.2])
    assert np.max(np.abs(b.riemann)) < 1e-13


@pytest.mark.parametrize("K", [0.5, 1.0, 3.0])
def test_round_sphere_gauss_curvature(K):
    b = curvature(sphere2_chart(K), [1.1, 0.4])
    # R_1212 = K det g for a surface
    assert b.riemann[0, 1, 0, 1] == pytest.approx(K * np.linalg.det(b.g), rel=1e-12)
    assert b.scalar == pytest.approx(2 * K, rel=1e-12)


def test_unit_sphere_has_positive_ricci():
    b = curvature(sphere2_chart(1.0), [0.9, 0.0])
    np.testing.assert_allclose(b.ricci_eigenvalues(), [1.0, 1.0], atol=1e-12)


def test_generic_metric_matches_finite_differences():
    chart = bumpy_chart()
    for x in ([0.1, 0.2, -0.3], [-0.5, 0.4, 0.7]):
        assert max(fd_gaps(chart, x).values()) < 1e-6


def test_fd_scalar_matches_jets_on_generic_metric():
    chart = bumpy_chart()
    x = [0.2, -0.1, 0.5]
    assert curvature(chart, x).scalar == pytest.approx(fd_curvature(chart, x).scalar, abs=1e-6)


def test_identities_on_generic_metric():
    chart = bumpy_chart()
    pts = np.array([[0.1, 0.2, -0.3], [0.5, -0.5, 0.2], [-0.7, 0.3, 0.6]])
    rep = check_identities(chart, lambda x: x[0] * x[1] + np.sin(x[2]), pts, tol=1e-9)
    assert rep.passed, {k: r.max_residual for k, r in rep.results.items()}
    assert rep.results["weyl_vanishing"].max_residual < 1e-9


def test_static_cotton_flags_non_static_potential():
    chart = bumpy_chart()
    res = identity_residuals(chart, [0.1, 0.2, 0.3], lambda x: x[0], static_potential=True)
    assert res["static_cotton"] > 1e-3


def test_four_dimensional_weyl_is_nonzero_for_product():
    from vacstat.catalog import lookup
    b = curvature(lookup("s2xs2").chart, [0.3, -0.2, 0.5, 0.1])
    assert np.max(np.abs(b.weyl)) > 0.1


def test_covariant_jets_laplacian_of_r_squared_in_polar_plane():
    cj = covariant_jets(polar_plane(), lambda x: x[0] * x[0], [1.7, 0.1])
    assert cj.laplacian == pytest.approx(4.0, abs=1e-12)
    assert cj.grad_sq == pytest.approx(4 * 1.7 ** 2, rel=1e-13)


def test_scalar_jet_values():
    sj = scalar_jet(lambda x: x[0] ** 2 * x[1], [2.0, 3.0])
    assert sj.value == 12.0
    np.testing.assert_allclose(sj.grad, [12.0, 4.0])
    assert sj.third[0, 0, 1] == pytest.approx(2.0)


def test_out_of_domain_and_singular_locus():
    chart = polar_plane()
    with pytest.raises(OutOfDomain):
        curvature(chart, [6.0, 0.0])
    with pytest.raises(OutOfDomain):
        curvature(chart, [0.001, 0.0])
    with pytest.raises(OutOfDomain):
        curvature(chart, [1.0])


def test_indefinite_metric_rejected():
    chart = Chart(2, lambda x: [[1.0 + 0.0 * x[0], 0.0], [0.0, -1.0 + 0.0 * x[0]]], ((-1, 1),) * 2)
    with pytest.raises(SingularMetric):
        curvature(chart, [0.0, 0.0])


coef = st.floats(-1.0, 1.0, allow_nan=False)


@given(st.lists(coef, min_size=6, max_size=6), st.lists(st.floats(-0.8, 0.8), min_size=3, max_size=3))
def test_ricci_identity_for_random_cubic_potential(c, x):
    def f(y):
        return (c[0] * y[0] ** 3 + c[1] * y[0] * y[1] * y[2] + c[2] * y[1] ** 2
                + c[3] * y[2] ** 3 * y[0] + c[4] * y[1] + c[5] * y[0] * y[2])

    res = identity_residuals(bumpy_chart(), x, f)
    assert res["ricci_identity"] < 1e-9
    assert res["second_bianchi"] < 1e-9
