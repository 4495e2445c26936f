import json
import math

import numpy as np
import pytest

from vacstat.catalog import (catalog, export_expected, lookup, names, product_chart,
                             sphere2_chart)
from vacstat.chart import curvature
from vacstat.errors import InvalidParams, UnknownSpace
from vacstat.sampling import halton_points


def test_registry_names():
    assert names() == ["s3", "r3", "h3", "s1xs2", "rxs2", "s2xs2", "sds"]
    assert [s.name for s in catalog()] == names()


def test_unknown_space():
    with pytest.raises(UnknownSpace):
        lookup("nosuch")


@pytest.mark.parametrize("name", ["s3", "r3", "h3", "s1xs2", "rxs2", "s2xs2"])
def test_expected_invariants_hold(name):
    spec = lookup(name)
    for x in halton_points(spec.chart, 6, seed=2):
        b = curvature(spec.chart, x)
        assert b.scalar == pytest.approx(spec.expected.R, abs=1e-9)
        assert b.inv_S == pytest.approx(spec.expected.S, abs=1e-9)
        assert b.inv_F3 == pytest.approx(spec.expected.F3, abs=1e-9)


@pytest.mark.parametrize("name", ["s3", "h3", "s1xs2", "rxs2", "s2xs2", "sds"])
def test_invariants_agree_in_alternative_chart(name):
    spec = lookup(name)
    alt = spec.alt
    for x in halton_points(spec.chart, 8, seed=4):
        y = alt.to_alt(x)
        try:
            alt.chart.check_point(y, margin=0.2)
        except Exception:
            continue
        a, b = curvature(spec.chart, x), curvature(alt.chart, y)
        tol = spec.tol * 10
        assert a.scalar == pytest.approx(b.scalar, abs=tol)
        assert a.inv_S == pytest.approx(b.inv_S, abs=tol)
        assert float(spec.potential(list(x))) == pytest.approx(float(alt.potential(list(y))), abs=1e-12)


def test_s2xs2_factor_curvatures():
    spec = lookup("s2xs2")
    b = curvature(spec.chart, [0.2, 0.1, -0.3, 0.4])
    np.testing.assert_allclose(b.ricci_eigenvalues(), [1, 1, 2, 2], atol=1e-12)


def test_sds_expected_record():
    spec = lookup("sds")
    assert "ode" in spec.tags and spec.tol == 1e-6
    assert spec.period == pytest.approx(6.24648, abs=1e-5)
    assert spec.expected.ambrozio == "violated"


def test_product_chart_validation():
    with pytest.raises(InvalidParams):
        product_chart([])
    with pytest.raises(InvalidParams):
        sphere2_chart(-1.0)
    c = product_chart([sphere2_chart(1.0), sphere2_chart(2.0)])
    assert c.dim == 4 and len(c.singular_loci) == 4


def test_export_expected_is_json():
    doc = json.loads(export_expected())
    assert set(doc) == set(names())
    assert doc["s1xs2"]["expected"]["F3"] == pytest.approx(-2 / 9)
    assert doc["s1xs2"]["period"] == pytest.approx(2 * math.pi)
