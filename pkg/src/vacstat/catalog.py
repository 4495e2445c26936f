"""Named model spaces with known curvature and static potentials.

Each :class:`SpaceSpec` carries a generic chart, an optional radial
(warped-product) description of the same metric, a static potential in both
forms and a record of the invariants the engines must reproduce.
"""

from __future__ import annotations

import functools
import json
import math
from dataclasses import asdict, dataclass, field
from typing import Callable

import numpy as np

from .chart import Chart
from .errors import InvalidParams, UnknownSpace
from .warped import RadialField, WarpedSpace

SDS_DEFAULT = (3, 2.0, 0.3, 1.0)  # (n, R, c0, k)


@dataclass(frozen=True)
class Expected:
    """Known invariants; ``None`` means not constant or not applicable."""

    R: float | None
    S: float | None
    F3: float | None
    cotton_flat: bool
    d_flat: bool
    static: bool
    ambrozio: str | None  # "strict" | "equality" | "violated" | None (n != 3)


@dataclass(frozen=True)
class AltChart:
    """A second chart of the same space and the coordinate change into it."""

    chart: Chart
    to_alt: Callable[[np.ndarray], np.ndarray]
    potential: Callable | None = None


@dataclass(frozen=True)
class SpaceSpec:
    name: str
    description: str
    chart: Chart
    potential: Callable | None
    expected: Expected
    warped: WarpedSpace | None = None
    radial_potential: RadialField | None = None
    tags: frozenset = field(default_factory=frozenset)
    period: float | None = None
    alt: AltChart | None = None

    @property
    def dim(self) -> int:
        return self.chart.dim

    @property
    def tol(self) -> float:
        return 1e-6 if "ode" in self.tags else 1e-9


# -- chart building blocks -----------------------------------------------------

def line_chart(lo: float = -3.0, hi: float = 3.0, name: str = "R") -> Chart:
    return Chart(1, lambda x: [[1.0 + 0.0 * x[0]]], ((lo, hi),), (), name)


def circle_chart(name: str = "S1") -> Chart:
    return Chart(1, lambda x: [[1.0 + 0.0 * x[0]]], ((-math.pi, math.pi),), (), name)


def sphere2_chart(curvature: float = 1.0, name: str | None = None) -> Chart:
    """Round 2-sphere of Gauss curvature ``curvature`` in (theta, phi)."""
    if curvature <= 0:
        raise InvalidParams("sphere curvature must be positive")
    r2 = 1.0 / curvature

    def metric(x):
        st = np.sin(x[0])
        return [[r2 + 0.0 * x[0], 0.0], [0.0, r2 * st * st]]

    return Chart(2, metric, ((0.0, math.pi), (-math.pi, math.pi)),
                 ((0, 0.0), (0, math.pi)), name or f"S2(K={curvature:g})")


def product_chart(factors, name: str = "") -> Chart:
    """Block-diagonal product of charts; coordinates are concatenated in order."""
    factors = list(factors)
    if not factors:
        raise InvalidParams("product of no factors")
    offsets = np.cumsum([0] + [c.dim for c in factors])
    for c in factors:
        mid = [0.5 * (a + b) for a, b in c.domain]
        shape = np.asarray(c.metric_matrix(mid)).shape
        if shape != (c.dim, c.dim):
            raise InvalidParams(f"factor {c.name!r} metric has shape {shape}, expected dim {c.dim}")
    dim = int(offsets[-1])

    def metric(x):
        out = [[0.0] * dim for _ in range(dim)]
        for c, o in zip(factors, offsets):
            block = c.metric(list(x[o:o + c.dim]))
            for i in range(c.dim):
                for j in range(c.dim):
                    out[o + i][o + j] = block[i][j]
        return out

    domain = tuple(d for c in factors for d in c.domain)
    loci = tuple((o + ax, v) for c, o in zip(factors, offsets) for ax, v in c.singular_loci)
    return Chart(dim, metric, domain, loci, name or "x".join(c.name for c in factors))


def conformally_flat_chart(dim: int, curvature: float, radius: float, name: str) -> Chart:
    """Stereographic chart 4/(1 + K|y|^2)^2 dy^2 of a space form with K > 0."""

    def metric(y):
        r2 = sum(yi * yi for yi in y)
        c = 4.0 / ((1.0 + curvature * r2) ** 2)
        return [[c if i == j else 0.0 for j in range(dim)] for i in range(dim)]

    return Chart(dim, metric, tuple((-radius, radius) for _ in range(dim)), (), name)


def sphere2_stereo_chart(curvature: float = 1.0, radius: float = 3.0,
                         name: str | None = None) -> Chart:
    """Round 2-sphere of Gauss curvature ``curvature`` in stereographic coordinates."""
    if curvature <= 0:
        raise InvalidParams("sphere curvature must be positive")
    c4 = 4.0 / curvature

    def metric(x):
        w = c4 / ((1.0 + x[0] * x[0] + x[1] * x[1]) ** 2)
        return [[w, 0.0], [0.0, w]]

    return Chart(2, metric, ((-radius, radius), (-radius, radius)), (),
                 name or f"S2(K={curvature:g})-stereo")


def _polar_from_stereo(y):
    """Stereographic point to (geodesic distance angle 2 atan|y|, theta, phi)."""
    y = np.asarray(y, float)
    r = float(np.linalg.norm(y))
    return np.array([2 * math.atan(r), math.acos(y[2] / r), math.atan2(y[1], y[0])])


def _ball_to_polar(y):
    y = np.asarray(y, float)
    r = float(np.linalg.norm(y))
    return np.array([2 * math.atanh(r), math.acos(y[2] / r), math.atan2(y[1], y[0])])


def _s1_stereo_to_polar(x):
    s, u, v = x
    return np.array([s, 2 * math.atan(math.hypot(u, v)), math.atan2(v, u)])


def _stereo_height(x):
    """cos of the geodesic angle from the pole, written in stereographic coordinates."""
    r2 = x[0] * x[0] + x[1] * x[1]
    return (1.0 - r2) / (1.0 + r2)


# -- the registry --------------------------------------------------------------

def _cos_radial(rate: float = 1.0) -> RadialField:
    return RadialField(lambda t: np.cos(rate * t), name="cos s" if rate == 1 else f"cos({rate:g}s)")


def _s3() -> SpaceSpec:
    w = WarpedSpace(3, 1.0, np.sin, domain=(0.0, math.pi), name="S3-polar",
                    singular_s=(0.0, math.pi))
    f = _cos_radial()
    stereo = conformally_flat_chart(3, 1.0, 3.0, "S3")

    def f_stereo(y):
        r2 = sum(yi * yi for yi in y)
        return (1.0 - r2) / (1.0 + r2)

    return SpaceSpec("s3", "unit round 3-sphere, stereographic chart", stereo, f_stereo,
                     Expected(6.0, 0.0, 0.0, True, True, True, "strict"), w, f,
                     frozenset({"3d", "R>=0", "analytic", "einstein"}),
                     alt=AltChart(w.chart(), _polar_from_stereo, f.lift(0)))


def _r3() -> SpaceSpec:
    def metric(x):
        return [[1.0 + 0.0 * x[0] if i == j else 0.0 for j in range(3)] for i in range(3)]

    chart = Chart(3, metric, ((-2.0, 2.0),) * 3, (), "R3")
    polar = WarpedSpace(3, 1.0, lambda t: t, domain=(0.0, 3.5), name="R3-polar",
                        singular_s=(0.0,))

    def to_polar(x):
        x = np.asarray(x, float)
        r = float(np.linalg.norm(x))
        return np.array([r, math.acos(x[2] / r), math.atan2(x[1], x[0])])

    def x1_polar(p):
        return p[0] * np.sin(p[1]) * np.cos(p[2])

    return SpaceSpec("r3", "Euclidean 3-space, Cartesian chart", chart, lambda x: x[0],
                     Expected(0.0, 0.0, 0.0, True, True, True, "equality"), polar, None,
                     frozenset({"3d", "R>=0", "analytic", "flat", "einstein"}),
                     alt=AltChart(polar.chart(), to_polar, x1_polar))


def _h3() -> SpaceSpec:
    w = WarpedSpace(3, 1.0, np.sinh, domain=(0.0, 3.0), name="H3-polar", singular_s=(0.0,))
    f = RadialField(np.cosh, name="cosh s")
    ball = conformally_flat_chart(3, -1.0, 0.55, "H3")

    def f_ball(y):
        r2 = sum(yi * yi for yi in y)
        return (1.0 + r2) / (1.0 - r2)

    return SpaceSpec("h3", "hyperbolic 3-space, Poincare ball chart (negative R)", ball, f_ball,
                     Expected(-6.0, 0.0, 0.0, True, True, True, "strict"), w, f,
                     frozenset({"3d", "R<0", "analytic", "einstein"}),
                     alt=AltChart(w.chart(), _ball_to_polar, f.lift(0)))


def _cylinder(name: str, line: Chart, description: str, period) -> SpaceSpec:
    w = WarpedSpace(3, 1.0, lambda t: t * 0.0 + 1.0, domain=line.domain[0], name=name + "-polar")
    f = _cos_radial()
    chart = product_chart([line, sphere2_stereo_chart(1.0)], name)
    alt = product_chart([line, sphere2_chart(1.0)], name + "-polar")
    return SpaceSpec(name.lower(), description, chart, f.lift(0),
                     Expected(2.0, 2 / 3, -2 / 9, True, True, True, "equality"), w, f,
                     frozenset({"3d", "R>=0", "analytic"}), period=period,
                     alt=AltChart(alt, _s1_stereo_to_polar, f.lift(0)))


def _s1xs2() -> SpaceSpec:
    return _cylinder("S1xS2", circle_chart(), "product of the unit circle and the unit 2-sphere",
                     2 * math.pi)


def _rxs2() -> SpaceSpec:
    return _cylinder("RxS2", line_chart(-3.0, 3.0), "product of a line and the unit 2-sphere",
                     None)


def _s2xs2(R: float = 6.0) -> SpaceSpec:
    # the potential lives on the factor of curvature R/(2(n-1)); the other has R/(n-1)
    n = 4
    k1, k2 = R / (2 * (n - 1)), R / (n - 1)
    chart = product_chart([sphere2_stereo_chart(k1), sphere2_stereo_chart(k2)], "S2xS2")
    alt = product_chart([sphere2_chart(k1), sphere2_chart(k2)], "S2xS2-polar")
    rate = math.sqrt(k1)

    def to_polar(x):
        return np.concatenate([_s1_stereo_to_polar([0.0, x[0], x[1]])[1:],
                               _s1_stereo_to_polar([0.0, x[2], x[3]])[1:]])

    return SpaceSpec("s2xs2", f"product of 2-spheres of Gauss curvature {k1:g} and {k2:g} (n = 4)",
                     chart, _stereo_height,
                     Expected(R, R * R / 36, 0.0, True, False, True, None), None, None,
                     frozenset({"4d", "R>=0", "analytic", "product"}),
                     alt=AltChart(alt, to_polar, lambda x: np.cos(x[0])))


def _sds() -> SpaceSpec:
    from .ode import OdeParams, build_sds

    params = OdeParams(*SDS_DEFAULT)
    _case, space, f, T, _orbit, _traj = build_sds(params)
    return SpaceSpec("sds", f"periodic warped product from the warping ODE, {params}",
                     space.conformal_chart(), f.lift(0),
                     Expected(params.R, None, None, True, True, True, "violated"), space, f,
                     frozenset({"3d", "R>=0", "ode"}), period=T,
                     alt=AltChart(space.chart(), _s1_stereo_to_polar, f.lift(0)))


_BUILDERS = {
    "s3": _s3, "r3": _r3, "h3": _h3, "s1xs2": _s1xs2, "rxs2": _rxs2, "s2xs2": _s2xs2,
    "sds": _sds,
}


def names() -> list[str]:
    return list(_BUILDERS)


@functools.lru_cache(maxsize=None)
def lookup(name: str) -> SpaceSpec:
    try:
        builder = _BUILDERS[name]
    except KeyError:
        raise UnknownSpace(f"unknown space {name!r}; known: {', '.join(_BUILDERS)}") from None
    return builder()


def catalog() -> list[SpaceSpec]:
    return [lookup(n) for n in _BUILDERS]


def export_expected(indent: int = 2) -> str:
    """JSON document of every space's expected invariants and tags."""
    doc = {s.name: {"description": s.description, "dim": s.dim, "tags": sorted(s.tags),
                    "period": s.period, "expected": asdict(s.expected)} for s in catalog()}
    return json.dumps(doc, indent=indent, sort_keys=True)
