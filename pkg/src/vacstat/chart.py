"""Coordinate-chart curvature engine.

Everything is computed in coordinate components from a metric supplied as a
plain Python function of the coordinates.  The function is evaluated on
:mod:`vacstat.jets` coordinates, so all metric derivatives are exact (up to
rounding) and the curvature pipeline never differences numerically.

Index conventions
-----------------
* ``gamma[k, i, j]`` is the Christoffel symbol with upper index ``k``.
* Covariant derivative indices are appended last: ``ricci_d[i, j, k]`` is
  the derivative of ``R_ij`` in direction ``k`` and ``f3[i, j, k]`` is the
  third covariant derivative of a scalar, differentiated in the order i, j, k.
* ``riemann[a, b, c, d]`` is fully lowered with the sign fixed so that the
  Ricci tensor is ``g^{ac} R_abcd`` and the unit sphere has Ricci = (n-1) g.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from . import jets
from .errors import OutOfDomain, SingularMetric
from .jets import Jet, jeinsum

__all__ = [
    "Chart",
    "ScalarJet",
    "CurvatureBundle",
    "Geometry",
    "IdentityResult",
    "IdentityReport",
    "christoffel",
    "curvature",
    "covariant_jets",
    "covariant_derivative",
    "scalar_jet",
    "geometry",
    "check_identities",
    "identity_residuals",
    "gnorm",
    "raise_index",
]

_LETTERS = "abcdefghijklmnop"


@dataclass(frozen=True)
class Chart:
    """A coordinate patch carrying a Riemannian metric.

    ``metric(x)`` returns an n-by-n nested list (or array) whose entries are
    built from ``x`` with numpy functions; it must accept both floats and
    jets.  ``singular_loci`` lists ``(axis, value)`` coordinate hyperplanes
    that samplers keep away from.
    """

    dim: int
    metric: Callable[[Sequence], object]
    domain: tuple
    singular_loci: tuple = ()
    name: str = ""
    margin: float = 1e-2

    def metric_matrix(self, x) -> np.ndarray:
        g = np.array(self.metric(list(np.asarray(x, float))), dtype=float)
        return g

    def metric_jet(self, coords: Sequence[Jet]) -> Jet:
        rows = self.metric(list(coords))
        return jets.stack([list(r) for r in rows], like=coords[0])

    def check_point(self, x, margin: float | None = None):
        """Raise :class:`OutOfDomain` if ``x`` is outside the domain or near a singular locus."""
        margin = self.margin if margin is None else margin
        x = np.asarray(x, float)
        if x.shape != (self.dim,):
            raise OutOfDomain(f"expected {self.dim} coordinates, got shape {x.shape}")
        for xi, (lo, hi) in zip(x, self.domain):
            if not lo <= xi <= hi:
                raise OutOfDomain(f"{x} outside chart domain {self.domain}")
        for axis, val in self.singular_loci:
            if abs(x[axis] - val) < margin:
                raise OutOfDomain(f"{x} within {margin} of singular locus x[{axis}]={val}")


@dataclass
class ScalarJet:
    """Value and symmetric partial derivatives of a scalar field at a point."""

    value: float
    grad: np.ndarray
    hess: np.ndarray
    third: np.ndarray


def scalar_jet(f: Callable, x, order: int = 3) -> ScalarJet:
    coords = jets.variables(x, order)
    fj = f(coords)
    if not isinstance(fj, Jet):
        fj = jets.constant(fj, coords[0].space)
    return ScalarJet(float(fj.value()), fj.partials(1), fj.partials(2), fj.partials(3))


# -- jet helpers ---------------------------------------------------------------

def _dlast(t: Jet) -> Jet:
    """Partial derivative with the new index appended last."""
    g = t.grad()
    return g.transpose(tuple(range(1, g.ndim)) + (0,))


def _lin(subscripts: str, t: Jet) -> Jet:
    lhs, out = subscripts.split("->")
    return Jet(np.einsum(f"{lhs}Q->{out}Q", t.coef), t.space, t.order)


def covariant_derivative(t: Jet, gamma: Jet) -> Jet:
    """Covariant derivative of a fully covariant tensor jet; new index last."""
    r = t.ndim
    idx = _LETTERS[:r]
    out = _dlast(t)
    for slot in range(r):
        t_sub = idx[:slot] + "y" + idx[slot + 1:]
        out = out - jeinsum(f"yz{idx[slot]},{t_sub}->{idx}z", gamma, t)
    return out


def raise_index(t: np.ndarray, ginv: np.ndarray, axis: int) -> np.ndarray:
    moved = np.moveaxis(t, axis, 0)
    return np.moveaxis(np.tensordot(ginv, moved, axes=(1, 0)), 0, axis)


def gnorm(t: np.ndarray, ginv: np.ndarray) -> float:
    """Norm of a covariant tensor with every index contracted through ``ginv``."""
    t = np.asarray(t, float)
    up = t
    for ax in range(t.ndim):
        up = raise_index(up, ginv, ax)
    return float(np.sqrt(abs(np.sum(t * up))))


# -- the pipeline --------------------------------------------------------------

@dataclass
class Geometry:
    """Jets of the metric, connection and curvature at one point.

    With metric jets of order K the curvature jets are valid to order K-2,
    so K=3 reaches first covariant derivatives of curvature and K=4 second.
    """

    x: np.ndarray
    order: int
    g: Jet
    ginv: Jet
    gamma: Jet
    riemann: Jet
    ricci: Jet
    scalar: Jet
    f: Jet | None = None


def geometry(chart: Chart, x, f: Callable | None = None, order: int = 3,
             check: bool = True) -> Geometry:
    x = np.asarray(x, float)
    if check:
        chart.check_point(x)
    coords = jets.variables(x, order)
    g = chart.metric_jet(coords)
    g0 = g.value()
    if np.max(np.abs(g0 - g0.T)) > 1e-14 * max(1.0, np.max(np.abs(g0))):
        raise SingularMetric(f"metric not symmetric at {x}")
    try:
        np.linalg.cholesky(g0)
    except np.linalg.LinAlgError as exc:
        raise SingularMetric(f"metric not positive definite at {x}") from exc
    ginv = jets.inv(g)
    dg = _dlast(g)  # dg[i, j, l] = d_l g_ij
    lowered = 0.5 * (dg.transpose(1, 2, 0) + dg.transpose(2, 1, 0) - dg)  # [i, j, l]
    gamma = jeinsum("kl,ijl->kij", ginv, lowered)
    dgam = _dlast(gamma)  # [k, i, j, l]
    rup = (dgam.transpose(0, 2, 3, 1) - dgam.transpose(0, 2, 1, 3)
           + jeinsum("ace,edb->abcd", gamma, gamma)
           - jeinsum("ade,ecb->abcd", gamma, gamma))
    riemann = jeinsum("ae,ebcd->abcd", g, rup)
    ricci = _lin("abad->bd", rup)
    scalar = jeinsum("bd,bd->", ginv, ricci)
    fj = None
    if f is not None:
        fj = f(coords)
        if not isinstance(fj, Jet):
            fj = jets.constant(fj, coords[0].space)
    return Geometry(x, order, g, ginv, gamma, riemann, ricci, scalar, fj)


@dataclass
class CurvatureBundle:
    """Pointwise curvature data in coordinate components (see module docstring)."""

    x: np.ndarray
    g: np.ndarray
    ginv: np.ndarray
    gamma: np.ndarray
    dgamma: np.ndarray
    riemann: np.ndarray
    riemann_d: np.ndarray
    ricci: np.ndarray
    ricci_d: np.ndarray
    scalar: float
    scalar_grad: np.ndarray
    weyl: np.ndarray | None
    einstein_traceless: np.ndarray
    inv_S: float
    inv_F3: float
    cotton: np.ndarray

    @property
    def dim(self) -> int:
        return self.g.shape[0]

    def ricci_mixed(self) -> np.ndarray:
        return self.ginv @ self.ricci

    def ricci_eigenvalues(self) -> np.ndarray:
        return np.sort(np.linalg.eigvals(self.ricci_mixed()).real)

    def ricci_sq(self) -> float:
        """Full contraction R_ij R^ij."""
        return gnorm(self.ricci, self.ginv) ** 2

    def traceless_d(self) -> np.ndarray:
        """Covariant derivative of E, index order [i, j, k]."""
        n = self.dim
        return self.ricci_d - np.einsum("ij,k->ijk", self.g, self.scalar_grad) / n


def _bundle(geo: Geometry) -> CurvatureBundle:
    n = geo.g.shape[0]
    g = geo.g.value()
    ginv = geo.ginv.value()
    ricci = geo.ricci.value()
    scalar = float(geo.scalar.value())
    ricci_d = covariant_derivative(geo.ricci, geo.gamma).value()
    riemann_d = covariant_derivative(geo.riemann, geo.gamma).value()
    riemann = geo.riemann.value()

    weyl = None
    if n >= 3:
        a = ricci - scalar / (2 * (n - 1)) * g
        weyl = riemann - (
            np.einsum("ik,jl->ijkl", a, g) + np.einsum("jl,ik->ijkl", a, g)
            - np.einsum("il,jk->ijkl", a, g) - np.einsum("jk,il->ijkl", a, g)
        ) / (n - 2)

    e = ricci - scalar / n * g
    em = ginv @ e
    s_inv = float(np.trace(em @ em))
    f3_inv = float(np.trace(em @ em @ em))
    cotton = ricci_d - ricci_d.transpose(0, 2, 1)
    return CurvatureBundle(
        x=geo.x, g=g, ginv=ginv, gamma=geo.gamma.value(),
        dgamma=_dlast(geo.gamma).value(), riemann=riemann, riemann_d=riemann_d,
        ricci=ricci, ricci_d=ricci_d, scalar=scalar,
        scalar_grad=geo.scalar.partials(1), weyl=weyl, einstein_traceless=e,
        inv_S=s_inv, inv_F3=f3_inv, cotton=cotton,
    )


def christoffel(chart: Chart, x) -> tuple[np.ndarray, np.ndarray]:
    """Christoffel symbols and their partials ``dgamma[k, i, j, l] = d_l gamma[k, i, j]``."""
    geo = geometry(chart, x, order=2)
    return geo.gamma.value(), _dlast(geo.gamma).value()


def curvature(chart: Chart, x) -> CurvatureBundle:
    return _bundle(geometry(chart, x, order=3))


@dataclass
class CovariantJets:
    grad: np.ndarray
    hess: np.ndarray
    third: np.ndarray
    laplacian: float
    grad_sq: float


def _f_covariant(geo: Geometry):
    f1 = _dlast(geo.f)
    f2 = covariant_derivative(f1, geo.gamma)
    f3 = covariant_derivative(f2, geo.gamma)
    return f1, f2, f3


def covariant_jets(chart: Chart, f: Callable, x) -> CovariantJets:
    """First three covariant derivatives of ``f``, its Laplacian and |grad f|^2."""
    geo = geometry(chart, x, f=f, order=3)
    f1, f2, f3 = (t.value() for t in _f_covariant(geo))
    ginv = geo.ginv.value()
    return CovariantJets(f1, f2, f3, float(np.sum(ginv * f2)), float(f1 @ ginv @ f1))


# -- identity checks -----------------------------------------------------------

@dataclass
class IdentityResult:
    name: str
    max_residual: float = 0.0
    passed: bool = True
    failures: list = field(default_factory=list)

    def update(self, residual: float, point_index: int, tol: float):
        self.max_residual = max(self.max_residual, residual)
        if not residual <= tol:
            self.passed = False
            self.failures.append(point_index)


@dataclass
class IdentityReport:
    chart: str
    tol: float
    samples: int
    results: dict

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.results.values())

    def merge(self, other: "IdentityReport") -> "IdentityReport":
        out = dict(self.results)
        offset = self.samples
        for name, r in other.results.items():
            mine = out.get(name)
            if mine is None:
                out[name] = IdentityResult(r.name, r.max_residual, r.passed,
                                           [i + offset for i in r.failures])
            else:
                out[name] = IdentityResult(
                    name, max(mine.max_residual, r.max_residual),
                    mine.passed and r.passed,
                    mine.failures + [i + offset for i in r.failures])
        return IdentityReport(self.chart, self.tol, self.samples + other.samples, out)


def identity_residuals(chart: Chart, x, f: Callable | None = None,
                       static_potential: bool = False) -> dict:
    """g-contracted residual norms of the pointwise curvature identities at ``x``."""
    geo = geometry(chart, x, f=f, order=3)
    b = _bundle(geo)
    n = b.dim
    gi = b.ginv
    rm, rmd, ric, ricd = b.riemann, b.riemann_d, b.ricci, b.ricci_d
    res = {
        "riemann_antisym_12": gnorm(rm + rm.transpose(1, 0, 2, 3), gi),
        "riemann_antisym_34": gnorm(rm + rm.transpose(0, 1, 3, 2), gi),
        "riemann_pair_symmetry": gnorm(rm - rm.transpose(2, 3, 0, 1), gi),
        # R_ijkl + R_iklj + R_iljk
        "first_bianchi": gnorm(rm + rm.transpose(0, 2, 3, 1) + rm.transpose(0, 3, 1, 2), gi),
        # R_ijkl,m + R_ijlm,k + R_ijmk,l   (array index order i j k l m)
        "second_bianchi": gnorm(
            rmd + np.einsum("ijlmk->ijklm", rmd) + np.einsum("ijmkl->ijklm", rmd), gi),
        # R_ik,m - R_im,k - g^{lp} R_kmil,p
        "ricci_curl": gnorm(
            ricd - ricd.transpose(0, 2, 1) - np.einsum("lp,kmilp->ikm", gi, rmd), gi),
        # g^{ik} R_ij,k - 1/2 d_j R
        "contracted_bianchi": gnorm(np.einsum("ik,ijk->j", gi, ricd) - 0.5 * b.scalar_grad, gi),
    }
    if n == 3:
        res["weyl_vanishing"] = gnorm(b.weyl, gi)
    if geo.f is not None:
        f1, f2, f3 = (t.value() for t in _f_covariant(geo))
        fup = gi @ f1
        # f_ijk - f_ikj - f^l R_lijk
        res["ricci_identity"] = gnorm(
            f3 - f3.transpose(0, 2, 1) - np.einsum("l,lijk->ijk", fup, rm), gi)
        if static_potential:
            fv = float(geo.f.value())
            g = b.g
            lhs = fv * (ricd - ricd.transpose(0, 2, 1))
            rhs = (np.einsum("l,lijk->ijk", fup, rm)
                   + np.einsum("j,ik->ijk", f1, ric) - np.einsum("k,ij->ijk", f1, ric)
                   + b.scalar / (n - 1) * (np.einsum("k,ij->ijk", f1, g)
                                           - np.einsum("j,ik->ijk", f1, g)))
            res["static_cotton"] = gnorm(lhs - rhs, gi)
    return res


def check_identities(chart: Chart, f: Callable | None, sample_points, tol: float = 1e-9,
                     static_potential: bool = False) -> IdentityReport:
    """Run :func:`identity_residuals` over ``sample_points``; pass iff every residual <= tol."""
    results = {}
    pts = np.atleast_2d(np.asarray(sample_points, float))
    for i, x in enumerate(pts):
        for name, r in identity_residuals(chart, x, f, static_potential).items():
            results.setdefault(name, IdentityResult(name)).update(r, i, tol)
    return IdentityReport(chart.name, tol, len(pts), results)
