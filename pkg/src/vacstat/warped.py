"""Radial geometry of warped products ds^2 + h(s)^2 g_N(k).

N(k) is a space form of curvature ``k`` and dimension n-1.  For radial
tensors the curvature, its covariant derivatives and the rough Laplacian
reduce to functions of ``s``; they are evaluated here on univariate jets of
``h`` and of the potential, so derivatives up to order four stay exact.

In the orthonormal frame {d/ds, e_alpha} the Ricci tensor is diagonal with
a radial eigenvalue and an (n-1)-fold tangential one.  The only non-zero
components of the covariant derivative of a diagonal radial tensor
diag(a, b, ..., b) are

    T_ss,s = a',   T_aa,s = b',   T_sa,a = T_as,a = (h'/h)(a - b),

and its rough Laplacian is diag(Da - 2(n-1)q^2 (a-b), Db + 2 q^2 (a-b)) with
q = h'/h and D the radial Laplacian u'' + (n-1) q u'.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import jets
from .chart import Chart
from .errors import DomainError, NotStatic, SNotConstant
from .jets import Jet

DEFAULT_ORDER = 5


@dataclass(frozen=True)
class WarpedSpace:
    """Warped product of an interval with a space form N(k).

    ``h`` takes a float or a :class:`~vacstat.jets.Jet` and returns the same
    kind; it must stay positive on ``domain``.
    """

    n: int
    k: float
    h: Callable
    source: str = "analytic"
    domain: tuple = (-math.inf, math.inf)
    name: str = ""
    singular_s: tuple = ()

    def __post_init__(self):
        if self.n < 3:
            raise ValueError("warped spaces here need n >= 3")
        if self.source not in ("analytic", "ode"):
            raise ValueError("source must be 'analytic' or 'ode'")

    @property
    def static_tol(self) -> float:
        return 1e-8 if self.source == "analytic" else 1e-6

    def fiber_radius_fn(self, theta):
        k = self.k
        if k > 0:
            r = math.sqrt(k)
            return np.sin(r * theta) / r
        if k < 0:
            r = math.sqrt(-k)
            return np.sinh(r * theta) / r
        return theta

    def chart(self, s_domain: tuple | None = None) -> Chart:
        """Polar chart (s, theta_1, ..., theta_{n-2}, phi) for the generic engine."""
        n = self.n
        lo, hi = s_domain if s_domain is not None else self.domain

        def metric(x):
            s = x[0]
            hs = self.h(s)
            w = hs * hs
            diag = [1.0, w]
            w = w * self.fiber_radius_fn(x[1]) ** 2
            for j in range(2, n - 1):
                diag.append(w)
                w = w * np.sin(x[j]) ** 2
            diag.append(w)
            return [[diag[i] if i == j else 0.0 for j in range(n)] for i in range(n)]

        theta_max = math.pi / math.sqrt(self.k) if self.k > 0 else 3.0
        domain = [(lo, hi), (0.0, theta_max)] + [(0.0, math.pi)] * (n - 3) + [(-math.pi, math.pi)]
        loci = [(0, v) for v in self.singular_s] + [(1, 0.0)]
        if self.k > 0:
            loci.append((1, theta_max))
        for j in range(2, n - 1):
            loci += [(j, 0.0), (j, math.pi)]
        return Chart(n, metric, tuple(domain), tuple(loci), name=self.name or "warped")

    def conformal_chart(self, s_domain: tuple | None = None) -> Chart:
        """Chart (s, u_1, ..., u_{n-1}) with the fiber in conformally flat coordinates.

        The fiber metric is 4 |du|^2 / (1 + k|u|^2)^2, so the only coordinate
        singularities are those of h itself.
        """
        n, k = self.n, self.k
        lo, hi = s_domain if s_domain is not None else self.domain

        def metric(x):
            hs = self.h(x[0])
            u2 = sum(xi * xi for xi in x[1:])
            w = hs * hs * 4.0 / ((1.0 + k * u2) ** 2)
            return [[(1.0 + 0.0 * x[0] if i == 0 else w) if i == j else 0.0 for j in range(n)]
                    for i in range(n)]

        if k > 0:
            box = 3.0 / math.sqrt(k)
        elif k < 0:
            box = 0.9 / math.sqrt(-k * (n - 1))
        else:
            box = 3.0
        domain = [(lo, hi)] + [(-box, box)] * (n - 1)
        loci = tuple((0, v) for v in self.singular_s)
        return Chart(n, metric, tuple(domain), loci, name=self.name or "warped")


@dataclass(frozen=True)
class RadialField:
    """Function of s only; ``f`` accepts floats and jets."""

    f: Callable
    name: str = ""

    def __call__(self, s):
        return self.f(s)

    def lift(self, coord: int = 0) -> Callable:
        """The same function as a field on a chart whose ``coord``-th coordinate is s."""
        return lambda x: self.f(x[coord])


@dataclass
class RadialInvariants:
    s: float
    lambda_rad: float
    lambda_tan: float
    R: float
    e_rad: float
    e_tan: float
    S: float
    F3: float
    cotton_sq: float
    gradE_sq: float
    cubic: float
    ricci_sq: float
    ambrozio_margin: float


def _jet(x, like: Jet) -> Jet:
    return x if isinstance(x, Jet) else jets.constant(x, like.space, like.order)


class _Radial:
    """All radial jets at one s (internal)."""

    def __init__(self, space: WarpedSpace, s: float, f: Callable | None = None,
                 order: int = DEFAULT_ORDER):
        (t,) = jets.variables([s], order)
        n, k = space.n, space.k
        h = _jet(space.h(t), t)
        if not h.value() > 0:
            raise DomainError(f"h({s}) = {float(h.value())} is not positive")
        self.n, self.s = n, s
        h1 = h.d(0)
        h2 = h1.d(0)
        self.h = h
        self.q = h1 / h
        self.lam_rad = -(n - 1) * h2 / h
        self.lam_tan = -h2 / h - (n - 2) * (h1 * h1 - k) / (h * h)
        self.R = self.lam_rad + (n - 1) * self.lam_tan
        self.e_rad = self.lam_rad - self.R / n
        self.e_tan = self.lam_tan - self.R / n
        self.S = self.e_rad * self.e_rad + (n - 1) * self.e_tan * self.e_tan
        self.F3 = self.e_rad ** 3 + (n - 1) * self.e_tan ** 3
        # (h'/h)(a - b) component of grad E and the single Cotton component C_{a s a}
        self.p = self.q * (self.e_rad - self.e_tan)
        self.c = self.q * (self.lam_rad - self.lam_tan) - self.lam_tan.d(0)
        self.f = None if f is None else _jet(f(t), t)

    def laplacian(self, u: Jet) -> Jet:
        u1 = u.d(0)
        return u1.d(0) + (self.n - 1) * self.q * u1

    def rough_laplacian(self, a: Jet, b: Jet):
        """Radial and tangential components of the rough Laplacian of diag(a, b, ..., b)."""
        q2 = self.q * self.q
        rad = self.laplacian(a) - 2 * (self.n - 1) * q2 * (a - b)
        tan = self.laplacian(b) + 2 * q2 * (a - b)
        return rad, tan

    def grad_e_sq(self) -> Jet:
        n = self.n
        return (self.e_rad.d(0) ** 2 + (n - 1) * self.e_tan.d(0) ** 2
                + 2 * (n - 1) * self.p * self.p)

    def cotton_sq(self) -> Jet:
        return 2 * (self.n - 1) * self.c * self.c

    def cubic(self) -> Jet:
        """sum E_ik E_ij,m E_jk,m."""
        n = self.n
        er1, et1 = self.e_rad.d(0), self.e_tan.d(0)
        return (self.e_rad * er1 * er1
                + (n - 1) * (self.e_rad * self.p * self.p + self.e_tan * et1 * et1
                             + self.e_tan * self.p * self.p))

    def hessian(self):
        f1 = self.f.d(0)
        return f1.d(0), self.q * f1

    def static_parts(self):
        fr, ft = self.hessian()
        c = self.R / (self.n - 1)
        return fr - self.f * (self.lam_rad - c), ft - self.f * (self.lam_tan - c)


def _v(j) -> float:
    return float(j.value())


def radial_invariants(space: WarpedSpace, s: float) -> RadialInvariants:
    r = _Radial(space, s, order=4)
    n = space.n
    lr, lt, R = _v(r.lam_rad), _v(r.lam_tan), _v(r.R)
    ricci_sq = lr * lr + (n - 1) * lt * lt
    return RadialInvariants(
        s=s, lambda_rad=lr, lambda_tan=lt, R=R, e_rad=_v(r.e_rad), e_tan=_v(r.e_tan),
        S=_v(r.S), F3=_v(r.F3), cotton_sq=_v(r.cotton_sq()), gradE_sq=_v(r.grad_e_sq()),
        cubic=_v(r.cubic()), ricci_sq=ricci_sq, ambrozio_margin=R * R / 2 - ricci_sq,
    )


def radial_laplacian(space: WarpedSpace, u: Callable, s: float) -> float:
    r = _Radial(space, s, f=u, order=4)
    return _v(r.laplacian(r.f))


def static_residual(space: WarpedSpace, f: Callable, s: float) -> float:
    """Max over the radial and tangential Hessian directions of the static-equation defect."""
    r = _Radial(space, s, f=f, order=4)
    a, b = r.static_parts()
    return max(abs(_v(a)), abs(_v(b)))


def _static_radial(space, f, s, tol, order=DEFAULT_ORDER) -> _Radial:
    r = _Radial(space, s, f=f, order=order)
    a, b = r.static_parts()
    res = max(abs(_v(a)), abs(_v(b)))
    tol = space.static_tol if tol is None else tol
    if not res <= tol:
        raise NotStatic(res, tol)
    return r


def bochner_S_sides(space: WarpedSpace, f: Callable, s: float, tol=None):
    """(LHS, RHS) of the Bochner-type identity for S = |E|^2 on a static space."""
    r = _static_radial(space, f, s, tol)
    fj = r.f
    lhs = 0.5 * fj * r.laplacian(r.S) + 0.5 * fj.d(0) * r.S.d(0)
    rhs = fj * (r.grad_e_sq() + 0.5 * r.cotton_sq() + 6 * r.F3 + r.R * r.S)
    return _v(lhs), _v(rhs)


def bochner_S_residual(space: WarpedSpace, f: Callable, s: float, tol=None) -> float:
    lhs, rhs = bochner_S_sides(space, f, s, tol)
    return abs(lhs - rhs)


def bochner_F3_sides(space: WarpedSpace, f: Callable, s: float, tol=None):
    """(LHS, RHS) of the Bochner-type identity for F3 = tr E^3 (n = 3)."""
    if space.n != 3:
        raise ValueError("the F3 identity is three-dimensional")
    r = _static_radial(space, f, s, tol)
    fj = r.f
    f1 = fj.d(0)
    lhs = fj * r.laplacian(r.F3) / 3 + f1 * r.F3.d(0) / 3
    cotton_term = f1 * (space.n - 1) * r.e_tan * r.e_tan * r.c
    rhs = fj * (r.R * r.F3 + r.S * r.S + 2 * r.cubic()) + 2 * cotton_term
    return _v(lhs), _v(rhs)


def bochner_F3_residual(space: WarpedSpace, f: Callable, s: float, tol=None) -> float:
    lhs, rhs = bochner_F3_sides(space, f, s, tol)
    return abs(lhs - rhs)


def lemma31_sides(space: WarpedSpace, f: Callable, s: float, tol=None) -> dict:
    """Both sides of the Laplacian formulas for Hess f and E, per frame component (n = 3)."""
    if space.n != 3:
        raise ValueError("these Laplacian formulas are three-dimensional")
    r = _static_radial(space, f, s, tol)
    fj, R, S = r.f, r.R, r.S
    f1 = fj.d(0)
    er, et = r.e_rad, r.e_tan
    a, b = r.hessian()
    hess_rad, hess_tan = r.rough_laplacian(a, b)
    base = R * R / 12 * fj - 2 * fj * S
    rhs_hess_rad = 6 * fj * er * er + R / 2 * fj * er + base + f1 * er.d(0)
    rhs_hess_tan = 6 * fj * et * et + R / 2 * fj * et + base + f1 * r.p + f1 * r.c
    e_rad_lap, e_tan_lap = r.rough_laplacian(er, et)
    rhs_e_rad = 6 * fj * er * er + R * fj * er - 2 * fj * S - f1 * er.d(0)
    rhs_e_tan = 6 * fj * et * et + R * fj * et - 2 * fj * S + 2 * f1 * r.c - f1 * et.d(0)
    return {
        "hess_rad": (_v(hess_rad), _v(rhs_hess_rad)),
        "hess_tan": (_v(hess_tan), _v(rhs_hess_tan)),
        "E_rad": (_v(fj * e_rad_lap), _v(rhs_e_rad)),
        "E_tan": (_v(fj * e_tan_lap), _v(rhs_e_tan)),
    }


def lemma31_residuals(space: WarpedSpace, f: Callable, s: float, tol=None):
    """(res_hess, res_E): max component defects of the two Laplacian formulas."""
    sides = lemma31_sides(space, f, s, tol)
    res_hess = max(abs(a - b) for key, (a, b) in sides.items() if key.startswith("hess"))
    res_e = max(abs(a - b) for key, (a, b) in sides.items() if key.startswith("E"))
    return res_hess, res_e


def eq41_balance(space: WarpedSpace, f: Callable, s: float, tol=None) -> float:
    """|grad E|^2 + |C|^2/2 + 6 F3 + R S, which vanishes when S is constant on a static space."""
    r = _static_radial(space, f, s, tol)
    tol = space.static_tol if tol is None else tol
    ds = _v(r.S.d(0))
    if abs(ds) > tol:
        raise SNotConstant(f"|S'({s})| = {abs(ds):.3e} exceeds {tol:.1e}")
    return _v(r.grad_e_sq() + 0.5 * r.cotton_sq() + 6 * r.F3 + r.R * r.S)


def radial_d_cotton(space: WarpedSpace, f: Callable, s: float):
    """(|C|^2, |D|^2, f) at s for a radial potential in dimension three."""
    if space.n != 3:
        raise ValueError("the E-form of D is three-dimensional")
    r = _Radial(space, s, f=f, order=4)
    f1 = r.f.d(0)
    d_comp = f1 * (2 * r.e_tan + r.e_rad)
    return _v(r.cotton_sq()), _v(4 * d_comp * d_comp), _v(r.f)


def s_prime(space: WarpedSpace, s: float) -> float:
    """dS/ds at s."""
    return _v(_Radial(space, s, order=3).S.d(0))


def eq41_max(space: WarpedSpace, f: Callable, s_values, tol=None) -> float:
    """Max |balance| over ``s_values`` after checking that S is constant on all of them.

    Raises :class:`SNotConstant` if any |S'| exceeds ``tol``; the balance law
    is only claimed for constant S, so a single slope disqualifies the space.
    """
    tol = space.static_tol if tol is None else tol
    slopes = [abs(s_prime(space, float(s))) for s in s_values]
    worst = max(slopes)
    if worst > tol:
        raise SNotConstant(f"max |S'| = {worst:.3e} exceeds {tol:.1e}")
    return max(abs(eq41_balance(space, f, float(s), tol)) for s in s_values)
