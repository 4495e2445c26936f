"""The warping-function ODE of static warped products and its periodic orbits.

For a warped product ds^2 + h(s)^2 g_N(k) of dimension n with constant
scalar curvature R the warping function obeys

    h'' + w h = c0 h^(1-n),            w = R / (n (n-1)),
    (h')^2 + 2 c0/(n-2) h^(2-n) + w h^2 = k,

the second line being a first integral of the first.  Writing
Phi(h) = k - 2 c0/(n-2) h^(2-n) - w h^2 for the effective potential, h' = 0
exactly at roots of Phi, h'' = Phi'(h)/2, and a periodic orbit oscillates
between two simple roots with period 2 * int dh / sqrt(Phi).
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import solve_ivp

from . import jets
from .errors import (Blowup, CandidatePotentialFails, DomainError, InvalidParams,
                     NoPositiveRoots, NotPeriodic, ToleranceNotMet)
from .jets import Jet
from .roots import bisect_newton, bracket_sign_changes
from .warped import RadialField, WarpedSpace, radial_invariants, static_residual

H_MIN_BOUND = 1e-8
H_MAX_BOUND = 1e8


@dataclass(frozen=True)
class OdeParams:
    n: int
    R: float
    c0: float
    k: float

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 3:
            raise InvalidParams(f"n must be an integer >= 3, got {self.n}")

    @property
    def omega2(self) -> float:
        return self.R / (self.n * (self.n - 1))

    def accel(self, h):
        """h'' as a function of h (accepts jets)."""
        return -self.omega2 * h + self.c0 * h ** (1 - self.n)

    def phi(self, h):
        n = self.n
        return self.k - 2 * self.c0 / (n - 2) * h ** (2 - n) - self.omega2 * h * h

    def dphi(self, h):
        return 2 * self.c0 * h ** (1 - self.n) - 2 * self.omega2 * h

    def d2phi(self, h):
        n = self.n
        return 2 * self.c0 * (1 - n) * h ** (-n) - 2 * self.omega2


def first_integral(params: OdeParams, h, v):
    """(h')^2 + 2 c0/(n-2) h^(2-n) + w h^2; equals k along solutions."""
    if np.any(np.asarray(h) <= 0):
        raise DomainError("first integral needs h > 0")
    n = params.n
    h = np.asarray(h, float)
    v = np.asarray(v, float)
    out = v * v + 2 * params.c0 / (n - 2) * h ** (2 - n) + params.omega2 * h * h
    return float(out) if out.ndim == 0 else out


def taylor_derivatives(params: OdeParams, h0: float, v0: float, order: int) -> np.ndarray:
    """[h, h', ..., h^(order)] at a point, generated from the ODE itself."""
    space = jets.JetSpace.get(1, order)
    coef = np.zeros(order + 1)
    coef[0] = h0
    if order >= 1:
        coef[1] = v0
    m = np.arange(order - 1)
    for _ in range(order // 2 + 1):
        acc = params.accel(jets.Jet(coef, space))
        new = coef.copy()
        new[2:] = acc.coef[: order - 1] / ((m + 1) * (m + 2))
        coef = new
    return coef * space.factorial


@dataclass
class Trajectory:
    """Dense-output solution (h, h') on [s0, s1] with its v = 0 event log."""

    params: OdeParams
    s0: float
    s1: float
    sol: object
    events: np.ndarray
    rtol: float
    atol: float
    fi0: float

    def __call__(self, s):
        y = self.sol(s)
        return y[0], y[1]

    def drift(self, s):
        h, v = self(s)
        return first_integral(self.params, h, v) - self.fi0

    def max_drift(self, per_unit: int = 50) -> float:
        count = max(2, int(per_unit * abs(self.s1 - self.s0)) + 1)
        s = np.linspace(self.s0, self.s1, count)
        return float(np.max(np.abs(self.drift(s))))

    def drift_rate(self) -> float:
        """Max first-integral drift per unit of s."""
        return self.max_drift() / max(abs(self.s1 - self.s0), 1.0)

    @property
    def k_offset(self) -> float:
        """Mismatch between the initial data's first integral and params.k."""
        return self.fi0 - self.params.k

    def event_period(self) -> float:
        """Mean spacing of every second h' = 0 event (one full oscillation)."""
        ev = self.events[self.events > self.s0 + 1e-9]
        if len(ev) < 3:
            raise NotPeriodic("fewer than three turning events on the trajectory")
        return float(np.mean(ev[2:] - ev[:-2]))


def integrate(params: OdeParams, h0: float, v0: float, span, tol: float = 1e-10) -> Trajectory:
    """Adaptive Dormand-Prince 8(5,3) integration with dense output."""
    if not h0 > 0:
        raise DomainError("h0 must be positive")
    s0, s1 = float(span[0]), float(span[1])

    def rhs(_s, y):
        return [y[1], params.accel(y[0])]

    def turning(_s, y):
        return y[1]

    def too_small(_s, y):
        return y[0] - H_MIN_BOUND

    def too_large(_s, y):
        return y[0] - H_MAX_BOUND

    too_small.terminal = True
    too_large.terminal = True
    atol = tol * 1e-2
    out = solve_ivp(rhs, (s0, s1), [h0, v0], method="DOP853", rtol=tol, atol=atol,
                    dense_output=True, events=[turning, too_small, too_large])
    if out.status == 1:
        raise Blowup(f"h left [{H_MIN_BOUND}, {H_MAX_BOUND}] at s = {out.t[-1]:.6g}")
    if out.status != 0:
        raise ToleranceNotMet(out.message)
    fi0 = first_integral(params, h0, v0)
    return Trajectory(params, s0, s1, out.sol, np.asarray(out.t_events[0]), tol, atol, fi0)


# -- turning points and classification ----------------------------------------

@dataclass
class TurningPoints:
    simple: list = field(default_factory=list)
    double: list = field(default_factory=list)


def _grid():
    return np.geomspace(H_MIN_BOUND, H_MAX_BOUND, 4001)


def _critical_points(params: OdeParams) -> list:
    out = []
    for lo, hi in bracket_sign_changes(params.dphi, _grid()):
        if lo == hi:
            out.append(lo)
        else:
            out.append(bisect_newton(params.dphi, params.d2phi, lo, hi))
    return out


def _phi_scale(params: OdeParams, h: float) -> float:
    n = params.n
    return abs(params.k) + abs(2 * params.c0 / (n - 2) * h ** (2 - n)) + abs(params.omega2 * h * h)


def turning_points(params: OdeParams, xtol: float = 1e-12, double_tol: float = 1e-12) -> TurningPoints:
    """Positive roots of Phi.

    A critical point of Phi where |Phi| <= double_tol (relative to the size of
    its terms) is a double root, i.e. an equilibrium h'' = 0 of the ODE.
    """
    crit = _critical_points(params)
    doubles = [h for h in crit if abs(params.phi(h)) <= double_tol * _phi_scale(params, h)]
    pts = np.unique(np.concatenate([_grid(), np.asarray(crit, float)]))
    simple = []
    for lo, hi in bracket_sign_changes(params.phi, pts):
        if any(lo == d or hi == d for d in doubles):
            continue
        r = lo if lo == hi else bisect_newton(params.phi, params.dphi, lo, hi, xtol=xtol)
        simple.append(r)
    if not simple and not doubles:
        raise NoPositiveRoots(f"Phi has no positive roots for {params}")
    return TurningPoints(sorted(simple), sorted(doubles))


class Case(str, enum.Enum):
    SPACE_FORM = "SpaceForm"
    CYLINDER = "Cylinder"
    PERIODIC = "Periodic"
    UNBOUNDED = "Unbounded"
    DEGENERATE = "Degenerate"


def _wells(params: OdeParams, tp: TurningPoints):
    """Pairs of consecutive simple roots with Phi > 0 between them."""
    out = []
    for a, b in zip(tp.simple, tp.simple[1:]):
        if params.phi(0.5 * (a + b)) > 0:
            out.append((a, b))
    return out


def classify(params: OdeParams) -> Case:
    if params.c0 == 0:
        return Case.SPACE_FORM
    try:
        tp = turning_points(params)
    except NoPositiveRoots:
        tp = TurningPoints()
    if _wells(params, tp):
        return Case.PERIODIC
    if tp.double:
        return Case.CYLINDER
    if params.phi(H_MAX_BOUND) > 0 or params.phi(H_MIN_BOUND) > 0:
        return Case.UNBOUNDED
    return Case.DEGENERATE


@dataclass
class PeriodicOrbit:
    h_min: float
    h_max: float
    period: float
    params: OdeParams


def period(params: OdeParams, nodes: int = 160) -> PeriodicOrbit:
    """Period of the first potential well by Gauss-Legendre quadrature.

    The substitution h = m - a cos t (m, a the midpoint and half-width of the
    well) turns the inverse-square-root endpoint singularities into a
    smooth integrand on [0, pi].
    """
    if params.c0 == 0:
        raise NotPeriodic("c0 = 0 gives a space form; the lower turning point is h = 0")
    try:
        tp = turning_points(params)
    except NoPositiveRoots as exc:
        raise NotPeriodic(str(exc)) from exc
    wells = _wells(params, tp)
    if not wells:
        raise NotPeriodic(f"no potential well with two simple roots for {params}")
    h_min, h_max = wells[0]
    mid, half = 0.5 * (h_min + h_max), 0.5 * (h_max - h_min)
    x, w = np.polynomial.legendre.leggauss(nodes)
    t = 0.5 * math.pi * (x + 1.0)
    h = mid - half * np.cos(t)
    integrand = half * np.sin(t) / np.sqrt(params.phi(h))
    T = 2.0 * 0.5 * math.pi * float(np.sum(w * integrand))
    return PeriodicOrbit(h_min, h_max, T, params)


def trajectory_period(orbit: PeriodicOrbit, periods: int = 3, tol: float = 1e-12) -> float:
    """Period measured from h' = 0 events of an integration started at h_min."""
    traj = integrate(orbit.params, orbit.h_min, 0.0, (0.0, (periods + 0.25) * orbit.period), tol)
    return traj.event_period()


def equilibrium(params: OdeParams) -> float:
    """Positive h with h'' = 0, i.e. the critical point of Phi."""
    crit = _critical_points(params)
    if not crit:
        raise NotPeriodic("no equilibrium of the warping ODE")
    return crit[0]


def harmonic_period(params: OdeParams) -> float:
    """Small-oscillation period 2 pi / w, w^2 = -Phi''(h*)/2, about the equilibrium."""
    hs = equilibrium(params)
    w2 = -0.5 * params.d2phi(hs)
    if not w2 > 0:
        raise NotPeriodic("equilibrium is not a centre")
    return 2 * math.pi / math.sqrt(w2)


# -- warped spaces built from the ODE -----------------------------------------

def ode_h(traj: Trajectory, shift: int = 0):
    """h^(shift) along a trajectory as a function of s accepting floats and jets.

    Jet derivatives come from differentiating the ODE, never from the
    interpolant.
    """
    params = traj.params

    def fn(t):
        if isinstance(t, Jet):
            s = float(np.asarray(t.value()))
            h0, v0 = traj(s)
            d = taylor_derivatives(params, float(h0), float(v0), t.order + shift)
            return jets.compose(t, d[shift:])
        h0, v0 = traj(t)
        if shift == 0:
            return h0
        return taylor_derivatives(params, float(h0), float(v0), shift)[shift]

    return fn


@dataclass
class SdsScan:
    params: OdeParams
    case: Case
    space: WarpedSpace
    potential: RadialField
    period: float
    s: np.ndarray
    rows: list
    orbit: PeriodicOrbit | None = None
    trajectory: Trajectory | None = None

    @property
    def margin(self) -> np.ndarray:
        return np.array([r["ambrozio_margin"] for r in self.rows])

    @property
    def static_residual_max(self) -> float:
        return max(r["static_residual"] for r in self.rows)


TRACE_COLUMNS = ("s", "h", "h'", "first_integral_drift", "lambda_rad", "lambda_tan",
                 "R_check", "S", "F3", "ambrozio_margin", "static_residual")


def build_sds(params: OdeParams, tol: float = 1e-12):
    """Warped space, candidate potential, period and orbit for Periodic or Cylinder params."""
    if params.n != 3:
        raise InvalidParams("the geometric scan is three-dimensional")
    case = classify(params)
    if case == Case.PERIODIC:
        orbit = period(params)
        T = orbit.period
        traj = integrate(params, orbit.h_min, 0.0, (0.0, 1.02 * T), tol=tol)
        space = WarpedSpace(3, params.k, ode_h(traj), source="ode", domain=(0.0, T),
                            name=f"sds(R={params.R:g},k={params.k:g},c0={params.c0:g})")
        f = RadialField(ode_h(traj, shift=1), name="h'")
        return case, space, f, T, orbit, traj
    if case == Case.CYLINDER:
        hs = turning_points(params).double[0]
        rate = math.sqrt(params.R / (params.n - 1))
        T = 2 * math.pi / rate
        space = WarpedSpace(3, params.k, lambda t: t * 0.0 + hs, domain=(0.0, T),
                            name=f"cylinder(h={hs:g})")
        f = RadialField(lambda t: np.cos(rate * t), name="cos")
        return case, space, f, T, None, None
    raise NotPeriodic(f"{params} classified as {case.value}")


def scan_rows(space: WarpedSpace, f, traj: Trajectory | None, s_grid) -> list[dict]:
    """One trace row (see TRACE_COLUMNS) per s."""
    rows = []
    for s in s_grid:
        s = float(s)
        inv = radial_invariants(space, s)
        if traj is not None:
            h, v = (float(y) for y in traj(s))
            drift = float(traj.drift(s))
        else:
            h, v, drift = float(space.h(s)), 0.0, 0.0
        rows.append({
            "s": s, "h": h, "h'": v, "first_integral_drift": drift,
            "lambda_rad": inv.lambda_rad, "lambda_tan": inv.lambda_tan, "R_check": inv.R,
            "S": inv.S, "F3": inv.F3, "ambrozio_margin": inv.ambrozio_margin,
            "static_residual": static_residual(space, f, s),
        })
    return rows


def sds_build_and_scan(params: OdeParams, samples: int = 32, tol: float = 1e-6) -> SdsScan:
    """Sample one period of the warped space: curvature, Ambrozio margin, static residual.

    Raises :class:`CandidatePotentialFails` if the candidate potential misses
    the static equation by more than ``tol`` anywhere on the grid.
    """
    case, space, f, T, orbit, traj = build_sds(params)
    s_grid = np.arange(samples) * (T / samples)
    rows = scan_rows(space, f, traj, s_grid)
    scan = SdsScan(params, case, space, f, T, s_grid, rows, orbit, traj)
    if not scan.static_residual_max <= tol:
        raise CandidatePotentialFails(scan.static_residual_max, tol)
    return scan
