"""Pipelines behind the command line: each returns a :class:`RunReport`."""

from __future__ import annotations

import math
import time
from dataclasses import asdict, dataclass

import numpy as np

from .catalog import SDS_DEFAULT, catalog, lookup
from .chart import check_identities, curvature
from .errors import Blowup, NotPeriodic, NotStatic, SNotConstant, VacstatError
from .ode import (TRACE_COLUMNS, Case, OdeParams, build_sds, classify, equilibrium,
                  harmonic_period, integrate, ode_h, period, scan_rows, trajectory_period,
                  turning_points)
from .oracles import fd_curvature, fd_gaps, radial_chart_pairs
from .report import ANCHORS, CheckRecord, RunReport
from .sampling import halton_points
from .verify import check_3d_relations, verify_space
from .warped import (RadialField, WarpedSpace, bochner_F3_residual, bochner_S_residual,
                     eq41_max, lemma31_residuals, radial_invariants)

TOL = 1e-9
ODE_TOL = 1e-6
SDS_SUITE_PARAMS = ((3, 2.0, 0.25, 1.0), (3, 2.0, 0.3, 1.0), (3, 2.0, 0.33, 1.0))
IDENTITY_SPACES = ("s3", "r3", "h3", "s1xs2", "rxs2", "s2xs2")


@dataclass
class RunConfig:
    command: str
    space: str | None = None
    samples: int = 64
    tol: float = TOL
    ode_tol: float = ODE_TOL
    seed: int = 0
    n: int = 3
    R: float = 2.0
    k: float = 1.0
    c0: float = 0.3
    h0: float | None = None
    v0: float = 0.0
    span: float | None = None
    fd: bool = False

    def __post_init__(self):
        if self.samples < 1:
            raise ValueError("samples must be >= 1")
        if not self.tol > 0 or not self.ode_tol > 0:
            raise ValueError("tolerances must be positive")

    @property
    def params(self) -> OdeParams:
        return OdeParams(self.n, self.R, self.c0, self.k)


def _space_tol(spec, cfg: RunConfig) -> float:
    return cfg.ode_tol if "ode" in spec.tags else cfg.tol


# -- per-space check groups -------------------------------------------------------

def identity_checks(spec, samples: int, seed: int, tol: float) -> list:
    pts = halton_points(spec.chart, samples, seed=seed)
    rep = check_identities(spec.chart, spec.potential, pts, tol, static_potential=True)
    return [CheckRecord.judge(f"identities/{spec.name}/{name}", ANCHORS[name], r.max_residual, tol,
                              f"{len(r.failures)} failing samples" if r.failures else "")
            for name, r in rep.results.items()]


def verify_checks(spec, samples: int, seed: int, tol: float) -> list:
    rep = verify_space(spec, samples, tol, seed)
    return [CheckRecord(f"verify/{spec.name}/{name}", ANCHORS[name], p.max_residual, tol,
                        "pass" if p.passed else "fail", p.note)
            for name, p in rep.predicates.items()]


def expected_checks(spec, tol: float, points: int = 4, seed: int = 7, use_fd: bool = False) -> list:
    """Scalar invariants against the catalog record (jets, or the finite-difference oracle)."""
    out = []
    pts = halton_points(spec.chart, points, seed=seed)
    bundles = [fd_curvature(spec.chart, x) if use_fd else curvature(spec.chart, x) for x in pts]
    src = "finite differences" if use_fd else "jets"
    for key in ("R", "S", "F3"):
        want = getattr(spec.expected, key)
        name = f"expected/{spec.name}/{key}"
        if want is None:
            out.append(CheckRecord.skip(name, ANCHORS[f"expected_{key}"], "not constant on this space", tol))
            continue
        got = [(b.S if use_fd else b.inv_S) if key == "S" else
               (b.F3 if use_fd else b.inv_F3) if key == "F3" else b.scalar for b in bundles]
        out.append(CheckRecord.judge(name, ANCHORS[f"expected_{key}"],
                                     max(abs(g - want) for g in got), tol, f"curvature from {src}"))
    return out


def _s_grid(space: WarpedSpace, samples: int, period_len: float | None = None):
    lo, hi = space.domain
    if period_len is not None:
        return lo + np.arange(samples) * (period_len / samples)
    lo, hi = max(lo, -4.0), min(hi, 4.0)
    return lo + (hi - lo) * (np.arange(samples) + 0.5) / samples


def radial_checks(name: str, space: WarpedSpace, f: RadialField, s_values, tol: float,
                  group: str = "radial") -> list:
    """Bochner formulas, the Laplacian formulas and the constant-S balance law along s."""
    keys = ("bochner_S", "bochner_F3", "laplacian_hess", "laplacian_E")
    res = {k: [] for k in keys}
    for s in s_values:
        s = float(s)
        try:
            res["bochner_S"].append(bochner_S_residual(space, f, s, tol))
            res["bochner_F3"].append(bochner_F3_residual(space, f, s, tol))
            a, b = lemma31_residuals(space, f, s, tol)
        except NotStatic as exc:
            # the identities are claimed only on static spaces: report, do not abort
            return [CheckRecord(f"{group}/{name}/{k}", ANCHORS[k], exc.residual, tol, "fail",
                                f"not static at s={s:.6g}") for k in keys + ("balance_law",)]
        res["laplacian_hess"].append(a)
        res["laplacian_E"].append(b)
    out = [CheckRecord.judge(f"{group}/{name}/{key}", ANCHORS[key], max(v), tol, f"{len(v)} samples")
           for key, v in res.items()]
    try:
        out.append(CheckRecord.judge(f"{group}/{name}/balance_law", ANCHORS["balance_law"],
                                     eq41_max(space, f, s_values, tol), tol))
    except SNotConstant as exc:
        out.append(CheckRecord.skip(f"{group}/{name}/balance_law", ANCHORS["balance_law"],
                                    f"precondition refused: {exc}", tol))
    return out


# -- fixed facts, ODE lab and oracles -------------------------------------------------

def fact_checks(seed: int = 0) -> list:
    out = []
    cyl = lookup("s1xs2")
    bs = [curvature(cyl.chart, x) for x in halton_points(cyl.chart, 16, seed=seed)]
    margin = max(abs(b.scalar ** 2 / 2 - b.ricci_sq()) for b in bs)
    out.append(CheckRecord.judge("facts/s1xs2/ambrozio_equality", ANCHORS["ambrozio"], margin, 1e-10))
    gap = max(abs(b.inv_F3 + b.inv_S ** 1.5 / math.sqrt(6)) for b in bs)
    out.append(CheckRecord.judge("facts/s1xs2/f3_bound_equality", ANCHORS["f3_bounds"], gap, 1e-10))
    sf = max(max(abs(b.inv_S - 2 / 3), abs(b.inv_F3 + 2 / 9)) for b in bs)
    out.append(CheckRecord.judge("facts/s1xs2/S_F3_values", "S = 2/3 and F3 = -2/9", sf, 1e-10))
    s3 = lookup("s3")
    m = max(abs(b.scalar ** 2 / 2 - b.ricci_sq() - 6.0)
            for b in (curvature(s3.chart, x) for x in halton_points(s3.chart, 16, seed=seed)))
    out.append(CheckRecord.judge("facts/s3/ambrozio_margin_6", ANCHORS["ambrozio"], m, 1e-9))

    params = OdeParams(*SDS_DEFAULT)
    _case, space, _f, T, orbit, _traj = build_sds(params)
    margins = [radial_invariants(space, float(s)).ambrozio_margin for s in _s_grid(space, 32, T)]
    low = min(margins)
    out.append(CheckRecord.condition("facts/sds/ambrozio_violation", ANCHORS["ambrozio"],
                                     low < -2.5, low, -2.5, "min margin must be below -2.5"))
    inv = radial_invariants(space, 0.0)
    eig = abs(inv.lambda_rad + 2 * inv.lambda_tan - params.R)
    out.append(CheckRecord.judge("facts/sds/ricci_eigen_sum", "Ricci eigenvalue sum equals R",
                                 eig, 1e-3, f"h_min = {orbit.h_min:.6f}"))
    return out


def ode_checks() -> list:
    out = []
    p = OdeParams(3, 2.0, 0.3, 1.0)
    traj = integrate(p, 1.0, 0.0, (0.0, 50.0), tol=1e-10)
    out.append(CheckRecord.judge("ode/drift_per_unit_s", "first integral conserved",
                                 traj.drift_rate(), 1e-9, "tol 1e-10 over s in [0, 50]"))
    for c0 in (0.25, 0.3, 0.33):
        q = OdeParams(3, 2.0, c0, 1.0)
        orb = period(q)
        gap = abs(orb.period - trajectory_period(orb))
        out.append(CheckRecord.judge(f"ode/period_agreement/c0={c0:g}",
                                     "quadrature period equals event period", gap, 1e-6,
                                     f"period {orb.period:.10f}"))
    labels = {c0: classify(OdeParams(3, 2.0, c0, 1.0)).value for c0 in (1 / 3, 0.333, 0.3334)}
    ok = labels[1 / 3] == "Cylinder" and all(v != "Cylinder" for c, v in labels.items() if c != 1 / 3)
    out.append(CheckRecord.condition("ode/cylinder_exact", "double root at the equilibrium",
                                     ok, 0.0, 0.0, ", ".join(f"{c:.6g}:{v}" for c, v in labels.items())))
    eq = OdeParams(3, 2.0, 1 / 3, 1.0)
    tr = integrate(eq, 1.0, 0.0, (0.0, 100.0), tol=1e-10)
    s = np.linspace(0.0, 100.0, 2001)
    h, v = tr(s)
    out.append(CheckRecord.judge("ode/equilibrium_fixed", "constant solution h = 1",
                                 float(max(np.max(np.abs(h - 1)), np.max(np.abs(v)))), 1e-10))
    near = OdeParams(3, 2.0, 0.333, 1.0)
    rel = abs(period(near).period - harmonic_period(near)) / harmonic_period(near)
    out.append(CheckRecord.judge("ode/harmonic_limit", "small-oscillation period", rel, 1e-3))
    return out


def oracle_checks(seed: int = 0) -> list:
    out = []
    gen = WarpedSpace(3, 1.0, lambda t: 1.2 + 0.3 * np.sin(t), name="wavy")
    spaces = [("s3", lookup("s3").warped, lookup("s3").radial_potential, (0.6, 1.3, 2.4)),
              ("h3", lookup("h3").warped, lookup("h3").radial_potential, (0.4, 1.1, 2.2)),
              ("sds", lookup("sds").warped, lookup("sds").radial_potential, (0.5, 2.0, 4.1)),
              ("wavy", gen, RadialField(lambda t: np.cos(t) + 0.2 * t * t), (0.3, 1.7, 3.0))]
    for name, space, f, ss in spaces:
        worst = 0.0
        for s in ss:
            worst = max(worst, max(abs(a - b) for a, b in radial_chart_pairs(space, s, f).values()))
        out.append(CheckRecord.judge(f"oracle/radial_vs_chart/{name}",
                                     "closed radial forms equal generic curvature", worst, 1e-8))
    for spec in catalog():
        worst = max(max(fd_gaps(spec.chart, x).values())
                    for x in halton_points(spec.chart, 4, seed=seed + 11))
        out.append(CheckRecord.judge(f"oracle/finite_difference/{spec.name}",
                                     "jet curvature equals finite-difference curvature", worst, 1e-5,
                                     "gap scaled by max(1, largest component)"))
    return out


def sds_checks(params: OdeParams, samples: int, tol: float, label: str | None = None):
    """Static residual, radial identities and Ambrozio margin on one built SdS space."""
    label = label or f"c0={params.c0:g}"
    case, space, f, T, orbit, traj = build_sds(params)
    grid = _s_grid(space, samples, T)
    rows = scan_rows(space, f, traj, grid)
    out = [CheckRecord.judge(f"sds/{label}/static", ANCHORS["static"],
                             max(r["static_residual"] for r in rows), tol)]
    out += radial_checks(label, space, f, grid, tol, group="sds")
    pts = np.array([[s, 0.4, -0.3] for s in grid[::4]])
    rel = check_3d_relations(space.conformal_chart(), f.lift(0), pts, tol, require_static=False)
    for key in ("fC_equals_D", "d_norm_identity"):
        out.append(CheckRecord.judge(f"sds/{label}/{key}", ANCHORS[key], rel[key].max_residual, tol))
    margin = min(r["ambrozio_margin"] for r in rows)
    if case == Case.PERIODIC:
        out.append(CheckRecord.condition(f"sds/{label}/ambrozio_violated", ANCHORS["ambrozio"],
                                         margin < 0, margin, 0.0, "positive mass violates the inequality"))
    else:
        out.append(CheckRecord.judge(f"sds/{label}/ambrozio_equality", ANCHORS["ambrozio"],
                                     max(abs(r["ambrozio_margin"]) for r in rows), tol))
    extras = {"case": case.value, "period": T, "ambrozio_margin_min": margin,
              "h_min": orbit.h_min if orbit else None, "h_max": orbit.h_max if orbit else None}
    return out, rows, extras


# -- commands ------------------------------------------------------------------------

def run_verify(cfg: RunConfig) -> RunReport:
    spec = lookup(cfg.space)
    tol = _space_tol(spec, cfg)
    rep = RunReport("verify", _config(cfg))
    rep.add(*verify_checks(spec, cfg.samples, cfg.seed, tol))
    rep.add(*expected_checks(spec, tol, use_fd=cfg.fd))
    return rep


def run_identities(cfg: RunConfig) -> RunReport:
    spec = lookup(cfg.space)
    rep = RunReport("identities", _config(cfg))
    rep.add(*identity_checks(spec, cfg.samples, cfg.seed, _space_tol(spec, cfg)))
    return rep


def run_ode_classify(cfg: RunConfig) -> RunReport:
    p = cfg.params
    rep = RunReport("ode-classify", _config(cfg))
    case = classify(p)
    extras = {"case": case.value}
    try:
        tp = turning_points(p)
        extras.update(simple_roots=[float(r) for r in tp.simple], double_roots=[float(r) for r in tp.double])
    except VacstatError as exc:
        extras["roots"] = str(exc)
    rep.add(CheckRecord("ode/classify", "solution type of the warping ODE", 0.0, 0.0, "pass", case.value))
    if case == Case.PERIODIC:
        orb = period(p)
        gap = abs(orb.period - trajectory_period(orb))
        extras.update(period=orb.period, h_min=orb.h_min, h_max=orb.h_max)
        rep.add(CheckRecord.judge("ode/period_agreement", "quadrature period equals event period",
                                  gap, cfg.ode_tol))
        try:
            extras["harmonic_period"] = harmonic_period(p)
        except NotPeriodic:
            pass
    elif case == Case.CYLINDER:
        extras["equilibrium"] = equilibrium(p)
    rep.extras = extras
    return rep


def run_ode_trace(cfg: RunConfig):
    """Integrate and tabulate one trajectory; returns (report, csv rows)."""
    p = cfg.params
    rep = RunReport("ode-trace", _config(cfg))
    case = classify(p)
    h0, span = cfg.h0, cfg.span
    if h0 is None:
        h0 = period(p).h_min if case == Case.PERIODIC else 1.0
    if span is None:
        span = period(p).period if case == Case.PERIODIC and cfg.h0 is None else 10.0
    try:
        traj = integrate(p, h0, cfg.v0, (0.0, span), tol=1e-10)
    except Blowup as exc:
        rep.add(CheckRecord("ode/integrate", "warping ODE integration", math.inf, 0.0, "fail", str(exc)))
        return rep, []
    space = WarpedSpace(p.n, p.k, ode_h(traj), source="ode", domain=(0.0, span))
    f = RadialField(ode_h(traj, shift=1), name="h'")
    grid = np.linspace(0.0, span, cfg.samples)
    rows = scan_rows(space, f, traj, grid)
    rep.add(CheckRecord.judge("ode/drift_per_unit_s", "first integral conserved", traj.drift_rate(), 1e-9,
                              f"first integral offset from k: {traj.k_offset:.3e}"))
    rep.add(CheckRecord.judge("ode/static_h_prime", ANCHORS["static"],
                              max(r["static_residual"] for r in rows), cfg.ode_tol, "candidate f = h'"))
    rep.extras = {"case": case.value, "h0": h0, "v0": cfg.v0, "span": span,
                  "first_integral_offset": traj.k_offset}
    return rep, rows


def run_sds_scan(cfg: RunConfig):
    p = cfg.params
    rep = RunReport("sds-scan", _config(cfg))
    samples = cfg.samples
    checks, rows, extras = sds_checks(p, samples, cfg.ode_tol)
    rep.add(*checks)
    rep.extras = extras
    return rep, rows


def run_suite(cfg: RunConfig) -> RunReport:
    rep = RunReport("suite", _config(cfg))
    t0 = time.perf_counter()
    for name in IDENTITY_SPACES:
        spec = lookup(name)
        rep.add(*identity_checks(spec, cfg.samples, cfg.seed, cfg.tol))
    sds = lookup("sds")
    rep.add(*identity_checks(sds, cfg.samples, cfg.seed, cfg.ode_tol))
    rep.timing["identities_s"] = time.perf_counter() - t0
    t1 = time.perf_counter()
    for spec in catalog():
        tol = _space_tol(spec, cfg)
        rep.add(*verify_checks(spec, cfg.samples, cfg.seed, tol))
        rep.add(*expected_checks(spec, tol, use_fd=cfg.fd))
        if spec.warped is not None and spec.radial_potential is not None and "ode" not in spec.tags:
            grid = _s_grid(spec.warped, 32)
            rep.add(*radial_checks(spec.name, spec.warped, spec.radial_potential, grid, tol))
    rep.timing["catalog_s"] = time.perf_counter() - t1
    t2 = time.perf_counter()
    sds_extras = {}
    for params in SDS_SUITE_PARAMS:
        p = OdeParams(*params)
        checks, _rows, extras = sds_checks(p, 32, cfg.ode_tol)
        rep.add(*checks)
        sds_extras[f"c0={p.c0:g}"] = extras
    rep.add(*fact_checks(cfg.seed))
    rep.add(*ode_checks())
    rep.timing["ode_s"] = time.perf_counter() - t2
    t3 = time.perf_counter()
    rep.add(*oracle_checks(cfg.seed))
    rep.timing["oracle_s"] = time.perf_counter() - t3
    rep.timing["total_s"] = time.perf_counter() - t0
    rep.extras = {"sds": sds_extras}
    return rep


def _config(cfg: RunConfig) -> dict:
    return {k: v for k, v in asdict(cfg).items()}


COMMANDS = {
    "verify": run_verify,
    "identities": run_identities,
    "ode-classify": run_ode_classify,
    "ode-trace": run_ode_trace,
    "sds-scan": run_sds_scan,
    "suite": run_suite,
}


def run(cfg: RunConfig):
    """Dispatch a command; returns (report, csv rows or None)."""
    out = COMMANDS[cfg.command](cfg)
    if isinstance(out, tuple):
        return out
    return out, None


__all__ = ["RunConfig", "run", "run_suite", "TRACE_COLUMNS"]
