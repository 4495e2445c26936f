"""Decision predicates for vacuum static spaces.

Every verdict here is a tolerance comparison on a residual evaluated at
sample points; nothing is decided symbolically.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .chart import Chart, _bundle, _f_covariant, geometry, gnorm
from .errors import ConstantPotential, DimensionTooLow, NotStatic
from .sampling import halton_points
from .warped import WarpedSpace, radial_invariants

TOL_ANALYTIC = 1e-8
TOL_ODE = 1e-6
F_ZERO = 1e-12


@dataclass
class PredicateResult:
    """Max residual of one predicate over the samples, with its verdict."""

    name: str
    max_residual: float
    tol: float
    passed: bool
    samples: int = 0
    skipped: int = 0
    note: str = ""

    @classmethod
    def from_residuals(cls, name: str, residuals, tol: float, skipped: int = 0, note: str = ""):
        residuals = np.asarray(list(residuals), float)
        worst = float(np.max(residuals)) if residuals.size else 0.0
        return cls(name, worst, tol, bool(worst <= tol), int(residuals.size), skipped, note)


@dataclass
class DTensor:
    """D_ijk from the general-n formula and, for n = 3, the traceless-Ricci form."""

    components: np.ndarray
    e_form: np.ndarray | None = None

    @property
    def forms_gap(self) -> float:
        if self.e_form is None:
            return 0.0
        return float(np.max(np.abs(self.components - self.e_form)))


@dataclass
class VerifierReport:
    space: str
    samples: int
    tol: float
    predicates: dict = field(default_factory=dict)
    ambrozio_margin: tuple | None = None

    @property
    def passed(self) -> bool:
        return all(p.passed for p in self.predicates.values())

    def add(self, result: PredicateResult):
        self.predicates[result.name] = result


# -- D tensor ------------------------------------------------------------------

def d_tensor(ricci: np.ndarray, g: np.ndarray, ginv: np.ndarray, grad_f: np.ndarray,
             n: int | None = None) -> DTensor:
    """D_ijk (antisymmetric in j, k) from Ricci, the metric and df, all covariant."""
    n = g.shape[0] if n is None else n
    if n < 3:
        raise DimensionTooLow(f"D needs n >= 3, got {n}")
    R = float(np.sum(ginv * ricci))
    fup = ginv @ grad_f
    rf = ricci @ fup
    general = ((n - 1) * (np.einsum("ik,j->ijk", ricci, grad_f) - np.einsum("ij,k->ijk", ricci, grad_f))
               + R * (np.einsum("k,ij->ijk", grad_f, g) - np.einsum("j,ik->ijk", grad_f, g))
               + np.einsum("j,ik->ijk", rf, g) - np.einsum("k,ij->ijk", rf, g)) / (n - 2)
    e_form = None
    if n == 3:
        e = ricci - R / 3 * g
        ef = e @ fup
        e_form = (2 * (np.einsum("ik,j->ijk", e, grad_f) - np.einsum("ij,k->ijk", e, grad_f))
                  + np.einsum("j,ik->ijk", ef, g) - np.einsum("k,ij->ijk", ef, g))
    return DTensor(general, e_form)


# -- pointwise residuals ---------------------------------------------------------

@dataclass
class PointData:
    """Curvature and potential derivatives at one sample."""

    f: float
    grad_f: np.ndarray
    hess_f: np.ndarray
    laplacian: float
    bundle: object


def point_data(chart: Chart, f: Callable, x) -> PointData:
    geo = geometry(chart, x, f=f, order=3)
    b = _bundle(geo)
    f1, f2, _ = _f_covariant(geo)
    hess = f2.value()
    return PointData(float(geo.f.value()), f1.value(), hess, float(np.sum(b.ginv * hess)), b)


def static_parts(p: PointData) -> dict:
    b = p.bundle
    n = b.dim
    R = b.scalar
    defect = p.hess_f - p.f * (b.ricci - R / (n - 1) * b.g)
    return {
        "static": gnorm(defect, b.ginv),
        "static_laplacian": abs(p.laplacian + R / (n - 1) * p.f),
        "scalar_gradient": gnorm(b.scalar_grad, b.ginv),
    }


def relations_3d(p: PointData) -> dict:
    """fC - D, the |D|^2 identity, D-form agreement and the F3 bound margin at one point."""
    b = p.bundle
    gi = b.ginv
    d = d_tensor(b.ricci, b.g, gi, p.grad_f)
    fup = gi @ p.grad_f
    e = b.einstein_traceless
    em = gi @ e
    e2ff = float(fup @ e @ em @ fup)
    grad_sq = float(p.grad_f @ fup)
    d_sq = gnorm(d.components, gi) ** 2
    S, F3 = b.inv_S, b.inv_F3
    return {
        "fC_equals_D": gnorm(p.f * b.cotton - d.components, gi),
        "d_norm_identity": abs(d_sq - (8 * S * grad_sq - 12 * e2ff)),
        "d_forms_agree": gnorm(d.components - d.e_form, gi),
        "f3_bound_gap": max(S, 0.0) ** 1.5 / math.sqrt(6) - abs(F3),
        "cotton_norm": gnorm(b.cotton, gi),
        "d_norm": math.sqrt(d_sq),
        "cotton_vs_d": (abs(gnorm(b.cotton, gi) ** 2 - d_sq / p.f ** 2)
                        if abs(p.f) >= F_ZERO else None),
    }


def ambrozio_margin_at(bundle) -> float:
    return bundle.scalar ** 2 / 2 - bundle.ricci_sq()


# -- predicates over samples -----------------------------------------------------

def _points(chart: Chart, samples, seed: int):
    if np.ndim(samples) == 0:
        return halton_points(chart, int(samples), seed=seed)
    return np.atleast_2d(np.asarray(samples, float))


def verify_static(chart: Chart, f: Callable, samples=64, tol: float = TOL_ANALYTIC,
                  seed: int = 0) -> dict:
    """Residuals of the static equation, its trace and |grad R| over the samples.

    Raises :class:`ConstantPotential` if df vanishes at every sample.
    """
    pts = _points(chart, samples, seed)
    data = [point_data(chart, f, x) for x in pts]
    if all(gnorm(p.grad_f, p.bundle.ginv) <= F_ZERO for p in data):
        raise ConstantPotential("the potential has zero gradient at every sample")
    parts = [static_parts(p) for p in data]
    return {name: PredicateResult.from_residuals(name, [q[name] for q in parts], tol)
            for name in ("static", "static_laplacian", "scalar_gradient")}


def check_3d_relations(chart: Chart, f: Callable, samples=64, tol: float = TOL_ANALYTIC,
                       seed: int = 0, require_static: bool = True) -> dict:
    """fC = D, the |D|^2 identity, the two D formulas and the F3 bound (n = 3)."""
    if chart.dim != 3:
        raise DimensionTooLow("these relations are three-dimensional")
    pts = _points(chart, samples, seed)
    data = [point_data(chart, f, x) for x in pts]
    if require_static:
        worst = max(static_parts(p)["static"] for p in data)
        if not worst <= tol:
            raise NotStatic(worst, tol)
    rel = [relations_3d(p) for p in data]
    out = {name: PredicateResult.from_residuals(name, [r[name] for r in rel], tol)
           for name in ("fC_equals_D", "d_norm_identity", "d_forms_agree")}
    gaps = [r["f3_bound_gap"] for r in rel]
    out["f3_bounds"] = PredicateResult(
        "f3_bounds", float(max(0.0, -min(gaps))), tol, bool(min(gaps) >= -tol), len(gaps),
        note=f"min S^1.5/sqrt6 - |F3| = {min(gaps):.3e}")
    cd = [r["cotton_vs_d"] for r in rel if r["cotton_vs_d"] is not None]
    out["cotton_vs_d"] = PredicateResult.from_residuals(
        "cotton_vs_d", cd, tol, skipped=len(rel) - len(cd),
        note="samples with |f| < 1e-12 skipped")
    out["cotton_norm"] = PredicateResult.from_residuals("cotton_norm", [r["cotton_norm"] for r in rel], tol)
    out["d_norm"] = PredicateResult.from_residuals("d_norm", [r["d_norm"] for r in rel], tol)
    return out


def ambrozio_gate(space, samples=64, seed: int = 0) -> tuple[float, float]:
    """(min, max) of R^2/2 - |Ric|^2 over samples (pointwise test only; n = 3).

    ``space`` is a :class:`Chart` (samples are points or a count) or a
    :class:`WarpedSpace` (samples are s-values or a count over its domain).
    """
    if isinstance(space, WarpedSpace):
        if space.n != 3:
            raise DimensionTooLow("the gate is three-dimensional")
        if np.ndim(samples) == 0:
            lo, hi = space.domain
            s = lo + (hi - lo) * (np.arange(int(samples)) + 0.5) / int(samples)
        else:
            s = np.asarray(samples, float)
        m = [radial_invariants(space, float(t)).ambrozio_margin for t in s]
    else:
        if space.dim != 3:
            raise DimensionTooLow("the gate is three-dimensional")
        from .chart import curvature
        m = [ambrozio_margin_at(curvature(space, x)) for x in _points(space, samples, seed)]
    return float(min(m)), float(max(m))


def ambrozio_label(margin: tuple, tol: float) -> str:
    lo, hi = margin
    if lo < -tol:
        return "violated"
    if abs(lo) <= tol and abs(hi) <= tol:
        return "equality"
    if lo > tol:
        return "strict"
    return "satisfied"


def verify_space(spec, samples: int = 64, tol: float | None = None, seed: int = 0) -> VerifierReport:
    """All predicates for a catalog entry, each judged against its expected record."""
    tol = spec.tol if tol is None else tol
    report = VerifierReport(spec.name, samples, tol)
    pts = halton_points(spec.chart, samples, seed=seed)
    for r in verify_static(spec.chart, spec.potential, pts, tol).values():
        report.add(r)
    if spec.dim == 3:
        rel = check_3d_relations(spec.chart, spec.potential, pts, tol, require_static=False)
        for name in ("fC_equals_D", "d_norm_identity", "d_forms_agree", "f3_bounds", "cotton_vs_d"):
            report.add(rel[name])
        for name, want in (("cotton_norm", spec.expected.cotton_flat), ("d_norm", spec.expected.d_flat)):
            r = rel[name]
            flat = r.max_residual <= tol
            label = "cotton_flat" if name == "cotton_norm" else "d_flat"
            report.add(PredicateResult(label, r.max_residual, tol, flat == want, r.samples,
                                       note=f"flat={flat}, expected {want}"))
        margin = ambrozio_gate(spec.chart, pts)
        report.ambrozio_margin = margin
        label = ambrozio_label(margin, max(tol, 1e-10))
        want = spec.expected.ambrozio
        ok = label == want or (want == "strict" and label == "satisfied")
        report.add(PredicateResult("ambrozio", max(0.0, -margin[0]), tol, ok, len(pts),
                                   note=f"margin in [{margin[0]:.6g}, {margin[1]:.6g}]: {label}"))
    else:
        pdata = [point_data(spec.chart, spec.potential, x) for x in pts]
        dn = []
        for p in pdata:
            d = d_tensor(p.bundle.ricci, p.bundle.g, p.bundle.ginv, p.grad_f)
            dn.append(gnorm(d.components, p.bundle.ginv))
        worst = float(max(dn))
        flat = worst <= tol
        report.add(PredicateResult("d_flat", worst, tol, flat == spec.expected.d_flat, len(pts),
                                   note=f"flat={flat}, expected {spec.expected.d_flat}"))
        cn = float(max(gnorm(p.bundle.cotton, p.bundle.ginv) for p in pdata))
        report.add(PredicateResult("cotton_flat", cn, tol, (cn <= tol) == spec.expected.cotton_flat,
                                   len(pts)))
    return report
