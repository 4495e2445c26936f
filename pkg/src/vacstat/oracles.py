"""Central finite-difference curvature, used only to cross-check the jet engine.

Independent of :mod:`vacstat.jets`: the metric is sampled as a plain float
matrix and differentiated by central differences of step ``step``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

FD_STEP = 1e-4
FD_TOL = 1e-5


def fd_metric_derivatives(chart, x, step: float = FD_STEP):
    """(g, dg[i,j,a], ddg[i,j,a,b]) by second-order central differences."""
    x = np.asarray(x, float)
    n = chart.dim
    eye = np.eye(n) * step
    g = chart.metric_matrix(x)
    dg = np.empty((n, n, n))
    ddg = np.empty((n, n, n, n))
    for a in range(n):
        dg[:, :, a] = (chart.metric_matrix(x + eye[a]) - chart.metric_matrix(x - eye[a])) / (2 * step)
        for b in range(a, n):
            pp = chart.metric_matrix(x + eye[a] + eye[b])
            pm = chart.metric_matrix(x + eye[a] - eye[b])
            mp = chart.metric_matrix(x - eye[a] + eye[b])
            mm = chart.metric_matrix(x - eye[a] - eye[b])
            ddg[:, :, a, b] = ddg[:, :, b, a] = (pp - pm - mp + mm) / (4 * step * step)
    return g, dg, ddg


@dataclass
class FdCurvature:
    gamma: np.ndarray
    riemann: np.ndarray
    ricci: np.ndarray
    scalar: float
    S: float
    F3: float


def fd_christoffel(g: np.ndarray, dg: np.ndarray) -> np.ndarray:
    ginv = np.linalg.inv(g)
    # Gamma_{l,ij} = 1/2 (d_i g_jl + d_j g_il - d_l g_ij)
    low = 0.5 * (np.einsum("jli->lij", dg) + np.einsum("ilj->lij", dg) - np.einsum("ijl->lij", dg))
    return np.einsum("kl,lij->kij", ginv, low)


def fd_curvature(chart, x, step: float = FD_STEP) -> FdCurvature:
    """Lowered Riemann tensor from second metric derivatives plus Christoffel products."""
    g, dg, ddg = fd_metric_derivatives(chart, x, step)
    n = g.shape[0]
    ginv = np.linalg.inv(g)
    gam = fd_christoffel(g, dg)
    # R_abcd = 1/2 (g_ad,bc + g_bc,ad - g_bd,ac - g_ac,bd) + g_ef (G^e_da G^f_cb - G^e_ca G^f_db)
    second = 0.5 * (np.einsum("adbc->abcd", ddg) + np.einsum("bcad->abcd", ddg)
                    - np.einsum("bdac->abcd", ddg) - np.einsum("acbd->abcd", ddg))
    quad = (np.einsum("ef,eda,fcb->abcd", g, gam, gam)
            - np.einsum("ef,eca,fdb->abcd", g, gam, gam))
    riemann = second + quad
    ricci = np.einsum("ac,abcd->bd", ginv, riemann)
    scalar = float(np.sum(ginv * ricci))
    em = ginv @ (ricci - scalar / n * g)
    return FdCurvature(gam, riemann, ricci, scalar, float(np.trace(em @ em)),
                       float(np.trace(em @ em @ em)))


def relative_gap(analytic: np.ndarray, oracle: np.ndarray) -> float:
    """max |a - o| scaled by max(1, max |a|), so large components are compared in relative terms."""
    analytic = np.asarray(analytic, float)
    scale = max(1.0, float(np.max(np.abs(analytic))) if analytic.size else 1.0)
    return float(np.max(np.abs(analytic - np.asarray(oracle, float)))) / scale


def fd_gaps(chart, x, step: float = FD_STEP) -> dict:
    """Scaled gaps between jet curvature and the finite-difference oracle at ``x``."""
    from .chart import curvature

    b = curvature(chart, x)
    o = fd_curvature(chart, x, step)
    return {
        "christoffel": relative_gap(b.gamma, o.gamma),
        "riemann": relative_gap(b.riemann, o.riemann),
        "ricci": relative_gap(b.ricci, o.ricci),
        "scalar": relative_gap([b.scalar], [o.scalar]),
    }


# -- radial closed forms against the generic engine ------------------------------

def frame_components(t: np.ndarray, g: np.ndarray) -> np.ndarray:
    """Components of a covariant tensor in the orthonormal frame g = L L^T, e = L^-T."""
    p = np.linalg.inv(np.linalg.cholesky(g))
    for axis in range(t.ndim):
        t = np.moveaxis(np.tensordot(p, t, axes=([1], [axis])), 0, axis)
    return t


def radial_chart_pairs(space, s: float, f=None, fiber=(0.3, -0.2)) -> dict:
    """Closed radial value and generic-engine value for every radial quantity at s.

    The engine runs on the conformal chart at (s, *fiber); the radial frame
    direction is the first coordinate.
    """
    from .chart import covariant_jets, curvature
    from .warped import _Radial, radial_invariants, radial_laplacian, static_residual

    chart = space.conformal_chart()
    x = np.array([s, *fiber[: space.n - 1]] + [0.1] * max(0, space.n - 1 - len(fiber)))
    b = curvature(chart, x)
    g = b.g
    ric = frame_components(b.ricci, g)
    e = frame_components(b.einstein_traceless, g)
    de = frame_components(b.traceless_d(), g)
    cot = frame_components(b.cotton, g)
    inv = radial_invariants(space, s)
    out = {
        "lambda_rad": (inv.lambda_rad, ric[0, 0]),
        "lambda_tan": (inv.lambda_tan, ric[1, 1]),
        "R": (inv.R, b.scalar),
        "S": (inv.S, b.inv_S),
        "F3": (inv.F3, b.inv_F3),
        "cotton_sq": (inv.cotton_sq, float(np.sum(cot * cot))),
        "gradE_sq": (inv.gradE_sq, float(np.sum(de * de))),
        "cubic": (inv.cubic, float(np.einsum("ik,ijm,jkm->", e, de, de))),
    }
    if f is not None:
        r = _Radial(space, s, f=f, order=4)
        cj = covariant_jets(chart, f.lift(0) if hasattr(f, "lift") else (lambda y: f(y[0])), x)
        df = frame_components(cj.grad, g)
        hess = frame_components(cj.hess, g)
        fv = float(r.f.value())
        n = space.n
        defect = hess - fv * (ric - b.scalar / (n - 1) * np.eye(n))
        cot_f = float(np.einsum("m,ik,jk,imj->", df, e, e, cot))
        out.update({
            "laplacian": (radial_laplacian(space, f, s), cj.laplacian),
            "static_residual": (static_residual(space, f, s),
                                max(abs(defect[0, 0]), abs(defect[1, 1]))),
            "cotton_f_term": (float((r.f.d(0) * (n - 1) * r.e_tan * r.e_tan * r.c).value()), cot_f),
        })
    return out
