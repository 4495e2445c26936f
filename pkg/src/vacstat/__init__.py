"""Numerical laboratory for three-dimensional vacuum static spaces.

Curvature from exact metric jets (:mod:`vacstat.chart`), closed radial forms
for warped products (:mod:`vacstat.warped`), the warping-function ODE and its
periodic orbits (:mod:`vacstat.ode`), a catalog of model spaces
(:mod:`vacstat.catalog`) and the static-space predicates
(:mod:`vacstat.verify`).
"""

__version__ = "0.1.0"

from .catalog import catalog, lookup
from .chart import Chart, check_identities, covariant_jets, curvature
from .ode import OdeParams, classify, integrate, period, sds_build_and_scan, turning_points
from .verify import check_3d_relations, d_tensor, verify_static
from .warped import RadialField, WarpedSpace, radial_invariants, static_residual

__all__ = [
    "Chart", "OdeParams", "RadialField", "WarpedSpace",
    "catalog", "check_3d_relations", "check_identities", "classify", "covariant_jets",
    "curvature", "d_tensor", "integrate", "lookup", "period", "radial_invariants",
    "sds_build_and_scan", "static_residual", "turning_points", "verify_static",
]
