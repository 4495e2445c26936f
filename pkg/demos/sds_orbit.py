"""Build the periodic warped space from the warping ODE and scan one period.

Prints the turning points, the period by quadrature and by integration, and
where along the orbit the Ambrozio margin is most negative.
"""

import numpy as np

from vacstat import OdeParams, classify, period, sds_build_and_scan, turning_points
from vacstat.ode import trajectory_period

params = OdeParams(n=3, R=2.0, c0=0.3, k=1.0)
print("case:", classify(params).value)
print("turning points:", [f"{r:.7f}" for r in turning_points(params).simple])
orb = period(params)
print(f"period: quadrature {orb.period:.10f}, integration {trajectory_period(orb):.10f}")

scan = sds_build_and_scan(params, samples=64)
i = int(np.argmin(scan.margin))
row = scan.rows[i]
print(f"min Ambrozio margin {row['ambrozio_margin']:.4f} at s = {row['s']:.3f} (h = {row['h']:.4f})")
print(f"Ricci eigenvalues there: {row['lambda_rad']:.4f}, {row['lambda_tan']:.4f} (twice)")
print(f"max static residual of f = h': {scan.static_residual_max:.1e}")

for c0 in (0.25, 0.3, 0.33, 1 / 3, 0.34):
    print(f"c0 = {c0:.4f}: {classify(OdeParams(3, 2.0, c0, 1.0)).value}")
