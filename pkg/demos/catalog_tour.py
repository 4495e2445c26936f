"""Walk the catalog: curvature invariants and verifier verdicts for every space."""

from vacstat import catalog
from vacstat.verify import verify_space

for spec in catalog():
    rep = verify_space(spec, samples=16)
    worst = max(p.max_residual for name, p in rep.predicates.items()
                if name in ("static", "fC_equals_D", "d_norm_identity"))
    margin = rep.ambrozio_margin
    band = f"[{margin[0]:+.4f}, {margin[1]:+.4f}]" if margin else "n/a (n = 4)"
    print(f"{spec.name:7s} n={spec.dim} R={spec.expected.R:+g}  "
          f"static/D residual {worst:.1e}  Ambrozio margin {band}  "
          f"{'all predicates pass' if rep.passed else 'FAILED'}")
