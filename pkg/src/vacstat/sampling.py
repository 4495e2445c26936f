"""Low-discrepancy sample points for charts."""

from __future__ import annotations

import numpy as np
from scipy.stats import qmc


def halton_points(chart, count: int, seed: int = 0, margin: float | None = None) -> np.ndarray:
    """``count`` scrambled-Halton points in the chart domain, kept ``margin`` away
    from every singular locus and from finite domain edges.

    Deterministic for a given ``seed``.
    """
    if count < 1:
        raise ValueError("count must be >= 1")
    margin = chart.margin if margin is None else margin
    lo = np.array([a for a, _ in chart.domain], float)
    hi = np.array([b for _, b in chart.domain], float)
    lo_in = lo + margin
    hi_in = hi - margin
    sampler = qmc.Halton(d=chart.dim, scramble=True, seed=seed)
    out = []
    while len(out) < count:
        batch = sampler.random(max(2 * count, 16))
        pts = lo_in + batch * (hi_in - lo_in)
        for p in pts:
            if all(abs(p[ax] - v) >= margin for ax, v in chart.singular_loci):
                out.append(p)
                if len(out) == count:
                    break
    return np.array(out)
