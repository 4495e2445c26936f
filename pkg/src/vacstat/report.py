"""Check records, run reports and their JSON / CSV serialisation."""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import asdict, dataclass, field

SCHEMA_VERSION = "1.0"

ANCHORS = {
    "riemann_antisym_12": "Riemann skew symmetry, first index pair",
    "riemann_antisym_34": "Riemann skew symmetry, second index pair",
    "riemann_pair_symmetry": "Riemann pair exchange symmetry",
    "first_bianchi": "first Bianchi identity",
    "second_bianchi": "second Bianchi identity",
    "ricci_curl": "Ricci curl equals divergence of Riemann",
    "contracted_bianchi": "contracted Bianchi identity div Ric = dR/2",
    "weyl_vanishing": "Weyl tensor vanishes in dimension three",
    "ricci_identity": "Ricci identity for third derivatives of f",
    "static_cotton": "f times Ricci curl on a static space",
    "static": "static equation Hess f = f(Ric - R/(n-1) g)",
    "static_laplacian": "trace of the static equation, Lap f = -R f/(n-1)",
    "scalar_gradient": "scalar curvature constant on static spaces",
    "fC_equals_D": "fC = D in dimension three",
    "d_norm_identity": "|D|^2 = 8 S |df|^2 - 12 E^2(df, df)",
    "d_forms_agree": "general and traceless forms of D agree",
    "f3_bounds": "|F3| <= S^(3/2)/sqrt(6)",
    "cotton_vs_d": "|C|^2 = |D|^2/f^2 off the zero set of f",
    "cotton_flat": "Cotton flatness matches catalog",
    "d_flat": "D flatness matches catalog",
    "ambrozio": "Ambrozio inequality |Ric|^2 <= R^2/2, pointwise",
    "bochner_S": "Bochner formula for S on static spaces",
    "bochner_F3": "Bochner formula for F3 on static spaces",
    "laplacian_hess": "Laplacian of Hess f on static spaces",
    "laplacian_E": "Laplacian of E on static spaces",
    "balance_law": "balance law |grad E|^2 + |C|^2/2 + 6 F3 + R S = 0 for constant S",
    "expected_R": "catalog scalar curvature",
    "expected_S": "catalog S",
    "expected_F3": "catalog F3",
}


@dataclass
class CheckRecord:
    name: str
    paper_anchor: str
    max_residual: float
    tol: float
    verdict: str  # "pass" | "fail" | "skip"
    note: str = ""

    @classmethod
    def judge(cls, name: str, anchor: str, residual: float, tol: float, note: str = ""):
        ok = bool(residual <= tol) and math.isfinite(residual)
        return cls(name, anchor, float(residual), float(tol), "pass" if ok else "fail", note)

    @classmethod
    def condition(cls, name: str, anchor: str, ok: bool, value: float, threshold: float,
                  note: str = ""):
        """Record for a one-sided fact (e.g. value < threshold) rather than a residual."""
        return cls(name, anchor, float(value), float(threshold), "pass" if ok else "fail", note)

    @classmethod
    def skip(cls, name: str, anchor: str, reason: str, tol: float = 0.0):
        return cls(name, anchor, 0.0, float(tol), "skip", reason)

    def line(self) -> str:
        return (f"{self.verdict.upper():4s} {self.name}  residual={self.max_residual:.3e} "
                f"tol={self.tol:.1e}  [{self.paper_anchor}]" + (f"  {self.note}" if self.note else ""))


@dataclass
class RunReport:
    command: str
    config: dict
    checks: list = field(default_factory=list)
    timing: dict = field(default_factory=dict)
    extras: dict = field(default_factory=dict)

    def add(self, *records: CheckRecord):
        self.checks.extend(records)

    @property
    def failed(self) -> list:
        return [c for c in self.checks if c.verdict == "fail"]

    @property
    def exit_code(self) -> int:
        return 1 if self.failed else 0

    def sorted_checks(self) -> list:
        return sorted(self.checks, key=lambda c: c.name)

    def to_dict(self) -> dict:
        from . import __version__

        return {
            "schema_version": SCHEMA_VERSION,
            "tool_version": __version__,
            "command": self.command,
            "config": self.config,
            "checks": [asdict(c) for c in self.sorted_checks()],
            "summary": {
                "total": len(self.checks),
                "failed": len(self.failed),
                "skipped": sum(c.verdict == "skip" for c in self.checks),
            },
            "extras": self.extras,
            "timing": self.timing,
        }

    def to_json(self, indent: int = 2) -> str:
        return json.dumps(self.to_dict(), indent=indent, sort_keys=True, default=_jsonable)

    def lines(self) -> list[str]:
        return [c.line() for c in self.sorted_checks()]


def _jsonable(obj):
    if hasattr(obj, "item"):
        return obj.item()
    if hasattr(obj, "tolist"):
        return obj.tolist()
    raise TypeError(f"not JSON serialisable: {type(obj).__name__}")


def strip_timing(doc: dict) -> dict:
    """Copy of a report document without its timing block (for determinism checks)."""
    return {k: v for k, v in doc.items() if k != "timing"}


def trace_csv(rows: list[dict], columns) -> str:
    """CSV text with '.' decimals and full float precision, independent of locale."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for r in rows:
        w.writerow([format(float(r[c]), ".17g") for c in columns])
    return buf.getvalue()
