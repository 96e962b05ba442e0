"""Outcome record shared by every inequality check."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

import numpy as np


@dataclass
class CheckReport:
    """Result of checking ``lhs <= rhs`` pointwise.

    ``witness`` is the evaluation point (vertex, or whatever indexes the
    check) where the tolerance-adjusted excess ``lhs - rhs - allowance``
    is largest; ``max_violation`` and ``tolerance`` are lhs - rhs and the
    allowance at that point, so ``passed == (max_violation <= tolerance)``
    always holds. With a uniform allowance the witness is simply the
    vertex maximising lhs - rhs.
    """

    name: str
    per_vertex_lhs: np.ndarray
    per_vertex_rhs: np.ndarray
    max_violation: float
    tolerance: float
    passed: bool
    witness: Any
    extra: dict = field(default_factory=dict)

    @property
    def slack(self) -> float:
        """rhs - lhs at the witness; negative means the inequality failed."""
        return -self.max_violation

    def as_dict(self, include_pointwise: bool = False) -> dict:
        i = self.extra.get("witness_index")
        lhs = self.per_vertex_lhs
        rhs = self.per_vertex_rhs
        out = {
            "name": self.name,
            "lhs": float(np.ravel(lhs)[i]) if i is not None else None,
            "rhs": float(np.ravel(rhs)[i]) if i is not None else None,
            "slack": self.slack,
            "max_violation": self.max_violation,
            "tolerance": self.tolerance,
            "passed": self.passed,
            "witness": self.witness,
        }
        for key in ("path", "times"):
            if key in self.extra:
                out[key] = self.extra[key]
        if include_pointwise:
            out["per_vertex_lhs"] = np.ravel(lhs).tolist()
            out["per_vertex_rhs"] = np.ravel(rhs).tolist()
        return out

    def __repr__(self):
        status = "PASS" if self.passed else "FAIL"
        return (f"CheckReport({self.name}: {status}, "
                f"max_violation={self.max_violation:.3e}, "
                f"tolerance={self.tolerance:.3e}, witness={self.witness})")


def build_report(name, lhs, rhs, rtol, atol=0.0, witnesses=None, extra=None) -> CheckReport:
    """Assemble a report for ``lhs <= rhs`` with allowance rtol * (1 + |rhs|) + atol.

    ``witnesses`` maps a flat index to a caller-meaningful witness
    (vertex id, (vertex, time) pair, ...); by default the flat index
    itself is reported.
    """
    lhs = np.asarray(lhs, dtype=np.float64)
    rhs = np.asarray(rhs, dtype=np.float64)
    allowance = rtol * (1.0 + np.abs(rhs)) + atol
    excess = lhs - rhs - allowance
    i = int(np.argmax(excess))
    violation = float(np.ravel(lhs - rhs)[i])
    tol = float(np.ravel(allowance)[i])
    info = dict(extra or {})
    info["witness_index"] = i
    return CheckReport(
        name=name,
        per_vertex_lhs=lhs,
        per_vertex_rhs=rhs,
        max_violation=violation,
        tolerance=tol,
        passed=violation <= tol,
        witness=witnesses(i) if witnesses is not None else i,
        extra=info,
    )
