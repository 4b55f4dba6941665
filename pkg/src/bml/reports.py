"""Verification records shared by the identity-checking operations."""

from __future__ import annotations

from dataclasses import dataclass, field

__all__ = ["VerificationReport"]


@dataclass(frozen=True)
class VerificationReport:
    """Two independently computed values for the same quantity, plus a verdict.

    `kind` says how `tol` was applied: "abs" compares |lhs - rhs|, "rel"
    compares |lhs - rhs| / max(|lhs|, |rhs|).
    """

    label: str
    lhs: float
    rhs: float
    tol: float
    kind: str = "abs"
    details: dict = field(default_factory=dict)

    @property
    def diff(self) -> float:
        return abs(self.lhs - self.rhs)

    @property
    def rel_diff(self) -> float:
        scale = max(abs(self.lhs), abs(self.rhs))
        return self.diff / scale if scale else 0.0

    @property
    def passed(self) -> bool:
        return (self.rel_diff if self.kind == "rel" else self.diff) <= self.tol

    def as_dict(self) -> dict:
        return {
            "label": self.label,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "abs_diff": self.diff,
            "rel_diff": self.rel_diff,
            "tol": self.tol,
            "kind": self.kind,
            "passed": self.passed,
            **({"details": self.details} if self.details else {}),
        }
