"""
Error types raised by the audit modules.

Every error carries a stable ``tag`` that the CLI reports verbatim, so
callers can branch on the tag instead of the message text.
"""

from typing import Optional


class AuditError(Exception):
    """Base class for all audit failures."""

    tag = "AuditError"

    def __init__(self, message: str = ""):
        super().__init__(message or self.tag)
        self.message = message or self.tag

    def to_dict(self) -> dict:
        return {"error": self.tag, "message": self.message}


class ParseError(AuditError):
    tag = "ParseError"

    def __init__(self, message: str, flag: Optional[str] = None):
        super().__init__(message)
        self.flag = flag

    def to_dict(self) -> dict:
        payload = super().to_dict()
        if self.flag:
            payload["flag"] = self.flag
        return payload


class PreconditionViolation(AuditError):
    tag = "PreconditionViolation"


class DivisionByZeroNorm(AuditError):
    tag = "DivisionByZeroNorm"


class RadicandMismatch(AuditError):
    tag = "RadicandMismatch"


class NegativeRadicandEmbedding(AuditError):
    tag = "NegativeRadicandEmbedding"


class IrregularSingularPoint(AuditError):
    tag = "IrregularSingularPoint"


class ExponentsOutsideField(AuditError):
    """Indicial roots that need a second square root to write down."""

    tag = "ExponentsOutsideField"


class ResonantCase(AuditError):
    tag = "ResonantCase"

    def __init__(self, gap, message: str = ""):
        super().__init__(message or f"indicial roots differ by the positive integer {gap}")
        self.gap = gap


class ExpansionPointMismatch(AuditError):
    tag = "ExpansionPointMismatch"


class InsufficientTruncation(AuditError):
    tag = "InsufficientTruncation"


class DegenerateBranch(AuditError):
    tag = "DegenerateBranch"

    def __init__(self, branch: str, message: str = ""):
        super().__init__(message or f"degenerate branch: {branch}")
        self.branch = branch


class BranchMismatch(AuditError):
    tag = "BranchMismatch"


class EllipticDegenerate(AuditError):
    tag = "EllipticDegenerate"


class StepFailure(AuditError):
    tag = "StepFailure"

    def __init__(self, message: str, last_good_time: float):
        super().__init__(f"{message} (last good time {last_good_time!r})")
        self.last_good_time = last_good_time


class PathThroughSingularity(AuditError):
    tag = "PathThroughSingularity"


class WronskianDegenerate(AuditError):
    tag = "WronskianDegenerate"


class NoCrossingFound(AuditError):
    tag = "NoCrossingFound"
