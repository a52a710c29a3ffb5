"""
Verdicts and certificates.

A Certificate is an ordered list of Findings. Each gate the classifier
evaluates appends one Finding; gates that can end the classification carry
the Verdict they issue when they hold. Replaying a certificate returns the
outcome of the first finding that holds and carries one.
"""

from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, List, Optional, Tuple

from utils.errors import PreconditionViolation


class VerdictTag(str, Enum):
    INTEGRABLE_SEPARABLE = "Integrable_Separable"
    INTEGRABLE_EXPLICIT = "Integrable_Explicit"
    NO_ANALYTIC_INTEGRAL = "NoAnalyticIntegral"
    NON_INTEGRABLE_MEROMORPHIC = "NonIntegrableMeromorphic"
    CANDIDATE_INTEGRABLE = "CandidateIntegrable"
    UNDECIDED = "Undecided"

    def __str__(self):
        return self.value


@dataclass(frozen=True)
class Verdict:
    tag: VerdictTag
    necessary_conditions: Tuple[str, ...] = ()
    reason: Optional[str] = None

    @classmethod
    def separable(cls) -> "Verdict":
        return cls(VerdictTag.INTEGRABLE_SEPARABLE)

    @classmethod
    def explicit(cls) -> "Verdict":
        return cls(VerdictTag.INTEGRABLE_EXPLICIT)

    @classmethod
    def no_analytic_integral(cls) -> "Verdict":
        return cls(VerdictTag.NO_ANALYTIC_INTEGRAL)

    @classmethod
    def non_integrable(cls) -> "Verdict":
        return cls(VerdictTag.NON_INTEGRABLE_MEROMORPHIC)

    @classmethod
    def candidate(cls, conditions=()) -> "Verdict":
        return cls(VerdictTag.CANDIDATE_INTEGRABLE, tuple(conditions))

    @classmethod
    def undecided(cls, reason: str) -> "Verdict":
        return cls(VerdictTag.UNDECIDED, (), reason)

    def to_dict(self) -> dict:
        payload = {"verdict": self.tag.value, "necessary_conditions": list(self.necessary_conditions)}
        if self.reason is not None:
            payload["reason"] = self.reason
        return payload

    @classmethod
    def from_dict(cls, payload: dict) -> "Verdict":
        return cls(VerdictTag(payload["verdict"]), tuple(payload.get("necessary_conditions", ())),
                   payload.get("reason"))


@dataclass(frozen=True)
class Finding:
    """One evaluated rule: exact inputs, the boolean outcome and the verdict it issues when it holds."""

    rule: str
    cite: str
    values: Dict[str, str]
    holds: bool
    outcome: Optional[Verdict] = None

    def to_dict(self) -> dict:
        payload = {"rule": self.rule, "cite": self.cite, "values": dict(sorted(self.values.items())),
                   "holds": self.holds}
        if self.outcome is not None:
            payload["outcome"] = self.outcome.to_dict()
        return payload

    @classmethod
    def from_dict(cls, payload: dict) -> "Finding":
        outcome = payload.get("outcome")
        return cls(payload["rule"], payload["cite"], dict(payload.get("values", {})), bool(payload["holds"]),
                   Verdict.from_dict(outcome) if outcome is not None else None)


@dataclass
class Certificate:
    """Append-only record of a classification."""

    findings: List[Finding] = field(default_factory=list)
    warnings: List[str] = field(default_factory=list)
    attachments: Dict[str, object] = field(default_factory=dict)

    def record(self, rule: str, cite: str, values: Dict[str, object], holds: bool,
               outcome: Optional[Verdict] = None) -> Finding:
        finding = Finding(rule, cite, {k: str(v) for k, v in values.items()}, bool(holds), outcome)
        self.findings.append(finding)
        return finding

    def warn(self, message: str):
        if message not in self.warnings:
            self.warnings.append(message)

    def extend_warnings(self, messages):
        for message in messages:
            self.warn(message)

    def replay(self) -> Verdict:
        """
        Verdict of the first finding that holds and carries an outcome.

        Raises:
            PreconditionViolation: If no finding decides
        """
        for finding in self.findings:
            if finding.holds and finding.outcome is not None:
                return finding.outcome
        raise PreconditionViolation("certificate has no deciding finding")

    def to_dict(self) -> dict:
        return {"findings": [f.to_dict() for f in self.findings], "warnings": list(self.warnings)}

    @classmethod
    def from_dict(cls, payload: dict, attachments: Optional[Dict[str, object]] = None) -> "Certificate":
        return cls([Finding.from_dict(f) for f in payload.get("findings", [])],
                   list(payload.get("warnings", [])), dict(attachments or {}))
