"""
Audit Report Generator

Assembles the report of one parameter audit and writes it as canonical JSON
(keys sorted, exact scalars as strings), as JSON lines for grid runs, and as
CSV or Excel summary tables.
"""

import json
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Dict, IO, Iterable, List, Optional

import pandas as pd

from classifier import Certificate, Verdict
from utils.logger import get_logger
from ve import TrapParams

logger = get_logger(__name__)

REPORT_VERSION = "1.0.0"
ATTACHMENT_KEYS = ("derived", "ve2", "lame", "whittaker", "confluent_heun", "vmax")
SUMMARY_COLUMNS = ["Row", "A", "B", "C", "D", "E", "F", "G", "h", "Verdict", "Rule Trail", "Warnings", "Error"]


@dataclass
class AuditReport:
    """Everything the audit of one parameter set produced."""

    params: TrapParams
    verdict: Verdict
    certificate: Certificate
    numeric: Optional[Dict[str, Any]] = None
    seed: Optional[int] = None
    stamp: Optional[str] = None
    version: str = REPORT_VERSION

    @property
    def warnings(self) -> List[str]:
        return self.certificate.warnings

    @property
    def attachments(self) -> Dict[str, Any]:
        return {key: self.certificate.attachments[key] for key in ATTACHMENT_KEYS
                if key in self.certificate.attachments}

    def to_dict(self) -> Dict[str, Any]:
        payload: Dict[str, Any] = {
            "params": self.params.to_dict(),
            "verdict": self.verdict.to_dict(),
            "certificate": self.certificate.to_dict(),
            "warnings": list(self.warnings),
            "meta": {"version": self.version, "seed": self.seed},
        }
        payload.update(self.attachments)
        if self.numeric is not None:
            payload["numeric"] = self.numeric
        if self.stamp is not None:
            payload["meta"]["stamp"] = self.stamp
        return payload

    @classmethod
    def from_dict(cls, payload: Dict[str, Any]) -> "AuditReport":
        attachments = {key: payload[key] for key in ATTACHMENT_KEYS if key in payload}
        certificate = Certificate.from_dict(payload["certificate"], attachments)
        meta = payload.get("meta", {})
        return cls(
            params=TrapParams.from_strings(payload["params"]),
            verdict=Verdict.from_dict(payload["verdict"]),
            certificate=certificate,
            numeric=payload.get("numeric"),
            seed=meta.get("seed"),
            stamp=meta.get("stamp"),
            version=meta.get("version", REPORT_VERSION),
        )

    def to_json(self, indent: Optional[int] = 2) -> str:
        return dumps(self.to_dict(), indent=indent)

    def summary_row(self, row: int) -> Dict[str, Any]:
        values = self.params.to_dict()
        return {
            "Row": row,
            **{name: values[name] for name in "ABCDEFG"},
            "h": values["h"],
            "Verdict": str(self.verdict.tag),
            "Rule Trail": len(self.certificate.findings),
            "Warnings": len(self.warnings),
            "Error": "",
        }


def dumps(payload: Any, indent: Optional[int] = None) -> str:
    """Canonical JSON: sorted keys, UTF-8 characters kept."""
    separators = (",", ": ") if indent else (",", ":")
    return json.dumps(payload, sort_keys=True, ensure_ascii=False, indent=indent, separators=separators)


def error_payload(error, row: Optional[int] = None) -> Dict[str, Any]:
    """{"error": tag, "message": ...} for an AuditError, with the grid row when known."""
    payload: Dict[str, Any] = error.to_dict()
    if row is not None:
        payload["row"] = row
    return payload


def write_json(payload: Dict[str, Any], path: Optional[str] = None, stream: Optional[IO[str]] = None):
    """Write one JSON document to path, or to the stream when no path is given."""
    text = dumps(payload, indent=2) + "\n"
    if path is None:
        (stream or sys.stdout).write(text)
        return
    Path(path).parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8") as f:
        f.write(text)
    logger.info("wrote %s", path)


class JsonLinesWriter:
    """One compact JSON document per line, flushed as it is written."""

    def __init__(self, path: Optional[str] = None, stream: Optional[IO[str]] = None):
        self.path = path
        self._stream = stream
        self._file = None
        self.lines_written = 0

    def __enter__(self) -> "JsonLinesWriter":
        if self.path is not None:
            Path(self.path).parent.mkdir(parents=True, exist_ok=True)
            self._file = open(self.path, "w", encoding="utf-8")
        return self

    def __exit__(self, *exc):
        if self._file is not None:
            self._file.close()
        return False

    def write(self, payload: Dict[str, Any]):
        target = self._file if self._file is not None else (self._stream or sys.stdout)
        target.write(dumps(payload) + "\n")
        target.flush()
        self.lines_written += 1


def summary_frame(rows: Iterable[Dict[str, Any]]) -> pd.DataFrame:
    return pd.DataFrame(list(rows), columns=SUMMARY_COLUMNS)


def write_summary_csv(frame: pd.DataFrame, path: str):
    Path(path).parent.mkdir(parents=True, exist_ok=True)
    frame.to_csv(path, index=False)


def write_summary_xlsx(frame: pd.DataFrame, path: str):
    """
    Grid summary workbook: all rows, plus one sheet per verdict.

    Args:
        frame: Output of summary_frame
        path: Target .xlsx file
    """
    Path(path).parent.mkdir(parents=True, exist_ok=True)
    with pd.ExcelWriter(path, engine="openpyxl") as writer:
        frame.to_excel(writer, sheet_name="Summary", index=False)
        _apply_excel_formatting(writer.sheets["Summary"], frame)
        for verdict in sorted(v for v in frame["Verdict"].unique() if v):
            subset = frame[frame["Verdict"] == verdict]
            sheet = verdict[:31]
            subset.to_excel(writer, sheet_name=sheet, index=False)
            _apply_excel_formatting(writer.sheets[sheet], subset)
    logger.info("wrote Excel summary %s (%d rows)", path, len(frame))


VERDICT_COLORS = {
    "Integrable_Separable": "98FB98",
    "Integrable_Explicit": "98FB98",
    "CandidateIntegrable": "FFF9E6",
    "Undecided": "D3D3D3",
    "NoAnalyticIntegral": "FFB6C1",
    "NonIntegrableMeromorphic": "FFB6C1",
}


def _apply_excel_formatting(worksheet, frame: pd.DataFrame):
    from openpyxl.styles import Alignment, Font, PatternFill
    from openpyxl.utils import get_column_letter

    header_font = Font(bold=True, color="FFFFFF", size=12)
    header_fill = PatternFill(start_color="366092", end_color="366092", fill_type="solid")
    for col_num in range(1, len(frame.columns) + 1):
        cell = worksheet.cell(row=1, column=col_num)
        cell.font = header_font
        cell.fill = header_fill
        cell.alignment = Alignment(horizontal="center", vertical="center")

    if "Verdict" in frame.columns:
        column = list(frame.columns).index("Verdict") + 1
        for row_num in range(2, len(frame) + 2):
            cell = worksheet.cell(row=row_num, column=column)
            color = VERDICT_COLORS.get(str(cell.value))
            if color:
                cell.fill = PatternFill(start_color=color, end_color=color, fill_type="solid")

    for col_idx, name in enumerate(frame.columns, 1):
        longest = max([len(str(name))] + [len(str(v)) for v in frame[name]])
        worksheet.column_dimensions[get_column_letter(col_idx)].width = max(8, min(longest + 3, 40))
