"""
Reporters module - Audit reports and their JSON, JSON-lines, CSV and Excel writers.
"""

from .audit_report_generator import (
    AuditReport,
    JsonLinesWriter,
    dumps,
    error_payload,
    summary_frame,
    write_json,
    write_summary_csv,
    write_summary_xlsx,
)

__all__ = [
    'AuditReport', 'JsonLinesWriter', 'dumps', 'error_payload',
    'summary_frame', 'write_json', 'write_summary_csv', 'write_summary_xlsx',
]
