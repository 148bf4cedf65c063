from __future__ import annotations

from dataclasses import dataclass
from typing import List


@dataclass(frozen=True, order=True)
class Violation:
    layer: str
    location: str
    rule: str
    message: str = ""

    def __str__(self) -> str:
        text = f"{self.rule} [{self.layer} {self.location}]"
        return f"{text}: {self.message}" if self.message else text


ValidationReport = List[Violation]


class InvalidDocumentError(ValueError):
    """Raised by operations that require a valid document."""

    def __init__(self, doc_id: str, report: ValidationReport):
        self.doc_id = doc_id
        self.report = list(report)
        lines = "; ".join(str(v) for v in self.report[:5])
        more = f" (+{len(self.report) - 5} more)" if len(self.report) > 5 else ""
        super().__init__(f"document {doc_id!r} is invalid: {lines}{more}")
