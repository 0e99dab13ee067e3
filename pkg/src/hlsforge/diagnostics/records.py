"""Error records and verification reports, plus their JSON wire shape.

The JSON shapes here are a cross-module contract: dataset files, repair
traces, and the CLI all carry these exact objects.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

CATEGORY_BY_MNEMONIC = {
    "DAA": "hlsc_incompatible",
    "OOB": "hlsc_incompatible",
    "PTR": "hlsc_incompatible",
    "UDT": "hlsc_incompatible",
    "AID": "pragma_misuse",
    "DPC": "pragma_misuse",
    "MLP": "pragma_misuse",
    "PUC": "pragma_misuse",
    "UDM": "syntax_functional",
    "FIN": "syntax_functional",
}

SEED_MNEMONICS = tuple(CATEGORY_BY_MNEMONIC)

UNKNOWN_MNEMONIC = "???"


@dataclass(frozen=True)
class ErrorRecord:
    mnemonic: str
    category: str
    message: str
    line: int
    col: int
    snippet: str
    severity: str  # synthesis_blocking | functional

    def to_dict(self) -> Dict:
        return {
            "mnemonic": self.mnemonic,
            "category": self.category,
            "line": self.line,
            "col": self.col,
            "message": self.message,
            "snippet": self.snippet,
            "severity": self.severity,
        }

    @classmethod
    def from_dict(cls, d: Dict) -> "ErrorRecord":
        return cls(mnemonic=d["mnemonic"], category=d["category"],
                   message=d["message"], line=d["line"], col=d["col"],
                   snippet=d["snippet"], severity=d["severity"])


def make_record(mnemonic: str, message: str, line: int, col: int,
                snippet: str, severity: Optional[str] = None) -> ErrorRecord:
    category = CATEGORY_BY_MNEMONIC.get(mnemonic, "syntax_functional")
    if severity is None:
        severity = "functional" if mnemonic == "FIN" else "synthesis_blocking"
    return ErrorRecord(mnemonic=mnemonic, category=category, message=message,
                       line=line, col=col, snippet=snippet, severity=severity)


@dataclass(frozen=True)
class CsimResult:
    passed: bool
    detail: Optional[Dict] = None  # witness input / first mismatching output

    def to_dict(self) -> Dict:
        out: Dict = {"passed": self.passed}
        if self.detail is not None:
            out["detail"] = self.detail
        return out


@dataclass(frozen=True)
class VerificationReport:
    status: str  # clean | failed
    records: Tuple[ErrorRecord, ...]
    csim: Optional[CsimResult] = None

    @property
    def clean(self) -> bool:
        return self.status == "clean"

    def mnemonics(self) -> List[str]:
        return [r.mnemonic for r in self.records]

    def has(self, mnemonic: str) -> bool:
        return mnemonic in self.mnemonics()

    def to_dict(self) -> Dict:
        out: Dict = {"status": self.status,
                     "records": [r.to_dict() for r in self.records]}
        if self.csim is not None:
            out["csim"] = self.csim.to_dict()
        return out

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), separators=(",", ":"))

    @classmethod
    def from_dict(cls, d: Dict) -> "VerificationReport":
        csim = None
        if "csim" in d:
            csim = CsimResult(passed=d["csim"]["passed"],
                              detail=d["csim"].get("detail"))
        return cls(status=d["status"],
                   records=tuple(ErrorRecord.from_dict(r) for r in d["records"]),
                   csim=csim)


def make_report(records, csim: Optional[CsimResult] = None) -> VerificationReport:
    ordered = tuple(sorted(records, key=lambda r: (r.line, r.mnemonic, r.col)))
    failed = bool(ordered) or (csim is not None and not csim.passed)
    return VerificationReport(status="failed" if failed else "clean",
                              records=ordered, csim=csim)
