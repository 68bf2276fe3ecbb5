"""Check records, exact JSON encoding, and the report container.

Exact numbers never become floats: rationals are written as ``"p/q"``
strings (``"p"`` when the denominator is 1) and field elements as their
coordinate vectors at the lowest tower level that holds them.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

from .linalg import TowerMatrix
from .numfield.tower import EmbeddingHandle, FieldElement, FieldTower, SignCertificate

SCHEMA_VERSION = "1.0"

STATUSES = ("pass", "fail", "inconclusive", "by-theorem", "skipped")


def qstr(q: Fraction) -> str:
    q = Fraction(q)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def tower_json(t: FieldTower) -> dict:
    return {
        "base_min_poly": [qstr(c) for c in t.base_min_poly],
        "radicands": [[qstr(c) for c in r] for r in t.radicands],
        "root_index": t.root_index,
        "signs": list(t.signs),
        "degree": t.degree,
        "name": t.describe(),
    }


def exact(obj: Any) -> Any:
    """Convert library objects into JSON-safe exact structures."""
    if isinstance(obj, bool) or obj is None or isinstance(obj, str):
        return obj
    if isinstance(obj, int):
        return obj
    if isinstance(obj, Fraction):
        return qstr(obj)
    if isinstance(obj, FieldElement):
        e = obj.descend()
        return {"level": e.level, "coords": [qstr(c) for c in e.coords], "text": str(e)}
    if isinstance(obj, TowerMatrix):
        m = obj.descend()
        return {"level": m.field.depth,
                "rows": [[[qstr(c) for c in entry] for entry in row] for row in m.raw]}
    if isinstance(obj, FieldTower):
        return tower_json(obj)
    if isinstance(obj, EmbeddingHandle):
        return {"root_index": obj.root_index, "signs": list(obj.signs)}
    if isinstance(obj, SignCertificate):
        return {"element": exact(obj.element), "embedding": exact(obj.embedding), "sign": obj.sign,
                "witness_interval": [qstr(obj.witness_interval[0]), qstr(obj.witness_interval[1])]}
    if isinstance(obj, dict):
        return {str(k): exact(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [exact(v) for v in obj]
    if hasattr(obj, "to_json"):
        return obj.to_json()
    if isinstance(obj, float):
        raise TypeError("floats are not allowed in exact reports")
    raise TypeError(f"cannot encode {type(obj).__name__} exactly")


@dataclass
class CheckResult:
    name: str
    status: str
    witness: Any = None
    citation: str | None = None
    detail: str | None = None

    def __post_init__(self):
        if self.status not in STATUSES:
            raise ValueError(f"bad status {self.status!r}")

    @classmethod
    def of(cls, name: str, ok: bool, witness=None, detail=None) -> "CheckResult":
        return cls(name, "pass" if ok else "fail", witness, None, detail)

    @property
    def passed(self) -> bool:
        return self.status == "pass"

    def to_json(self) -> dict:
        out: dict = {"name": self.name, "status": self.status}
        if self.witness is not None:
            out["witness"] = exact(self.witness)
        if self.citation is not None:
            out["citation"] = self.citation
        if self.detail is not None:
            out["detail"] = self.detail
        return out

    @classmethod
    def from_json(cls, d: dict) -> "CheckResult":
        return cls(d["name"], d["status"], d.get("witness"), d.get("citation"), d.get("detail"))


@dataclass
class CertificateReport:
    """Top-level report: ``{schema_version, input, checks, summary}`` plus sections."""

    mode: str
    input: Any
    checks: list[CheckResult] = field(default_factory=list)
    sections: dict = field(default_factory=dict)
    schema_version: str = SCHEMA_VERSION

    def add(self, check: CheckResult) -> CheckResult:
        self.checks.append(check)
        return check

    def extend(self, checks) -> None:
        for c in checks:
            self.add(c)

    @property
    def failed(self) -> list[CheckResult]:
        return [c for c in self.checks if c.status == "fail"]

    @property
    def ok(self) -> bool:
        return not self.failed

    def summary(self) -> dict:
        counts = {s: 0 for s in STATUSES}
        for c in self.checks:
            counts[c.status] += 1
        return {"overall": "pass" if self.ok else "fail", "counts": counts,
                "failed": [c.name for c in self.failed]}

    def to_json(self) -> dict:
        return {
            "schema_version": self.schema_version,
            "mode": self.mode,
            "input": exact(self.input),
            "checks": [c.to_json() for c in self.checks],
            "sections": exact(self.sections),
            "summary": self.summary(),
        }

    @classmethod
    def from_json(cls, d: dict) -> "CertificateReport":
        rep = cls(d["mode"], d["input"], [CheckResult.from_json(c) for c in d["checks"]],
                  d.get("sections", {}), d["schema_version"])
        return rep


def dumps(data: dict) -> bytes:
    """Canonical JSON bytes: sorted keys, fixed indentation, trailing newline."""
    return (json.dumps(data, sort_keys=True, indent=2, ensure_ascii=False) + "\n").encode("utf-8")


def serialize_report(report) -> bytes:
    return dumps(report.to_json())


def parse_report(data: bytes) -> CertificateReport:
    return CertificateReport.from_json(json.loads(data.decode("utf-8")))
