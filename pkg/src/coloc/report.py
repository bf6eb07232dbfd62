"""Check reports with exact witnesses, and their JSON form."""

from __future__ import annotations

import json
import re
import time
from contextlib import contextmanager
from dataclasses import dataclass, field
from typing import Sequence

from .exact import Field, Matrix, split_index

STATUSES = ("pass", "fail", "incompatible", "error")


@dataclass(frozen=True)
class Witness:
    object: str
    indices: tuple = ()
    lhs: str = ""
    rhs: str = ""

    def to_dict(self) -> dict:
        return {"object": self.object, "indices": list(self.indices), "lhs": self.lhs, "rhs": self.rhs}

    @classmethod
    def from_dict(cls, d: dict) -> "Witness":
        return cls(d["object"], tuple(d["indices"]), d["lhs"], d["rhs"])


@dataclass
class CheckReport:
    check: str
    status: str = "pass"
    witnesses: list = field(default_factory=list)
    timing_ms: int = 0
    details: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.status not in STATUSES:
            raise ValueError(f"unknown status {self.status!r}")

    @property
    def ok(self) -> bool:
        return self.status == "pass"

    def __bool__(self):
        return self.ok

    def add(self, w: Witness, status: str = "fail"):
        self.witnesses.append(w)
        if self.status == "pass":
            self.status = status

    def merge(self, other: "CheckReport", prefix: str | None = None):
        for w in other.witnesses:
            obj = f"{prefix}: {w.object}" if prefix else w.object
            self.add(Witness(obj, w.indices, w.lhs, w.rhs), other.status if other.status != "pass" else "fail")
        if other.status != "pass" and self.status == "pass":
            self.status = other.status
        return self

    def witness_objects(self) -> list[str]:
        return [w.object for w in self.witnesses]

    def to_dict(self) -> dict:
        return {
            "check": self.check,
            "status": self.status,
            "witnesses": [w.to_dict() for w in self.witnesses],
            "timing_ms": self.timing_ms,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "CheckReport":
        return cls(d["check"], d["status"], [Witness.from_dict(w) for w in d["witnesses"]], d["timing_ms"])

    def summary(self) -> str:
        head = f"{self.check}: {self.status}"
        if self.witnesses:
            head += f" ({len(self.witnesses)} witness{'es' if len(self.witnesses) != 1 else ''})"
        return head

    def render(self, limit: int = 10) -> str:
        lines = [self.summary()]
        for w in self.witnesses[:limit]:
            idx = ",".join(str(i) for i in w.indices)
            lines.append(f"  - {w.object} [{idx}]: {w.lhs}  !=  {w.rhs}" if w.rhs or w.lhs else f"  - {w.object} [{idx}]")
        if len(self.witnesses) > limit:
            lines.append(f"  ... {len(self.witnesses) - limit} more")
        for k, v in self.details.items():
            lines.append(f"  {k}: {v}")
        return "\n".join(lines)


def emit_json(report: CheckReport | Sequence[CheckReport]) -> bytes:
    if isinstance(report, CheckReport):
        payload = report.to_dict()
    else:
        payload = [r.to_dict() for r in report]
    return json.dumps(payload, ensure_ascii=False, separators=(",", ":")).encode("utf-8")


def load_json(data: bytes | str):
    payload = json.loads(data)
    if isinstance(payload, list):
        return [CheckReport.from_dict(d) for d in payload]
    return CheckReport.from_dict(payload)


@contextmanager
def timed(report: CheckReport):
    t0 = time.perf_counter()
    try:
        yield report
    finally:
        report.timing_ms = int(round((time.perf_counter() - t0) * 1000))


# -- helpers shared by all verifiers ---------------------------------------


def fmt_vector(v: Sequence, fld: Field, labels: Sequence[str] | None = None) -> str:
    """Render a vector as a linear combination of (labelled) basis vectors."""
    terms = []
    for i, x in enumerate(v):
        if not x:
            continue
        name = labels[i] if labels else f"e{i}"
        c = fld.fmt(x)
        if c == "1":
            terms.append(name)
        elif c == "-1":
            terms.append(f"-{name}")
        else:
            terms.append(f"{c} {name}")
    if not terms:
        return "0"
    return " + ".join(terms).replace("+ -", "- ")


def tensor_labels(*label_lists: Sequence[str]) -> list[str]:
    out = [""]
    for labels in label_lists:
        out = [f"{a}⊗{b}" if a else b for a in out for b in labels]
    return out


def compare_maps(
    report: CheckReport,
    name: str,
    lhs: Matrix,
    rhs: Matrix,
    dims: Sequence[int] | None = None,
    labels: Sequence[str] | None = None,
    domain_labels: Sequence[Sequence[str]] | None = None,
    limit: int = 8,
) -> bool:
    """Record a witness for each domain basis vector where two maps differ."""
    if lhs.shape != rhs.shape:
        report.add(Witness(name, (), f"shape {lhs.shape}", f"shape {rhs.shape}"))
        return False
    if lhs == rhs:
        return True
    fld = lhs.field
    dims = tuple(dims) if dims else (lhs.cols,)
    found = 0
    for j in range(lhs.cols):
        a, b = lhs.column(j), rhs.column(j)
        if a != b:
            idx = split_index(j, dims)
            if domain_labels:
                idx = tuple(domain_labels[k][i] for k, i in enumerate(idx))
            report.add(Witness(name, idx, fmt_vector(a, fld, labels), fmt_vector(b, fld, labels)))
            found += 1
            if found >= limit:
                break
    return False


_SUP = str.maketrans("-0123456789", "⁻⁰¹²³⁴⁵⁶⁷⁸⁹")


def pretty(text: str) -> str:
    """Rewrite ``x^-1*y^2`` as ``x⁻¹y²`` for display."""
    out = re.sub(r"\^(-?\d+)", lambda m: m.group(1).translate(_SUP), text)
    return re.sub(r"(?<=[\w⁰¹²³⁴⁵⁶⁷⁸⁹⁻])\*(?=[A-Za-z])", "", out)
