"""Quantum code summaries and their serialized forms."""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Any


class Certainty(str, Enum):
    EXACT = "exact"
    UPPER_BOUND = "upper_bound"


def yield_gamma(n: int, k: int, d: int) -> float:
    """Yield parameter ``log(n/k) / log(d)``."""
    if k < 1 or d < 2:
        raise ValueError(f"yield parameter undefined for k={k}, d={d}")
    return math.log(n / k) / math.log(d)


CSV_HEADER = ("p", "n", "k", "d", "certainty", "gamma", "A_d")


@dataclass(frozen=True)
class CodeReport:
    p: int
    n: int
    k: int
    d: int
    certainty: Certainty = Certainty.EXACT
    A_d: int | None = None
    provenance: dict[str, Any] = field(default_factory=dict)

    @property
    def gamma(self) -> float | None:
        if self.k < 1 or self.d < 2:
            return None
        return yield_gamma(self.n, self.k, self.d)

    @property
    def params(self) -> tuple[int, int, int]:
        return (self.n, self.k, self.d)

    def label(self) -> str:
        return f"[[{self.n}, {self.k}, {self.d}]]_{self.p}"

    def to_dict(self) -> dict[str, Any]:
        return {
            "p": self.p,
            "n": str(self.n),
            "k": str(self.k),
            "d": str(self.d),
            "certainty": Certainty(self.certainty).value,
            "gamma": self.gamma,
            "A_d": None if self.A_d is None else str(self.A_d),
            "provenance": self.provenance,
        }

    @classmethod
    def from_dict(cls, d: dict[str, Any]) -> "CodeReport":
        return cls(
            p=int(d["p"]),
            n=int(d["n"]),
            k=int(d["k"]),
            d=int(d["d"]),
            certainty=Certainty(d["certainty"]),
            A_d=None if d.get("A_d") is None else int(d["A_d"]),
            provenance=dict(d.get("provenance") or {}),
        )

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=False)

    @classmethod
    def from_json(cls, text: str) -> "CodeReport":
        return cls.from_dict(json.loads(text))


def emit_report(report: CodeReport, fmt: str = "json") -> str:
    """Render a report as ``json``, a ``csv`` row (with header) or ``human`` text."""
    if fmt == "json":
        return report.to_json()
    if fmt in ("csv", "csv-row"):
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(CSV_HEADER)
        g = report.gamma
        writer.writerow([
            report.p, report.n, report.k, report.d, Certainty(report.certainty).value,
            "" if g is None else f"{g:.6f}", "" if report.A_d is None else report.A_d,
        ])
        return buf.getvalue()
    if fmt == "human":
        g = report.gamma
        bound = "" if report.certainty == Certainty.EXACT else " (d is an upper bound)"
        parts = [f"{report.label()}{bound}", f"gamma = {'n/a' if g is None else f'{g:.4f}'}"]
        if report.A_d is not None:
            parts.append(f"A_d = {report.A_d}")
        return "  ".join(parts)
    raise ValueError(f"unknown format {fmt!r}")
