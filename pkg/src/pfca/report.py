"""Run reports: stage timings, JSON payloads with 1-based indices, and the benchmark CSV."""

from __future__ import annotations

import csv
import json
from dataclasses import asdict, dataclass, field
from pathlib import Path

from .context import Concept
from .engine import PrivacyConcept
from .enums import Direction
from .errors import InvalidParameter, ParseError, ReportIOError

CSV_COLUMNS = (
    "dataset", "m", "n", "density", "algo", "backend", "workers", "concepts",
    "read_s", "encrypt_s", "process_s", "extract_s", "total_s",
)
ALGORITHMS = ("tem", "tia", "pfca-f", "pfca-g")
TIMING_TOLERANCE = 0.05


@dataclass
class StageTimings:
    read_s: float = 0.0
    encrypt_s: float = 0.0
    process_s: float = 0.0
    extract_s: float = 0.0
    total_s: float = 0.0

    @property
    def stage_sum(self) -> float:
        return self.read_s + self.encrypt_s + self.process_s + self.extract_s

    def consistent(self, tolerance: float = TIMING_TOLERANCE) -> bool:
        return abs(self.stage_sum - self.total_s) <= tolerance * self.total_s

    @classmethod
    def from_marks(cls, start: float, read: float, encrypt: float, process: float, end: float) -> "StageTimings":
        """Stages from five monotone clock marks, so they sum to the total up to rounding."""
        return cls(read - start, encrypt - read, process - encrypt, end - process, end - start)


@dataclass
class RunReport:
    dataset: str
    m: int
    n: int
    density: float
    algo: str
    backend: str
    workers: int
    concept_count: int
    timings: StageTimings = field(default_factory=StageTimings)
    concepts: list[Concept] | None = None
    privacy_concepts: list[PrivacyConcept] | None = None

    def __post_init__(self):
        if self.algo not in ALGORITHMS:
            raise InvalidParameter(f"unknown algorithm {self.algo!r}")
        for payload in (self.concepts, self.privacy_concepts):
            if payload is not None and len(payload) != self.concept_count:
                raise InvalidParameter(
                    f"concept_count={self.concept_count} but the payload holds {len(payload)} records"
                )

    def csv_row(self) -> list[str]:
        t = self.timings
        return [
            self.dataset, str(self.m), str(self.n), repr(float(self.density)), self.algo, self.backend,
            str(self.workers), str(self.concept_count),
            *(f"{v:.6f}" for v in (t.read_s, t.encrypt_s, t.process_s, t.extract_s, t.total_s)),
        ]


def _one_based(indices) -> list[int]:
    return [i + 1 for i in sorted(indices)]


def _zero_based(indices: list[int]) -> frozenset[int]:
    return frozenset(i - 1 for i in indices)


def concept_record(c: Concept) -> dict:
    return {"extent": _one_based(c.extent), "intent": _one_based(c.intent)}


def privacy_record(pc: PrivacyConcept) -> dict:
    if pc.kind is Direction.OBJECT:
        return {"extent": _one_based(pc.extent), "intent_cardinality": pc.intent_cardinality}
    return {"extent_cardinality": pc.extent_cardinality, "intent": _one_based(pc.intent)}


def _privacy_from_record(rec: dict) -> PrivacyConcept:
    if "intent_cardinality" in rec:
        return PrivacyConcept.f_induced(_zero_based(rec["extent"]), rec["intent_cardinality"])
    return PrivacyConcept.g_induced(rec["extent_cardinality"], _zero_based(rec["intent"]))


def report_to_dict(report: RunReport) -> dict:
    out = {
        "dataset": report.dataset,
        "m": report.m,
        "n": report.n,
        "density": report.density,
        "algo": report.algo,
        "backend": report.backend,
        "workers": report.workers,
        "concept_count": report.concept_count,
        "timings": asdict(report.timings),
    }
    if report.privacy_concepts is not None:
        out["privacy_concepts"] = [privacy_record(pc) for pc in report.privacy_concepts]
    if report.concepts is not None:
        out["concepts"] = [concept_record(c) for c in report.concepts]
    return out


def report_from_dict(data: dict) -> RunReport:
    concepts = data.get("concepts")
    pcs = data.get("privacy_concepts")
    return RunReport(
        data["dataset"], data["m"], data["n"], data["density"], data["algo"], data["backend"],
        data["workers"], data["concept_count"], StageTimings(**data["timings"]),
        None if concepts is None else [Concept(_zero_based(r["extent"]), _zero_based(r["intent"])) for r in concepts],
        None if pcs is None else [_privacy_from_record(r) for r in pcs],
    )


def write_report(report: RunReport | list[RunReport], path: str | Path, fmt: str = "json") -> None:
    """Write one report as JSON, or any number of reports as CSV rows under a header."""
    reports = report if isinstance(report, list) else [report]
    try:
        with open(path, "w", newline="") as fh:
            if fmt == "json":
                if len(reports) != 1:
                    raise InvalidParameter("JSON output holds exactly one report")
                json.dump(report_to_dict(reports[0]), fh, indent=2)
                fh.write("\n")
            elif fmt == "csv":
                writer = csv.writer(fh, lineterminator="\n")
                writer.writerow(CSV_COLUMNS)
                writer.writerows(r.csv_row() for r in reports)
            else:
                raise InvalidParameter(f"unknown report format {fmt!r}")
    except OSError as exc:
        raise ReportIOError(f"cannot write report to {path}: {exc.strerror or exc}") from exc


def read_report(path: str | Path, fmt: str = "json") -> RunReport | list[RunReport]:
    """Inverse of :func:`write_report`; CSV rows come back without payloads."""
    with open(path, newline="") as fh:
        if fmt == "json":
            return report_from_dict(json.load(fh))
        rows = list(csv.reader(fh))
    if not rows or tuple(rows[0]) != CSV_COLUMNS:
        raise ParseError("missing or wrong CSV header", 1, str(path))
    out = []
    for lineno, row in enumerate(rows[1:], start=2):
        if len(row) != len(CSV_COLUMNS):
            raise ParseError(f"expected {len(CSV_COLUMNS)} fields, found {len(row)}", lineno, str(path))
        ds, m, n, dens, algo, backend, workers, count, *times = row
        out.append(
            RunReport(ds, int(m), int(n), float(dens), algo, backend, int(workers), int(count),
                      StageTimings(*map(float, times)))
        )
    return out
