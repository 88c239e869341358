"""
JSON and CSV forms of reports. Integers travel as decimal strings so no
reader loses precision on large discriminants.
"""
from __future__ import annotations

import csv
import io
import json
from fractions import Fraction

import serpy

from constants import Assumption, BoundSource, VerdictStatus
from cubesum import CubeSumVerdict
from curves import Point
from report import AnalysisReport
from selmer import SelmerBounds


def _int_or_none(value: int | None) -> str | None:
    return None if value is None else str(value)


class BoundsSerializer(serpy.Serializer):
    lower = serpy.StrField()
    upper = serpy.MethodField()
    lower_source = serpy.MethodField()
    upper_source = serpy.MethodField()
    assumptions = serpy.MethodField()

    def get_upper(self, obj: SelmerBounds) -> str | None:
        return _int_or_none(obj.upper)

    def get_lower_source(self, obj: SelmerBounds) -> list[str]:
        return [s.value for s in obj.lower_source]

    def get_upper_source(self, obj: SelmerBounds) -> list[str]:
        return [s.value for s in obj.upper_source]

    def get_assumptions(self, obj: SelmerBounds) -> list[str]:
        return [s.value for s in obj.assumptions]


class PointSerializer(serpy.Serializer):
    x = serpy.MethodField()
    y = serpy.MethodField()

    def get_x(self, obj: Point) -> str | None:
        return None if obj.is_infinity else str(obj.x)

    def get_y(self, obj: Point) -> str | None:
        return None if obj.is_infinity else str(obj.y)


class VerdictSerializer(serpy.Serializer):
    D = serpy.StrField()
    status = serpy.MethodField()
    selmer_dim = serpy.StrField()
    source = serpy.StrField()
    rank = serpy.MethodField()
    hypotheses = serpy.MethodField()
    certificate = serpy.MethodField()
    certificate_curve = serpy.Field(required=False)

    def get_status(self, obj: CubeSumVerdict) -> str:
        return obj.status.value

    def get_rank(self, obj: CubeSumVerdict) -> str | None:
        return _int_or_none(obj.rank)

    def get_hypotheses(self, obj: CubeSumVerdict) -> list[str]:
        return [h.value for h in obj.hypotheses]

    def get_certificate(self, obj: CubeSumVerdict) -> dict | None:
        return None if obj.certificate is None else PointSerializer(obj.certificate).data


class ReportSerializer(serpy.Serializer):
    kind = serpy.StrField()
    inputs = serpy.MethodField()
    local_sets = serpy.Field()
    class_ranks = serpy.MethodField()
    bounds = serpy.MethodField()
    exact = serpy.MethodField()
    verdict = serpy.MethodField()
    assumptions = serpy.MethodField()
    timings = serpy.MethodField()

    def get_inputs(self, obj: AnalysisReport) -> dict[str, str]:
        return {k: str(v) for k, v in obj.inputs.items()}

    def get_class_ranks(self, obj: AnalysisReport) -> dict[str, str | None]:
        return {k: _int_or_none(v) for k, v in obj.class_ranks.items()}

    def get_bounds(self, obj: AnalysisReport) -> dict[str, dict]:
        return {k: BoundsSerializer(v).data for k, v in obj.bounds.items()}

    def get_exact(self, obj: AnalysisReport) -> dict[str, str]:
        return {k: str(v) for k, v in obj.exact.items()}

    def get_verdict(self, obj: AnalysisReport) -> dict | None:
        return None if obj.verdict is None else VerdictSerializer(obj.verdict).data

    def get_assumptions(self, obj: AnalysisReport) -> list[str]:
        return [a.value for a in obj.assumptions]

    def get_timings(self, obj: AnalysisReport) -> dict[str, str]:
        return {k: repr(v) for k, v in obj.timings.items()}


def report_to_json(report: AnalysisReport, indent: int | None = 2) -> str:
    return json.dumps(ReportSerializer(report).data, indent=indent, ensure_ascii=False)


def _optional_int(value: str | None) -> int | None:
    return None if value is None else int(value)


def _bounds_from(obj: dict) -> SelmerBounds:
    return SelmerBounds(
        int(obj["lower"]), _optional_int(obj["upper"]),
        [BoundSource(s) for s in obj["lower_source"]],
        [BoundSource(s) for s in obj["upper_source"]],
        [Assumption(s) for s in obj["assumptions"]],
    )


def _point_from(obj: dict | None) -> Point | None:
    if obj is None:
        return None
    if obj["x"] is None:
        return Point()
    return Point(Fraction(obj["x"]), Fraction(obj["y"]))


def _verdict_from(obj: dict | None) -> CubeSumVerdict | None:
    if obj is None:
        return None
    return CubeSumVerdict(
        int(obj["D"]), VerdictStatus(obj["status"]), int(obj["selmer_dim"]), obj["source"],
        rank=_optional_int(obj["rank"]),
        hypotheses=[Assumption(h) for h in obj["hypotheses"]],
        certificate=_point_from(obj["certificate"]),
        certificate_curve=obj.get("certificate_curve"),
    )


def report_from_json(text: str) -> AnalysisReport:
    """
    :raises ValueError: for malformed JSON or unknown tags.
    :raises KeyError: for a missing field.
    """
    obj = json.loads(text)
    return AnalysisReport(
        kind=obj["kind"],
        inputs={k: int(v) for k, v in obj["inputs"].items()},
        local_sets=obj["local_sets"],
        class_ranks={k: _optional_int(v) for k, v in obj["class_ranks"].items()},
        bounds={k: _bounds_from(v) for k, v in obj["bounds"].items()},
        exact={k: int(v) for k, v in obj["exact"].items()},
        verdict=_verdict_from(obj["verdict"]),
        assumptions=[Assumption(a) for a in obj["assumptions"]],
        timings={k: float(v) for k, v in obj["timings"].items()},
    )


def rows_to_csv(rows: list[dict[str, str]], columns: list[str]) -> str:
    """Header and one line per row; an `error` column is added when any row failed."""
    if any("error" in row for row in rows):
        columns = columns + ["error"]
    out = io.StringIO()
    writer = csv.DictWriter(out, fieldnames=columns, restval="", lineterminator="\n")
    writer.writeheader()
    writer.writerows(rows)
    return out.getvalue()


def report_to_csv(report: AnalysisReport) -> str:
    """Flat `key,value` listing of a single report."""
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(["key", "value"])
    for name, value in report.inputs.items():
        writer.writerow([name, value])
    for name, primes in report.local_sets.items():
        writer.writerow([name, " ".join(primes) or "∅"])
    for name, value in {**report.class_ranks, **report.exact}.items():
        writer.writerow([name, "" if value is None else value])
    for name, bounds in report.bounds.items():
        writer.writerow([f"{name}.lower", bounds.lower])
        writer.writerow([f"{name}.upper", "" if bounds.upper is None else bounds.upper])
    if report.verdict is not None:
        writer.writerow(["status", report.verdict.status.value])
        writer.writerow(["certificate", "" if report.verdict.certificate is None else report.verdict.certificate])
    writer.writerow(["assumptions", "; ".join(a.value for a in report.assumptions)])
    return out.getvalue()
