# report.py
import json
import logging
import os
from typing import Literal

from pydantic import BaseModel, Field

from settings import settings

logger = logging.getLogger(__name__)

Status = Literal["pass", "fail", "skipped"]
Kind = Literal["exact", "numeric"]


class ReportError(ValueError):
    pass


class CheckRecord(BaseModel):
    check_id: str
    status: Status
    kind: Kind
    residual: float | None = None
    tolerance: float | None = None
    witness: str | None = None
    anchor: str
    detail: str | None = None


class VerificationReport(BaseModel):
    records: list[CheckRecord] = Field(default_factory=list)

    def add(self, record: CheckRecord) -> CheckRecord:
        if record.status == "fail":
            logger.warning(f"{record.check_id}: fail ({record.witness})")
        else:
            logger.info(f"{record.check_id}: {record.status} (residual={record.residual})")
        self.records.append(record)
        return record

    def extend(self, other: "VerificationReport") -> None:
        self.records.extend(other.records)

    @property
    def ok(self) -> bool:
        return all(r.status != "fail" for r in self.records)

    def by_id(self, check_id: str) -> CheckRecord:
        for r in self.records:
            if r.check_id == check_id:
                return r
        raise KeyError(check_id)


class RunMetadata(BaseModel):
    tool: str = settings.APP_NAME
    tool_version: str = settings.APP_VERSION
    schema_version: str = settings.REPORT_SCHEMA_VERSION
    example: str
    config_hash: str
    seed: int
    samples: int
    tolerance: float
    checks: list[str]
    conventions: dict[str, object]


class ReportDocument(BaseModel):
    metadata: RunMetadata
    records: list[CheckRecord]
    summary: dict[str, int]
    # shown in the text summary only, so JSON stays byte-stable
    wall_time: float | None = Field(default=None, exclude=True)

    @property
    def ok(self) -> bool:
        return self.summary.get("fail", 0) == 0

    @classmethod
    def build(cls, metadata: RunMetadata, report: VerificationReport, wall_time: float | None = None) -> "ReportDocument":
        summary = {"pass": 0, "fail": 0, "skipped": 0}
        for r in report.records:
            summary[r.status] += 1
        return cls(metadata=metadata, records=list(report.records), summary=summary, wall_time=wall_time)


def to_json(doc: ReportDocument) -> str:
    return json.dumps(doc.model_dump(mode="json"), sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def to_text(doc: ReportDocument) -> str:
    meta = doc.metadata
    lines = [
        f"{meta.tool} {meta.tool_version}  example={meta.example}  seed={meta.seed}  "
        f"samples={meta.samples}  tol={meta.tolerance:g}",
        "",
        f"{'check':<44} {'status':<8} {'kind':<8} {'residual':<12} witness",
        "-" * 100,
    ]
    for r in doc.records:
        residual = "" if r.residual is None else f"{r.residual:.3e}"
        witness = r.witness or ""
        lines.append(f"{r.check_id:<44} {r.status:<8} {r.kind:<8} {residual:<12} {witness}")
    lines.append("-" * 100)
    s = doc.summary
    lines.append(f"pass={s['pass']} fail={s['fail']} skipped={s['skipped']}")
    if doc.wall_time is not None:
        lines.append(f"wall time: {doc.wall_time:.2f}s")
    return "\n".join(lines) + "\n"


def emit_report(doc: ReportDocument, fmt: Literal["json", "text"] = "json", path: str | None = None) -> str:
    """Render the document and write it to ``path`` (stdout when None)."""
    if fmt == "json":
        text = to_json(doc)
    elif fmt == "text":
        text = to_text(doc)
    else:
        raise ReportError(f"unknown report format {fmt!r}; expected json or text")

    if path is None:
        print(text, end="")
        return text

    directory = os.path.dirname(os.path.abspath(path))
    if not os.path.isdir(directory):
        raise ReportError(f"cannot write report to {path}: directory {directory} does not exist")
    try:
        with open(path, "w", encoding="utf-8", newline="\n") as f:
            f.write(text)
    except OSError as exc:
        raise ReportError(f"cannot write report to {path}: {exc}") from exc
    logger.info(f"Report written to {path}")
    return text
