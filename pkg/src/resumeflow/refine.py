"""
Post-extraction cleanup: grounded re-extraction, normalization,
span-based de-duplication, and source text verification.

Each stage is a pure function from record to record; ``refine`` chains
them and returns an audit log of every mutation and drop so corrections
stay traceable.  The whole pipeline is idempotent: refining an already
refined record is a no-op.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, replace
from enum import Enum
from pathlib import Path

from .doc_model import IndexedDocument, LineRange
from .extract.records import ResumeRecord
from .extract.runner import resolve_pointers
from .textnorm import normalize_text

try:
    import tomllib  # Python >= 3.11
except ModuleNotFoundError:  # pragma: no cover
    import tomli as tomllib


DEFAULT_DATE_PATTERNS = (
    r"(?P<year>\d{4})-(?P<month>\d{1,2})",
    r"(?P<year>\d{4})\.(?P<month>\d{1,2})",
    r"(?P<year>\d{4})/(?P<month>\d{1,2})",
    r"(?P<year>\d{4})年(?P<month>\d{1,2})月",
    r"(?P<year>\d{4})年?",
)

DEFAULT_PRESENT_TOKENS = ("present", "now", "至今", "current")

DEFAULT_ORG_SUFFIXES = (
    "co., ltd.",
    "co.,ltd.",
    "co., ltd",
    "co. ltd",
    "co.",
    "ltd.",
    "ltd",
    "inc.",
    "inc",
    "corp.",
    "corp",
    "llc",
    "gmbh",
    "股份有限公司",
    "有限公司",
    "集团",
)


@dataclass(frozen=True)
class RefineConfig:
    org_suffixes: tuple[str, ...] = DEFAULT_ORG_SUFFIXES
    present_tokens: tuple[str, ...] = DEFAULT_PRESENT_TOKENS
    dedup_overlap: float = 0.5
    date_patterns: tuple[str, ...] = DEFAULT_DATE_PATTERNS

    def __post_init__(self) -> None:
        if not self.org_suffixes or not self.present_tokens or not self.date_patterns:
            raise ValueError("refine config lists must be non-empty")
        if not 0.0 <= self.dedup_overlap <= 1.0:
            raise ValueError(f"dedup_overlap must be in [0, 1], got {self.dedup_overlap}")

    @classmethod
    def from_file(cls, path: str | Path) -> "RefineConfig":
        path = Path(path)
        if path.suffix == ".toml":
            with open(path, "rb") as handle:
                data = tomllib.load(handle)
        else:
            with open(path, "r", encoding="utf-8") as handle:
                data = json.load(handle)
        kwargs = {}
        for key in ("org_suffixes", "present_tokens", "date_patterns"):
            if key in data:
                kwargs[key] = tuple(data[key])
        if "dedup_overlap" in data:
            kwargs["dedup_overlap"] = float(data["dedup_overlap"])
        return cls(**kwargs)


DEFAULT_REFINE_CONFIG = RefineConfig()


class DateKind(Enum):
    YEAR_MONTH = "year_month"
    YEAR_ONLY = "year_only"
    PRESENT = "present"
    EMPTY = "empty"
    UNPARSED = "unparsed"


@dataclass(frozen=True)
class NormalizedDate:
    kind: DateKind
    year: int | None = None
    month: int | None = None
    raw: str = ""

    def canonical(self) -> str:
        """String form that re-normalizes to the same value."""
        if self.kind is DateKind.YEAR_MONTH:
            return f"{self.year:04d}-{self.month:02d}"
        if self.kind is DateKind.YEAR_ONLY:
            return f"{self.year:04d}"
        if self.kind is DateKind.PRESENT:
            return "present"
        if self.kind is DateKind.EMPTY:
            return ""
        return self.raw


def normalize_date(raw: str, config: RefineConfig = DEFAULT_REFINE_CONFIG) -> NormalizedDate:
    """Total date normalizer; unparseable input is preserved, not rejected.

    Patterns are tried in configured order against the trimmed input;
    a year must land in 1900..2100 and a month in 1..12 for a pattern to
    count, otherwise later patterns get their chance.
    """
    stripped = raw.strip()
    if not stripped:
        return NormalizedDate(DateKind.EMPTY)
    if stripped.lower() in {t.lower() for t in config.present_tokens}:
        return NormalizedDate(DateKind.PRESENT)
    for pattern in config.date_patterns:
        match = re.fullmatch(pattern, stripped)
        if not match:
            continue
        year = int(match.group("year"))
        month_text = match.groupdict().get("month")
        if not 1900 <= year <= 2100:
            continue
        if month_text is None:
            return NormalizedDate(DateKind.YEAR_ONLY, year=year)
        month = int(month_text)
        if not 1 <= month <= 12:
            continue
        return NormalizedDate(DateKind.YEAR_MONTH, year=year, month=month)
    return NormalizedDate(DateKind.UNPARSED, raw=raw)


def _strip_one_suffix(name: str, suffixes: tuple[str, ...]) -> str | None:
    lowered = name.lower()
    for suffix in sorted(suffixes, key=len, reverse=True):
        if not lowered.endswith(suffix.lower()):
            continue
        boundary = len(name) - len(suffix)
        # ASCII suffixes must start a word; CJK suffixes attach directly.
        if suffix[0].isascii() and boundary > 0 and name[boundary - 1] not in " ,，;；、(":
            continue
        if boundary == 0:
            continue
        return name[:boundary].rstrip(" ,，;；、")
    return None


def normalize_org(raw: str, config: RefineConfig = DEFAULT_REFINE_CONFIG) -> str:
    """Trim, collapse whitespace, strip legal-form suffixes to fixpoint."""
    name = " ".join(raw.split())
    while True:
        stripped = _strip_one_suffix(name, config.org_suffixes)
        if stripped is None or stripped == name:
            return name
        name = stripped


@dataclass(frozen=True)
class AuditEvent:
    stage: str
    target: str
    action: str
    before: str = ""
    after: str = ""

    def to_dict(self) -> dict:
        return {
            "stage": self.stage,
            "target": self.target,
            "action": self.action,
            "before": self.before,
            "after": self.after,
        }


def _range_overlap_ratio(a: LineRange, b: LineRange) -> float:
    intersection = min(a.end, b.end) - max(a.start, b.start) + 1
    if intersection <= 0:
        return 0.0
    return intersection / min(len(a), len(b))


def deduplicate(
    record: ResumeRecord, config: RefineConfig = DEFAULT_REFINE_CONFIG
) -> tuple[ResumeRecord, list[AuditEvent]]:
    """Drop entities whose source spans overlap an earlier entity's span.

    Overlap ratio is intersection over the smaller range, so full
    containment always counts as a duplicate.  The first entity in
    document order wins.  Entities without a resolved range are never
    dropped here.
    """
    spans: list[tuple[int, int, tuple[str, int], LineRange]] = []
    for list_name, entries in (("work", record.work), ("education", record.education)):
        for idx, entry in enumerate(entries):
            rng = getattr(entry, "description_range", None)
            if rng is not None:
                spans.append((rng.start, rng.end, (list_name, idx), rng))
    spans.sort()

    kept: list[LineRange] = []
    dropped_keys: set[tuple[str, int]] = set()
    for _, _, key, rng in spans:
        if any(_range_overlap_ratio(rng, other) > config.dedup_overlap for other in kept):
            dropped_keys.add(key)
        else:
            kept.append(rng)

    events: list[AuditEvent] = []
    new_work = []
    for idx, entry in enumerate(record.work):
        if ("work", idx) in dropped_keys:
            rng = entry.description_range
            events.append(
                AuditEvent(
                    stage="deduplicate",
                    target=f"work[{idx}]",
                    action="dropped duplicate span",
                    before=f"[{rng.start}, {rng.end}]",
                )
            )
        else:
            new_work.append(entry)
    return replace(record, work=tuple(new_work)), events


_EXEMPT_BASIC_FIELDS = {"age", "born"}  # legitimately derivable from each other

_BASIC_TEXT_FIELDS = (
    "name",
    "personal_email",
    "phone_number",
    "age",
    "born",
    "gender",
    "job_intention",
    "current_location",
    "place_of_origin",
)


def verify_source(
    record: ResumeRecord, doc: IndexedDocument
) -> tuple[ResumeRecord, list[AuditEvent]]:
    """Prune entities and blank basic fields that the document can't back.

    A work entry survives when its normalized company or position occurs
    in the normalized document text; an education entry when its school
    does.  Basic info fields are blanked individually instead of
    dropped, except the derivable ``age`` and ``born``.
    """
    doc_text = normalize_text(" ".join(line.text for line in doc.lines))

    def found(value: str) -> bool:
        normalized = normalize_text(value)
        return bool(normalized) and normalized in doc_text

    events: list[AuditEvent] = []

    new_work = []
    for idx, entry in enumerate(record.work):
        if found(entry.company) or found(entry.position):
            new_work.append(entry)
        else:
            events.append(
                AuditEvent(
                    stage="verify_source",
                    target=f"work[{idx}]",
                    action="dropped unverifiable entity",
                    before=entry.company or entry.position,
                )
            )

    new_education = []
    for idx, entry in enumerate(record.education):
        if found(entry.school):
            new_education.append(entry)
        else:
            events.append(
                AuditEvent(
                    stage="verify_source",
                    target=f"education[{idx}]",
                    action="dropped unverifiable entity",
                    before=entry.school,
                )
            )

    basic = record.basic
    for field_name in _BASIC_TEXT_FIELDS:
        if field_name in _EXEMPT_BASIC_FIELDS:
            continue
        value = getattr(basic, field_name)
        if value and not found(value):
            events.append(
                AuditEvent(
                    stage="verify_source",
                    target=f"basic.{field_name}",
                    action="blanked unverifiable field",
                    before=value,
                )
            )
            basic = replace(basic, **{field_name: ""})
    surviving_locations = tuple(v for v in basic.desired_location if found(v))
    if surviving_locations != basic.desired_location:
        events.append(
            AuditEvent(
                stage="verify_source",
                target="basic.desired_location",
                action="removed unverifiable entries",
                before=", ".join(basic.desired_location),
                after=", ".join(surviving_locations),
            )
        )
        basic = replace(basic, desired_location=surviving_locations)

    return (
        replace(record, basic=basic, work=tuple(new_work), education=tuple(new_education)),
        events,
    )


def _normalize_fields(
    record: ResumeRecord, config: RefineConfig
) -> tuple[ResumeRecord, list[AuditEvent]]:
    events: list[AuditEvent] = []

    def norm_date(value: str, target: str) -> str:
        canonical = normalize_date(value, config).canonical()
        if canonical != value:
            events.append(AuditEvent("normalize", target, "date", value, canonical))
        return canonical

    def norm_org(value: str, target: str) -> str:
        cleaned = normalize_org(value, config)
        if cleaned != value:
            events.append(AuditEvent("normalize", target, "organization", value, cleaned))
        return cleaned

    new_work = tuple(
        replace(
            entry,
            company=norm_org(entry.company, f"work[{i}].company"),
            start_date=norm_date(entry.start_date, f"work[{i}].start_date"),
            end_date=norm_date(entry.end_date, f"work[{i}].end_date"),
        )
        for i, entry in enumerate(record.work)
    )
    new_education = tuple(
        replace(
            entry,
            school=norm_org(entry.school, f"education[{i}].school"),
            start_date=norm_date(entry.start_date, f"education[{i}].start_date"),
            end_date=norm_date(entry.end_date, f"education[{i}].end_date"),
        )
        for i, entry in enumerate(record.education)
    )
    basic = replace(record.basic, born=norm_date(record.basic.born, "basic.born"))
    return replace(record, basic=basic, work=new_work, education=new_education), events


def refine(
    record: ResumeRecord,
    doc: IndexedDocument,
    config: RefineConfig = DEFAULT_REFINE_CONFIG,
) -> tuple[ResumeRecord, list[AuditEvent]]:
    """Run the four refinement stages in order and log every change."""
    events: list[AuditEvent] = []

    before = {i: e.description for i, e in enumerate(record.work)}
    record, warnings = resolve_pointers(record, doc)
    for i, entry in enumerate(record.work):
        if before[i] != entry.description:
            events.append(
                AuditEvent(
                    stage="reextract",
                    target=f"work[{i}].description",
                    action="grounded re-extraction",
                    before=before[i],
                    after=entry.description,
                )
            )
    events.extend(
        AuditEvent(stage="reextract", target="pointer", action=w) for w in warnings
    )

    record, stage_events = _normalize_fields(record, config)
    events.extend(stage_events)

    record, stage_events = deduplicate(record, config)
    events.extend(stage_events)

    record, stage_events = verify_source(record, doc)
    events.extend(stage_events)

    return record, events


def write_audit_json(path: str | Path, events: list[AuditEvent]) -> None:
    with open(path, "w", encoding="utf-8") as handle:
        json.dump([e.to_dict() for e in events], handle, ensure_ascii=False, indent=2)
