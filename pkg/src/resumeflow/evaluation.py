"""
Two-stage automatic evaluation: align predicted entities to ground
truth one-to-one (assignment on a similarity matrix), then judge each
field with a rule chosen by the field's kind, and aggregate outcomes
into precision / recall / F1 / alignment-accuracy reports.
"""

from __future__ import annotations

import json
from collections import defaultdict
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Iterable, Mapping, Sequence

from .extract.records import ResumeRecord
from .refine import DEFAULT_REFINE_CONFIG, DateKind, RefineConfig, normalize_date
from .textnorm import normalize_text

try:
    import tomllib
except ModuleNotFoundError:  # pragma: no cover
    import tomli as tomllib


# ---------------------------------------------------------------------------
# String similarity
# ---------------------------------------------------------------------------


def levenshtein(a: str, b: str) -> int:
    """Edit distance, two-row dynamic program."""
    if a == b:
        return 0
    if len(a) < len(b):
        a, b = b, a
    if not b:
        return len(a)
    previous = list(range(len(b) + 1))
    for i, ca in enumerate(a):
        current = [i + 1]
        for j, cb in enumerate(b):
            current.append(
                min(previous[j + 1] + 1, current[j] + 1, previous[j] + (ca != cb))
            )
        previous = current
    return previous[-1]


def string_similarity(a: str, b: str) -> float:
    """Normalized similarity in [0, 1] on cleaned-up text.

    Both inputs are lowercased, stripped of punctuation, and
    whitespace-collapsed first.  Two empty strings are identical (1.0);
    exactly one empty string is a total miss (0.0).
    """
    na, nb = normalize_text(a), normalize_text(b)
    if not na and not nb:
        return 1.0
    if not na or not nb:
        return 0.0
    return 1.0 - levenshtein(na, nb) / max(len(na), len(nb))


def entity_similarity(gt_entity, pred_entity, key_fields: Sequence[str]) -> float:
    """Arithmetic mean of field similarities over the key fields."""
    if not key_fields:
        raise ValueError("entity similarity needs at least one key field")
    total = sum(
        string_similarity(getattr(gt_entity, f), getattr(pred_entity, f))
        for f in key_fields
    )
    return total / len(key_fields)


# ---------------------------------------------------------------------------
# Alignment
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SimilarityMatrix:
    """Ground truth rows by predicted columns, entries in [0, 1]."""

    values: tuple[tuple[float, ...], ...]

    def __post_init__(self) -> None:
        widths = {len(row) for row in self.values}
        if len(widths) > 1:
            raise ValueError("similarity matrix rows have unequal lengths")
        for row in self.values:
            for entry in row:
                if not 0.0 <= entry <= 1.0:
                    raise ValueError(f"similarity {entry} outside [0, 1]")

    @property
    def n_rows(self) -> int:
        return len(self.values)

    @property
    def n_cols(self) -> int:
        return len(self.values[0]) if self.values else 0


def build_similarity_matrix(
    gt_entities: Sequence, pred_entities: Sequence, key_fields: Sequence[str]
) -> SimilarityMatrix:
    return SimilarityMatrix(
        values=tuple(
            tuple(entity_similarity(g, p, key_fields) for p in pred_entities)
            for g in gt_entities
        )
    )


@dataclass(frozen=True)
class Alignment:
    """One-to-one pairing of ground-truth and predicted entity indices."""

    pairs: tuple[tuple[int, int, float], ...]
    unmatched_gt: tuple[int, ...]
    unmatched_pred: tuple[int, ...]


def _solve_assignment(cost: list[list[float]], n_rows: int, n_cols: int) -> list[int]:
    """Min-cost assignment of every row to a distinct column, n_rows <= n_cols.

    Classic O(n^2 m) shortest-augmenting-path scheme with potentials.
    Scanning is strictly ordered, so ties consistently resolve toward
    lower row and column indices.
    """
    INF = float("inf")
    u = [0.0] * (n_rows + 1)
    v = [0.0] * (n_cols + 1)
    assigned_row = [0] * (n_cols + 1)  # 1-based row assigned to each column
    path = [0] * (n_cols + 1)

    for row in range(1, n_rows + 1):
        assigned_row[0] = row
        j0 = 0
        min_to = [INF] * (n_cols + 1)
        used = [False] * (n_cols + 1)
        while True:
            used[j0] = True
            i0 = assigned_row[j0]
            delta = INF
            j1 = 0
            for j in range(1, n_cols + 1):
                if used[j]:
                    continue
                reduced = cost[i0 - 1][j - 1] - u[i0] - v[j]
                if reduced < min_to[j]:
                    min_to[j] = reduced
                    path[j] = j0
                if min_to[j] < delta:
                    delta = min_to[j]
                    j1 = j
            for j in range(n_cols + 1):
                if used[j]:
                    u[assigned_row[j]] += delta
                    v[j] -= delta
                else:
                    min_to[j] -= delta
            j0 = j1
            if assigned_row[j0] == 0:
                break
        while j0:
            j_prev = path[j0]
            assigned_row[j0] = assigned_row[j_prev]
            j0 = j_prev

    result = [-1] * n_rows
    for j in range(1, n_cols + 1):
        if assigned_row[j] != 0:
            result[assigned_row[j] - 1] = j - 1
    return result


def hungarian_align(
    matrix: SimilarityMatrix, min_similarity: float | None = None
) -> Alignment:
    """Maximize total similarity via min-cost assignment on 1 - S.

    Rectangular matrices are handled by solving along the smaller
    dimension, so |pairs| = min(M, N) when no threshold is given.  With
    ``min_similarity`` set, pairs below it are demoted to unmatched on
    both sides.
    """
    m, n = matrix.n_rows, matrix.n_cols
    if m == 0 or n == 0:
        return Alignment(
            pairs=(),
            unmatched_gt=tuple(range(m)),
            unmatched_pred=tuple(range(n)),
        )

    if m <= n:
        cost = [[1.0 - s for s in row] for row in matrix.values]
        assignment = _solve_assignment(cost, m, n)
        pairs = [(i, assignment[i]) for i in range(m)]
    else:
        cost = [[1.0 - matrix.values[i][j] for i in range(m)] for j in range(n)]
        assignment = _solve_assignment(cost, n, m)
        pairs = [(assignment[j], j) for j in range(n)]

    if min_similarity is not None:
        pairs = [(i, j) for i, j in pairs if matrix.values[i][j] >= min_similarity]

    pairs.sort()
    matched_gt = {i for i, _ in pairs}
    matched_pred = {j for _, j in pairs}
    return Alignment(
        pairs=tuple((i, j, matrix.values[i][j]) for i, j in pairs),
        unmatched_gt=tuple(i for i in range(m) if i not in matched_gt),
        unmatched_pred=tuple(j for j in range(n) if j not in matched_pred),
    )


# ---------------------------------------------------------------------------
# Field matching
# ---------------------------------------------------------------------------


class FieldKind(Enum):
    PERIOD = "period"
    NAMED_ENTITY = "named_entity"
    LONG_TEXT = "long_text"
    OTHER = "other"


DEFAULT_FIELD_KINDS: dict[str, FieldKind] = {
    "basic.name": FieldKind.OTHER,
    "basic.personal_email": FieldKind.OTHER,
    "basic.phone_number": FieldKind.OTHER,
    "basic.age": FieldKind.OTHER,
    "basic.born": FieldKind.OTHER,
    "basic.gender": FieldKind.OTHER,
    "basic.job_intention": FieldKind.OTHER,
    "basic.current_location": FieldKind.OTHER,
    "basic.place_of_origin": FieldKind.OTHER,
    "basic.desired_location": FieldKind.OTHER,
    "education.school": FieldKind.NAMED_ENTITY,
    "education.major": FieldKind.NAMED_ENTITY,
    "education.degree": FieldKind.NAMED_ENTITY,
    "education.start_date": FieldKind.PERIOD,
    "education.end_date": FieldKind.PERIOD,
    "education.location": FieldKind.OTHER,
    "work.company": FieldKind.NAMED_ENTITY,
    "work.position": FieldKind.NAMED_ENTITY,
    "work.start_date": FieldKind.PERIOD,
    "work.end_date": FieldKind.PERIOD,
    "work.location": FieldKind.OTHER,
    "work.description": FieldKind.LONG_TEXT,
}

_EDUCATION_FIELDS = ("school", "major", "degree", "start_date", "end_date", "location")
_WORK_FIELDS = ("company", "position", "start_date", "end_date", "location", "description")
_BASIC_FIELDS = (
    "name",
    "personal_email",
    "phone_number",
    "age",
    "born",
    "gender",
    "job_intention",
    "current_location",
    "place_of_origin",
    "desired_location",
)


@dataclass(frozen=True)
class EvalConfig:
    min_similarity: float | None = None
    long_text_threshold: float = 0.9
    work_key_fields: tuple[str, ...] = ("company", "position")
    education_key_fields: tuple[str, ...] = ("school", "major")
    field_kinds: Mapping[str, FieldKind] = field(
        default_factory=lambda: dict(DEFAULT_FIELD_KINDS)
    )
    dates: RefineConfig = DEFAULT_REFINE_CONFIG

    @classmethod
    def from_file(cls, path: str | Path) -> "EvalConfig":
        path = Path(path)
        if path.suffix == ".toml":
            with open(path, "rb") as handle:
                data = tomllib.load(handle)
        else:
            with open(path, "r", encoding="utf-8") as handle:
                data = json.load(handle)
        kwargs = {}
        if "min_similarity" in data:
            kwargs["min_similarity"] = (
                None if data["min_similarity"] is None else float(data["min_similarity"])
            )
        if "long_text_threshold" in data:
            kwargs["long_text_threshold"] = float(data["long_text_threshold"])
        for key in ("work_key_fields", "education_key_fields"):
            if key in data:
                kwargs[key] = tuple(data[key])
        if "field_kinds" in data:
            kinds = dict(DEFAULT_FIELD_KINDS)
            kinds.update({k: FieldKind(v) for k, v in data["field_kinds"].items()})
            kwargs["field_kinds"] = kinds
        return cls(**kwargs)


DEFAULT_EVAL_CONFIG = EvalConfig()


def _field_text(value) -> str:
    """Canonical comparable text for a field value.

    List values (desired locations) compare as their sorted normalized
    elements, so element order never matters.
    """
    if isinstance(value, (list, tuple)):
        return " ".join(sorted(normalize_text(v) for v in value))
    return value


def _is_empty(value) -> bool:
    if isinstance(value, (list, tuple)):
        return len(value) == 0
    return not str(value).strip()


def match_field(
    kind: FieldKind, gt, pred, config: EvalConfig = DEFAULT_EVAL_CONFIG
) -> bool:
    """Kind-dependent correctness rule for one aligned field pair."""
    gt_text, pred_text = _field_text(gt), _field_text(pred)
    if kind is FieldKind.PERIOD:
        a = normalize_date(gt_text, config.dates)
        b = normalize_date(pred_text, config.dates)
        if a.kind is DateKind.YEAR_MONTH and b.kind is DateKind.YEAR_MONTH:
            return (a.year, a.month) == (b.year, b.month)
        if DateKind.YEAR_ONLY in (a.kind, b.kind) and a.year is not None and b.year is not None:
            return a.year == b.year
        if a.kind is b.kind is DateKind.PRESENT:
            return True
        if a.kind is b.kind is DateKind.EMPTY:
            return True
        if a.kind is b.kind is DateKind.UNPARSED:
            return normalize_text(a.raw) == normalize_text(b.raw)
        return False
    if kind is FieldKind.NAMED_ENTITY:
        a, b = normalize_text(gt_text), normalize_text(pred_text)
        return bool(a) and bool(b) and (a in b or b in a)
    if kind is FieldKind.LONG_TEXT:
        return string_similarity(gt_text, pred_text) >= config.long_text_threshold
    return normalize_text(gt_text) == normalize_text(pred_text)


# ---------------------------------------------------------------------------
# Outcomes
# ---------------------------------------------------------------------------


class Status(Enum):
    CORRECT = "correct"
    ALIGNED_BUT_WRONG = "aligned_but_wrong"
    MISSED_GT = "missed_gt"
    SPURIOUS = "spurious"


@dataclass(frozen=True)
class FieldOutcome:
    field: str
    kind: FieldKind
    status: Status


def _kind_of(field_name: str, config: EvalConfig) -> FieldKind:
    return config.field_kinds.get(field_name, FieldKind.OTHER)


def _entity_sort_key(entity, fields: Sequence[str]) -> tuple:
    return tuple(_field_text(getattr(entity, f)) for f in fields)


def _evaluate_entity_list(
    list_name: str,
    gt_entities: Sequence,
    pred_entities: Sequence,
    fields: Sequence[str],
    key_fields: Sequence[str],
    config: EvalConfig,
) -> list[FieldOutcome]:
    # Canonical content order makes outcomes independent of input list
    # order even when the assignment has equal-total alternatives.
    gt_sorted = sorted(gt_entities, key=lambda e: _entity_sort_key(e, fields))
    pred_sorted = sorted(pred_entities, key=lambda e: _entity_sort_key(e, fields))

    outcomes: list[FieldOutcome] = []

    def emit(field_name: str, status: Status) -> None:
        qualified = f"{list_name}.{field_name}"
        outcomes.append(FieldOutcome(qualified, _kind_of(qualified, config), status))

    if gt_sorted and pred_sorted:
        matrix = build_similarity_matrix(gt_sorted, pred_sorted, key_fields)
        alignment = hungarian_align(matrix, config.min_similarity)
    else:
        alignment = Alignment(
            pairs=(),
            unmatched_gt=tuple(range(len(gt_sorted))),
            unmatched_pred=tuple(range(len(pred_sorted))),
        )

    for gt_idx, pred_idx, _ in alignment.pairs:
        gt_entity, pred_entity = gt_sorted[gt_idx], pred_sorted[pred_idx]
        for field_name in fields:
            gt_value = getattr(gt_entity, field_name)
            pred_value = getattr(pred_entity, field_name)
            if _is_empty(gt_value) and _is_empty(pred_value):
                continue
            kind = _kind_of(f"{list_name}.{field_name}", config)
            matched = match_field(kind, gt_value, pred_value, config)
            emit(field_name, Status.CORRECT if matched else Status.ALIGNED_BUT_WRONG)

    for gt_idx in alignment.unmatched_gt:
        for field_name in fields:
            if not _is_empty(getattr(gt_sorted[gt_idx], field_name)):
                emit(field_name, Status.MISSED_GT)

    for pred_idx in alignment.unmatched_pred:
        for field_name in fields:
            if not _is_empty(getattr(pred_sorted[pred_idx], field_name)):
                emit(field_name, Status.SPURIOUS)

    return outcomes


def evaluate_resume(
    gt: ResumeRecord, pred: ResumeRecord, config: EvalConfig = DEFAULT_EVAL_CONFIG
) -> list[FieldOutcome]:
    """Field outcomes for one resume.

    Basic info forms a singleton, always-aligned entity pair; education
    and work lists are aligned through the similarity matrix first.
    Fields empty on both sides do not participate at all.
    """
    outcomes: list[FieldOutcome] = []
    for field_name in _BASIC_FIELDS:
        gt_value = getattr(gt.basic, field_name)
        pred_value = getattr(pred.basic, field_name)
        if _is_empty(gt_value) and _is_empty(pred_value):
            continue
        qualified = f"basic.{field_name}"
        kind = _kind_of(qualified, config)
        matched = match_field(kind, gt_value, pred_value, config)
        outcomes.append(
            FieldOutcome(
                qualified,
                kind,
                Status.CORRECT if matched else Status.ALIGNED_BUT_WRONG,
            )
        )
    outcomes.extend(
        _evaluate_entity_list(
            "education",
            gt.education,
            pred.education,
            _EDUCATION_FIELDS,
            config.education_key_fields,
            config,
        )
    )
    outcomes.extend(
        _evaluate_entity_list(
            "work",
            gt.work,
            pred.work,
            _WORK_FIELDS,
            config.work_key_fields,
            config,
        )
    )
    return outcomes


# ---------------------------------------------------------------------------
# Aggregation
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class MetricRow:
    e_gt: int = 0
    e_pred: int = 0
    e_align: int = 0
    e_correct: int = 0
    precision: float = 0.0
    recall: float = 0.0
    f1: float = 0.0
    accuracy: float = 0.0

    @classmethod
    def from_counts(cls, e_gt: int, e_pred: int, e_align: int, e_correct: int) -> "MetricRow":
        precision = e_correct / e_pred if e_pred else 0.0
        recall = e_correct / e_gt if e_gt else 0.0
        # Harmonic mean of precision and recall, written on the raw counts:
        # 2PR/(P+R) == 2c/(p+g), which divides integers once and therefore
        # sits exactly between min(P, R) and max(P, R) in float arithmetic.
        f1 = 2 * e_correct / (e_pred + e_gt) if e_pred + e_gt else 0.0
        accuracy = e_correct / e_align if e_align else 0.0
        return cls(e_gt, e_pred, e_align, e_correct, precision, recall, f1, accuracy)

    def to_dict(self) -> dict:
        return {
            "e_gt": self.e_gt,
            "e_pred": self.e_pred,
            "e_align": self.e_align,
            "e_correct": self.e_correct,
            "precision": self.precision,
            "recall": self.recall,
            "f1": self.f1,
            "accuracy": self.accuracy,
        }


@dataclass(frozen=True)
class MacroAverages:
    """Unweighted means of the per-field metrics."""

    precision: float = 0.0
    recall: float = 0.0
    f1: float = 0.0
    accuracy: float = 0.0

    def to_dict(self) -> dict:
        return {
            "precision": self.precision,
            "recall": self.recall,
            "f1": self.f1,
            "accuracy": self.accuracy,
        }


@dataclass(frozen=True)
class MetricsReport:
    per_field: Mapping[str, MetricRow]
    per_group: Mapping[str, MetricRow]
    overall: MetricRow
    macro: MacroAverages

    def to_dict(self) -> dict:
        return {
            "per_field": {k: v.to_dict() for k, v in sorted(self.per_field.items())},
            "per_group": {k: v.to_dict() for k, v in sorted(self.per_group.items())},
            "overall": self.overall.to_dict(),
            "macro": self.macro.to_dict(),
        }


def aggregate(
    outcomes: Iterable[FieldOutcome], config: EvalConfig = DEFAULT_EVAL_CONFIG
) -> MetricsReport:
    """Fold outcomes into per-field, per-group, and overall metric rows.

    Counting follows the outcome statuses: correct and aligned-but-wrong
    fields are aligned; aligned plus spurious are predicted; aligned
    plus missed are ground truth.  The overall row is computed from the
    summed counts (so its metric identities hold); the macro block
    additionally reports unweighted means across fields.
    """
    counts: dict[str, list[int]] = defaultdict(lambda: [0, 0, 0, 0])  # gt, pred, align, correct
    kinds: dict[str, FieldKind] = {}
    for outcome in outcomes:
        c = counts[outcome.field]
        kinds[outcome.field] = outcome.kind
        if outcome.status is Status.CORRECT:
            c[0] += 1
            c[1] += 1
            c[2] += 1
            c[3] += 1
        elif outcome.status is Status.ALIGNED_BUT_WRONG:
            c[0] += 1
            c[1] += 1
            c[2] += 1
        elif outcome.status is Status.SPURIOUS:
            c[1] += 1
        else:  # MISSED_GT
            c[0] += 1

    per_field = {name: MetricRow.from_counts(*c) for name, c in counts.items()}

    group_counts: dict[str, list[int]] = defaultdict(lambda: [0, 0, 0, 0])
    total = [0, 0, 0, 0]
    for name, c in counts.items():
        g = group_counts[kinds[name].value]
        for k in range(4):
            g[k] += c[k]
            total[k] += c[k]
    per_group = {name: MetricRow.from_counts(*c) for name, c in group_counts.items()}

    overall = MetricRow.from_counts(*total)
    if per_field:
        macro = MacroAverages(
            precision=sum(r.precision for r in per_field.values()) / len(per_field),
            recall=sum(r.recall for r in per_field.values()) / len(per_field),
            f1=sum(r.f1 for r in per_field.values()) / len(per_field),
            accuracy=sum(r.accuracy for r in per_field.values()) / len(per_field),
        )
    else:
        macro = MacroAverages()
    return MetricsReport(
        per_field=per_field, per_group=per_group, overall=overall, macro=macro
    )


def evaluate_corpus(
    gt_records: Sequence[ResumeRecord],
    pred_records: Sequence[ResumeRecord],
    config: EvalConfig = DEFAULT_EVAL_CONFIG,
) -> MetricsReport:
    """Evaluate line-aligned record lists and aggregate one report."""
    if len(gt_records) != len(pred_records):
        raise ValueError(
            f"ground truth has {len(gt_records)} records, "
            f"predictions have {len(pred_records)}"
        )
    outcomes: list[FieldOutcome] = []
    for gt, pred in zip(gt_records, pred_records):
        outcomes.extend(evaluate_resume(gt, pred, config))
    return aggregate(outcomes, config)
