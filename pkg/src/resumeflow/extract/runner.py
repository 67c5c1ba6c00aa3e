"""Dispatch the three task prompts, parse answers, resolve pointers."""

from __future__ import annotations

import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace

from ..doc_model import IndexedDocument, LineRange, slice_lines
from ..errors import BackendUnavailable, MalformedJson, NoJsonFound, SchemaMismatch
from .backends import CompletionBackend, DecodeConfig
from .prompts import ExtractionTask, TASK_TOP_KEYS, build_prompt
from .records import (
    BasicInfo,
    ResumeRecord,
    basic_info_from_dict,
    education_entry_from_dict,
    work_entry_from_dict,
)


def extract_json_block(raw: str) -> str:
    """Substring from the first ``{`` to the last ``}``, verified as JSON.

    Models are prompted, not grammar-constrained, so answers may carry
    chatter around the object; this lightweight recovery mirrors what
    the prompts promise.
    """
    start = raw.find("{")
    end = raw.rfind("}")
    if start == -1 or end == -1 or end < start:
        raise NoJsonFound("no '{...}' block in completion text")
    block = raw[start : end + 1]
    try:
        json.loads(block)
    except json.JSONDecodeError as exc:
        raise MalformedJson(f"brace block does not parse as JSON: {exc}") from exc
    return block


def parse_task_output(task: ExtractionTask, json_text: str):
    """Map one task's JSON answer onto typed partial records.

    Missing keys become empty strings or lists, unknown keys are
    ignored, and a work ``description`` is accepted either as a
    two-integer pointer range or as a plain string fallback.
    """
    try:
        data = json.loads(json_text)
    except json.JSONDecodeError as exc:
        raise MalformedJson(f"task output is not valid JSON: {exc}") from exc
    if not isinstance(data, dict):
        raise SchemaMismatch(f"expected a JSON object, got {type(data).__name__}")
    key = TASK_TOP_KEYS[task]
    if key not in data:
        raise SchemaMismatch(f"missing top-level key {key!r}")
    value = data[key]
    if task is ExtractionTask.BASIC_INFO:
        if not isinstance(value, dict):
            raise SchemaMismatch(f"{key!r} must be an object")
        return basic_info_from_dict(value)
    if not isinstance(value, list):
        raise SchemaMismatch(f"{key!r} must be an array")
    if task is ExtractionTask.EDUCATION:
        return tuple(education_entry_from_dict(e) for e in value if isinstance(e, dict))
    return tuple(work_entry_from_dict(w) for w in value if isinstance(w, dict))


def resolve_pointers(
    record: ResumeRecord, doc: IndexedDocument
) -> tuple[ResumeRecord, list[str]]:
    """Replace every pointer range with the verbatim source slice.

    Out-of-bounds ranges are clamped to the document and reported in the
    returned warning list; plain string descriptions pass through
    unchanged.
    """
    warnings: list[str] = []
    resolved = []
    for idx, entry in enumerate(record.work):
        pointer = entry.description_range
        if pointer is None:
            resolved.append(entry)
            continue
        n = len(doc.lines)
        if n == 0:
            warnings.append(
                f"work[{idx}]: range [{pointer.start}, {pointer.end}] "
                "dropped, document is empty"
            )
            resolved.append(replace(entry, description="", description_range=None))
            continue
        start = min(pointer.start, n - 1)
        end = min(pointer.end, n - 1)
        if (start, end) != (pointer.start, pointer.end):
            warnings.append(
                f"work[{idx}]: range [{pointer.start}, {pointer.end}] "
                f"clamped to [{start}, {end}]"
            )
        clamped = LineRange(start, end)
        resolved.append(
            replace(entry, description=slice_lines(doc, clamped), description_range=clamped)
        )
    return replace(record, work=tuple(resolved)), warnings


@dataclass(frozen=True)
class TaskFailure:
    task: ExtractionTask
    kind: str  # "transport" | "parse"
    detail: str


@dataclass(frozen=True)
class ExtractionOutcome:
    record: ResumeRecord
    failures: tuple[TaskFailure, ...] = ()
    warnings: tuple[str, ...] = ()


def run_extraction(
    doc: IndexedDocument,
    backend: CompletionBackend,
    config: DecodeConfig | None = None,
) -> ExtractionOutcome:
    """Run the three sub-tasks concurrently and assemble one record.

    Each task retries its own prompt up to ``config.retries`` times on
    either transport or parse failure, then degrades to an empty partial
    with the failure recorded.  BackendUnavailable is raised only when
    every task died at the transport level.
    """
    config = config or DecodeConfig()
    tasks = list(ExtractionTask)

    def run_one(task: ExtractionTask):
        prompt = build_prompt(task, doc, config.suppress_reasoning)
        failure = None
        for _ in range(config.retries + 1):
            try:
                raw = backend.complete(prompt, config)
            except Exception as exc:
                failure = TaskFailure(task, "transport", str(exc))
                continue
            try:
                return parse_task_output(task, extract_json_block(raw)), None
            except (NoJsonFound, MalformedJson, SchemaMismatch) as exc:
                failure = TaskFailure(task, "parse", str(exc))
        return None, failure

    with ThreadPoolExecutor(max_workers=len(tasks)) as pool:
        results = list(pool.map(run_one, tasks))

    failures = tuple(failure for _, failure in results if failure is not None)
    if len(failures) == len(tasks) and all(f.kind == "transport" for f in failures):
        raise BackendUnavailable(
            "; ".join(f"{f.task.value}: {f.detail}" for f in failures)
        )

    partials = {task: partial for task, (partial, _) in zip(tasks, results)}
    merged = ResumeRecord(
        basic=partials[ExtractionTask.BASIC_INFO] or BasicInfo(),
        education=partials[ExtractionTask.EDUCATION] or (),
        work=partials[ExtractionTask.WORK_EXPERIENCE] or (),
    )
    record, warnings = resolve_pointers(merged, doc)
    return ExtractionOutcome(record=record, failures=failures, warnings=tuple(warnings))
