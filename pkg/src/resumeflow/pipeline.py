"""
Batch orchestration: fuse, linearize, extract, refine for a corpus of
resumes, with per-resume isolation, stage timings, and an optional
evaluation pass at the end.

Input layout: one subdirectory per resume under ``input_dir`` holding
``fused.jsonl`` (or ``metadata.jsonl`` plus optional ``ocr.jsonl``),
optionally ``pages.json``, and ``truth.json`` when ground truth exists.
Outputs mirror that layout under ``output_dir``.
"""

from __future__ import annotations

import hashlib
import json
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

from .doc_model import TextPrimitive
from .errors import ResumeFlowError
from .evaluation import DEFAULT_EVAL_CONFIG, EvalConfig, MetricsReport, aggregate, evaluate_resume
from .extract import (
    DecodeConfig,
    HttpBackend,
    MockBackend,
    OracleBackend,
    ResumeRecord,
    read_record_json,
    run_extraction,
    write_record_json,
    write_records_jsonl,
)
from .ingest import (
    PageGeometry,
    fuse_content,
    read_pages_json,
    read_primitives_jsonl,
)
from .layout import GeometricCutDetector, HttpSegmentDetector, WholePageDetector, linearize
from .refine import DEFAULT_REFINE_CONFIG, RefineConfig, refine, write_audit_json
from .report import render_report_figures, write_report_csv, write_report_json
from .synth import PAGE_HEIGHT, PAGE_WIDTH


@dataclass(frozen=True)
class PipelineConfig:
    input_dir: Path
    output_dir: Path
    backend: str = "oracle"  # oracle | mock | http
    mock_table: Path | None = None
    decode: DecodeConfig = DecodeConfig()
    detector: str = "geometric"  # geometric | external
    detector_url: str = ""
    no_layout: bool = False
    overlap_threshold: float = 0.5
    refine_config: RefineConfig = DEFAULT_REFINE_CONFIG
    eval_config: EvalConfig = DEFAULT_EVAL_CONFIG
    worker_count: int = 1
    evaluate: bool = False
    figures: bool = True

    def __post_init__(self) -> None:
        if self.worker_count < 1:
            raise ValueError(f"worker_count must be >= 1, got {self.worker_count}")
        if self.backend not in ("oracle", "mock", "http"):
            raise ValueError(f"unknown backend {self.backend!r}")
        if self.backend == "mock" and self.mock_table is None:
            raise ValueError("mock backend needs a mock table file")

    def fingerprint(self) -> str:
        payload = {
            "backend": self.backend,
            "detector": self.detector,
            "detector_url": self.detector_url,
            "no_layout": self.no_layout,
            "overlap_threshold": self.overlap_threshold,
            "worker_count": self.worker_count,
            "evaluate": self.evaluate,
            "decode": {
                "temperature": self.decode.temperature,
                "repetition_penalty": self.decode.repetition_penalty,
                "max_tokens": self.decode.max_tokens,
                "model": self.decode.model,
                "endpoint": self.decode.endpoint,
                "timeout": self.decode.timeout,
                "retries": self.decode.retries,
                "suppress_reasoning": self.decode.suppress_reasoning,
            },
            "refine": {
                "dedup_overlap": self.refine_config.dedup_overlap,
                "org_suffixes": list(self.refine_config.org_suffixes),
                "present_tokens": list(self.refine_config.present_tokens),
                "date_patterns": list(self.refine_config.date_patterns),
            },
        }
        canonical = json.dumps(payload, sort_keys=True, ensure_ascii=False)
        return hashlib.sha256(canonical.encode("utf-8")).hexdigest()


@dataclass(frozen=True)
class ManifestEntry:
    name: str
    status: str  # "ok" | "failed"
    reason: str = ""
    timings_ms: dict = field(default_factory=dict)
    task_failures: tuple[str, ...] = ()

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "status": self.status,
            "reason": self.reason,
            "timings_ms": self.timings_ms,
            "task_failures": list(self.task_failures),
        }


@dataclass(frozen=True)
class RunManifest:
    entries: tuple[ManifestEntry, ...]
    config_hash: str

    @property
    def failed(self) -> int:
        return sum(1 for e in self.entries if e.status != "ok")

    def to_dict(self) -> dict:
        return {
            "config_hash": self.config_hash,
            "total": len(self.entries),
            "failed": self.failed,
            "entries": [e.to_dict() for e in self.entries],
        }


def _derive_pages(primitives: list[TextPrimitive]) -> list[PageGeometry]:
    """Fallback page geometry when no pages.json is shipped."""
    pages: dict[int, tuple[float, float]] = {}
    for prim in primitives:
        w, h = pages.get(prim.page, (PAGE_WIDTH, PAGE_HEIGHT))
        pages[prim.page] = (
            max(w, prim.bbox.x_max + 20.0),
            max(h, prim.bbox.y_max + 20.0),
        )
    if not pages:
        return [PageGeometry(0, PAGE_WIDTH, PAGE_HEIGHT)]
    return [PageGeometry(p, w, h) for p, (w, h) in sorted(pages.items())]


def discover_resume_dirs(input_dir: Path) -> list[Path]:
    dirs = []
    for child in sorted(Path(input_dir).iterdir()):
        if child.is_dir() and (
            (child / "fused.jsonl").exists() or (child / "metadata.jsonl").exists()
        ):
            dirs.append(child)
    return dirs


def _build_detector(config: PipelineConfig):
    if config.no_layout:
        return WholePageDetector()
    if config.detector == "external":
        return HttpSegmentDetector(url=config.detector_url, timeout=config.decode.timeout)
    return GeometricCutDetector()


def run_e2e(config: PipelineConfig) -> tuple[RunManifest, MetricsReport | None]:
    """Process every resume directory; one bad resume never aborts the batch."""
    resume_dirs = discover_resume_dirs(config.input_dir)
    output_dir = Path(config.output_dir)
    output_dir.mkdir(parents=True, exist_ok=True)

    detector = _build_detector(config)
    shared_backend = None
    if config.backend == "mock":
        shared_backend = MockBackend.from_file(config.mock_table)
    elif config.backend == "http":
        shared_backend = HttpBackend(endpoint=config.decode.endpoint)

    def process(resume_dir: Path):
        name = resume_dir.name
        timings: dict[str, float] = {}
        out_dir = output_dir / name
        out_dir.mkdir(parents=True, exist_ok=True)
        truth: ResumeRecord | None = None
        truth_path = resume_dir / "truth.json"
        if truth_path.exists():
            truth = read_record_json(truth_path)
        try:
            started = time.perf_counter()
            if (resume_dir / "metadata.jsonl").exists():
                metadata = read_primitives_jsonl(resume_dir / "metadata.jsonl")
                ocr_path = resume_dir / "ocr.jsonl"
                ocr = read_primitives_jsonl(ocr_path) if ocr_path.exists() else []
            else:
                metadata = read_primitives_jsonl(resume_dir / "fused.jsonl")
                ocr = []
            fused = fuse_content(metadata, ocr, config.overlap_threshold)
            timings["fuse"] = (time.perf_counter() - started) * 1000.0

            started = time.perf_counter()
            pages_path = resume_dir / "pages.json"
            pages = read_pages_json(pages_path) if pages_path.exists() else _derive_pages(fused)
            doc = linearize(pages, fused, detector)
            with open(out_dir / "indexed.json", "w", encoding="utf-8") as handle:
                json.dump(doc.to_dict(), handle, ensure_ascii=False)
            timings["linearize"] = (time.perf_counter() - started) * 1000.0

            started = time.perf_counter()
            if config.backend == "oracle":
                if truth is None:
                    raise ResumeFlowError("oracle backend needs truth.json")
                backend = OracleBackend(truth)
            else:
                backend = shared_backend
            outcome = run_extraction(doc, backend, config.decode)
            timings["extract"] = (time.perf_counter() - started) * 1000.0

            started = time.perf_counter()
            record, audit = refine(outcome.record, doc, config.refine_config)
            timings["refine"] = (time.perf_counter() - started) * 1000.0

            write_record_json(out_dir / "record.json", record)
            write_audit_json(out_dir / "audit.json", audit)
            entry = ManifestEntry(
                name=name,
                status="ok",
                timings_ms=timings,
                task_failures=tuple(
                    f"{f.task.value}: {f.kind}" for f in outcome.failures
                ),
            )
            return entry, record, truth
        except Exception as exc:
            entry = ManifestEntry(
                name=name, status="failed", reason=str(exc), timings_ms=timings
            )
            return entry, None, truth

    if config.worker_count == 1:
        results = [process(d) for d in resume_dirs]
    else:
        with ThreadPoolExecutor(max_workers=config.worker_count) as pool:
            results = list(pool.map(process, resume_dirs))

    manifest = RunManifest(
        entries=tuple(entry for entry, _, _ in results),
        config_hash=config.fingerprint(),
    )
    with open(output_dir / "manifest.json", "w", encoding="utf-8") as handle:
        json.dump(manifest.to_dict(), handle, ensure_ascii=False, indent=2)

    predictions = [(record, truth) for _, record, truth in results if record is not None]
    write_records_jsonl(output_dir / "predictions.jsonl", [r for r, _ in predictions])

    report = None
    if config.evaluate:
        pairs = [(t, r) for r, t in predictions if t is not None]
        outcomes = []
        for truth, record in pairs:
            outcomes.extend(evaluate_resume(truth, record, config.eval_config))
        report = aggregate(outcomes, config.eval_config)
        write_records_jsonl(output_dir / "truths.jsonl", [t for t, _ in pairs])
        write_report_json(output_dir / "report.json", report)
        write_report_csv(output_dir / "report.csv", report)
        if config.figures:
            render_report_figures(output_dir / "figures", report)

    return manifest, report
