"""Command line interface: one subcommand per pipeline stage plus e2e."""

from __future__ import annotations

import json
import sys
from pathlib import Path

import click

from .doc_model import IndexedDocument
from .evaluation import DEFAULT_EVAL_CONFIG, EvalConfig, evaluate_corpus
from .extract import (
    DecodeConfig,
    HttpBackend,
    MockBackend,
    read_record_json,
    read_records_jsonl,
    run_extraction,
    write_record_json,
)
from .ingest import (
    fuse_content,
    read_pages_json,
    read_primitives_jsonl,
    write_primitives_jsonl,
)
from .layout import GeometricCutDetector, HttpSegmentDetector, linearize
from .pipeline import PipelineConfig, run_e2e
from .refine import DEFAULT_REFINE_CONFIG, RefineConfig, refine, write_audit_json
from .report import render_report_figures, write_report_csv, write_report_json
from .synth import TEMPLATES, LayoutKind, generate, write_fixture

try:
    import tomllib
except ModuleNotFoundError:  # pragma: no cover
    import tomli as tomllib


@click.group()
def cli() -> None:
    """Layout-aware resume extraction and evaluation pipeline."""


@cli.group("ingest")
def ingest_group() -> None:
    """Content intake commands."""


@ingest_group.command("fuse")
@click.option("--metadata", "metadata_path", required=True, type=click.Path(exists=True))
@click.option("--ocr", "ocr_path", type=click.Path(exists=True), default=None)
@click.option("--out", "out_path", required=True, type=click.Path())
@click.option("--overlap", default=0.5, show_default=True, help="OCR drop threshold.")
def ingest_fuse(metadata_path, ocr_path, out_path, overlap) -> None:
    """Fuse metadata and OCR primitive streams into one JSONL file."""
    metadata = read_primitives_jsonl(metadata_path)
    ocr = read_primitives_jsonl(ocr_path) if ocr_path else []
    fused = fuse_content(metadata, ocr, overlap)
    write_primitives_jsonl(out_path, fused)
    click.echo(f"fused {len(metadata)} metadata + {len(ocr)} ocr -> {len(fused)} primitives")


@cli.group("layout")
def layout_group() -> None:
    """Reading-order commands."""


@layout_group.command("linearize")
@click.option("--in", "in_path", required=True, type=click.Path(exists=True))
@click.option("--pages", "pages_path", required=True, type=click.Path(exists=True))
@click.option("--out", "out_path", required=True, type=click.Path())
@click.option(
    "--detector",
    type=click.Choice(["geometric", "external"]),
    default="geometric",
    show_default=True,
)
@click.option("--detector-url", default="", help="Endpoint for the external detector.")
def layout_linearize(in_path, pages_path, out_path, detector, detector_url) -> None:
    """Linearize fused primitives into an indexed document JSON."""
    primitives = read_primitives_jsonl(in_path)
    pages = read_pages_json(pages_path)
    if detector == "external":
        if not detector_url:
            raise click.UsageError("--detector external requires --detector-url")
        chosen = HttpSegmentDetector(url=detector_url)
    else:
        chosen = GeometricCutDetector()
    doc = linearize(pages, primitives, chosen)
    with open(out_path, "w", encoding="utf-8") as handle:
        json.dump(doc.to_dict(), handle, ensure_ascii=False, indent=2)
    click.echo(f"linearized {len(primitives)} primitives into {len(doc)} lines")


@cli.command("extract")
@click.option("--in", "in_path", required=True, type=click.Path(exists=True))
@click.option("--backend", type=click.Choice(["http", "mock"]), default="http", show_default=True)
@click.option("--endpoint", default="", help="Chat-completions endpoint URL.")
@click.option("--model", default="", help="Model name passed to the backend.")
@click.option("--temp", "temperature", default=0.5, show_default=True)
@click.option("--rep-penalty", "repetition_penalty", default=1.01, show_default=True)
@click.option("--max-tokens", default=2048, show_default=True)
@click.option("--timeout", default=30.0, show_default=True)
@click.option("--retries", default=2, show_default=True)
@click.option("--suppress-reasoning", is_flag=True, default=False)
@click.option("--mock-table", type=click.Path(exists=True), default=None)
@click.option("--out", "out_path", required=True, type=click.Path())
def extract_cmd(
    in_path, backend, endpoint, model, temperature, repetition_penalty,
    max_tokens, timeout, retries, suppress_reasoning, mock_table, out_path,
) -> None:
    """Run the three extraction sub-tasks against an indexed document."""
    with open(in_path, "r", encoding="utf-8") as handle:
        doc = IndexedDocument.from_dict(json.load(handle))
    config = DecodeConfig(
        temperature=temperature,
        repetition_penalty=repetition_penalty,
        max_tokens=max_tokens,
        model=model,
        endpoint=endpoint,
        timeout=timeout,
        retries=retries,
        suppress_reasoning=suppress_reasoning,
    )
    if backend == "mock":
        if not mock_table:
            raise click.UsageError("--backend mock requires --mock-table")
        chosen = MockBackend.from_file(mock_table)
    else:
        if not endpoint:
            raise click.UsageError("--backend http requires --endpoint")
        chosen = HttpBackend(endpoint=endpoint)
    outcome = run_extraction(doc, chosen, config)
    write_record_json(out_path, outcome.record)
    for failure in outcome.failures:
        click.echo(f"task {failure.task.value} degraded: {failure.kind}", err=True)
    for warning in outcome.warnings:
        click.echo(f"warning: {warning}", err=True)
    click.echo(f"wrote {out_path}")


@cli.command("refine")
@click.option("--in", "in_path", required=True, type=click.Path(exists=True))
@click.option("--doc", "doc_path", required=True, type=click.Path(exists=True))
@click.option("--config", "config_path", type=click.Path(exists=True), default=None)
@click.option("--out", "out_path", required=True, type=click.Path())
@click.option("--audit", "audit_path", type=click.Path(), default=None)
def refine_cmd(in_path, doc_path, config_path, out_path, audit_path) -> None:
    """Apply the four-stage refinement to an extracted record."""
    record = read_record_json(in_path)
    with open(doc_path, "r", encoding="utf-8") as handle:
        doc = IndexedDocument.from_dict(json.load(handle))
    config = RefineConfig.from_file(config_path) if config_path else DEFAULT_REFINE_CONFIG
    refined, events = refine(record, doc, config)
    write_record_json(out_path, refined)
    if audit_path:
        write_audit_json(audit_path, events)
    click.echo(f"refined record written to {out_path} ({len(events)} audit events)")


@cli.command("evaluate")
@click.option("--gt", "gt_path", required=True, type=click.Path(exists=True))
@click.option("--pred", "pred_path", required=True, type=click.Path(exists=True))
@click.option("--config", "config_path", type=click.Path(exists=True), default=None)
@click.option("--report", "report_path", required=True, type=click.Path())
@click.option("--csv", "csv_path", type=click.Path(), default=None)
@click.option(
    "--figures",
    "figures_dir",
    type=click.Path(),
    default=None,
    help="Directory for rendered metric figures.",
)
def evaluate_cmd(gt_path, pred_path, config_path, report_path, csv_path, figures_dir) -> None:
    """Score line-aligned prediction and ground-truth JSONL files."""
    config = EvalConfig.from_file(config_path) if config_path else DEFAULT_EVAL_CONFIG
    gt_records = read_records_jsonl(gt_path)
    pred_records = read_records_jsonl(pred_path)
    report = evaluate_corpus(gt_records, pred_records, config)
    write_report_json(report_path, report)
    if csv_path:
        write_report_csv(csv_path, report)
    if figures_dir:
        for path in render_report_figures(figures_dir, report):
            click.echo(f"figure: {path}")
    overall = report.overall
    click.echo(
        f"overall: P={overall.precision:.4f} R={overall.recall:.4f} "
        f"F1={overall.f1:.4f} Acc={overall.accuracy:.4f}"
    )


@cli.command("synth")
@click.option("--count", default=10, show_default=True)
@click.option("--seed", default=0, show_default=True)
@click.option(
    "--layout",
    "layout_kind",
    type=click.Choice(["linear", "two-column", "sidebar"]),
    default="linear",
    show_default=True,
)
@click.option("--out", "out_dir", required=True, type=click.Path())
def synth_cmd(count, seed, layout_kind, out_dir) -> None:
    """Generate deterministic resume fixtures for testing and demos."""
    kind = LayoutKind(layout_kind)
    template = TEMPLATES[kind]()
    out_dir = Path(out_dir)
    for i in range(count):
        fixture = generate(seed + i, template)
        write_fixture(out_dir / f"fixture_{i:04d}", fixture)
    click.echo(f"wrote {count} {layout_kind} fixtures under {out_dir}")


def _load_pipeline_toml(path: str | None) -> dict:
    if not path:
        return {}
    with open(path, "rb") as handle:
        return tomllib.load(handle)


@cli.command("e2e")
@click.option("--in", "input_dir", required=True, type=click.Path(exists=True))
@click.option("--out", "output_dir", required=True, type=click.Path())
@click.option(
    "--backend",
    type=click.Choice(["oracle", "mock", "http"]),
    default="oracle",
    show_default=True,
)
@click.option("--mock-table", type=click.Path(exists=True), default=None)
@click.option("--endpoint", default="", help="Chat-completions endpoint for http backend.")
@click.option("--model", default="")
@click.option("--workers", default=1, show_default=True)
@click.option("--no-layout", is_flag=True, default=False, help="Naive sort, no segment ordering.")
@click.option("--evaluate", "do_evaluate", is_flag=True, default=False)
@click.option("--no-figures", is_flag=True, default=False)
@click.option("--config", "config_path", type=click.Path(exists=True), default=None)
def e2e_cmd(
    input_dir, output_dir, backend, mock_table, endpoint, model, workers,
    no_layout, do_evaluate, no_figures, config_path,
) -> None:
    """Run the whole pipeline over a corpus directory."""
    toml_data = _load_pipeline_toml(config_path)
    decode_data = toml_data.get("decode", {})
    decode = DecodeConfig(
        temperature=float(decode_data.get("temperature", 0.5)),
        repetition_penalty=float(decode_data.get("repetition_penalty", 1.01)),
        max_tokens=int(decode_data.get("max_tokens", 2048)),
        model=model or decode_data.get("model", ""),
        endpoint=endpoint or decode_data.get("endpoint", ""),
        timeout=float(decode_data.get("timeout", 30.0)),
        retries=int(decode_data.get("retries", 2)),
        suppress_reasoning=bool(decode_data.get("suppress_reasoning", False)),
    )
    refine_data = toml_data.get("refine", {})
    refine_config = DEFAULT_REFINE_CONFIG
    if refine_data:
        kwargs = {}
        for key in ("org_suffixes", "present_tokens", "date_patterns"):
            if key in refine_data:
                kwargs[key] = tuple(refine_data[key])
        if "dedup_overlap" in refine_data:
            kwargs["dedup_overlap"] = float(refine_data["dedup_overlap"])
        refine_config = RefineConfig(**kwargs)
    mock_table = mock_table or toml_data.get("mock_table")
    config = PipelineConfig(
        input_dir=Path(input_dir),
        output_dir=Path(output_dir),
        backend=toml_data.get("backend", backend) if backend == "oracle" else backend,
        mock_table=Path(mock_table) if mock_table else None,
        decode=decode,
        detector=toml_data.get("detector", "geometric"),
        detector_url=toml_data.get("detector_url", ""),
        no_layout=no_layout,
        refine_config=refine_config,
        worker_count=int(toml_data.get("worker_count", workers)),
        evaluate=do_evaluate or bool(toml_data.get("evaluate", False)),
        figures=not no_figures,
    )
    manifest, report = run_e2e(config)
    ok = len(manifest.entries) - manifest.failed
    click.echo(f"processed {len(manifest.entries)} resumes, {ok} ok, {manifest.failed} failed")
    if report is not None:
        overall = report.overall
        click.echo(
            f"overall: P={overall.precision:.4f} R={overall.recall:.4f} "
            f"F1={overall.f1:.4f} Acc={overall.accuracy:.4f}"
        )
    if manifest.failed:
        sys.exit(1)


def main() -> None:
    cli(auto_envvar_prefix="RF")


if __name__ == "__main__":
    main()
