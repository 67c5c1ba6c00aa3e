"""Acceptance suite: every criterion prints one PASS/FAIL line.

Run with ``pytest tests/test_acceptance.py -v -s`` to see the lines.
Criteria that need the same golden corpus share one module-scoped run.
"""

import itertools
import random
import time

import pytest

from resumeflow.doc_model import slice_lines
from resumeflow.evaluation import (
    SimilarityMatrix,
    aggregate,
    evaluate_resume,
    hungarian_align,
)
from resumeflow.extract import DecodeConfig, OracleBackend, run_extraction
from resumeflow.ingest import fuse_content
from resumeflow.layout import linearize
from resumeflow.pipeline import PipelineConfig, run_e2e
from resumeflow.refine import refine
from resumeflow.synth import (
    DropEntity,
    HallucinateEntity,
    PerturbDates,
    ShuffleEntities,
    corrupt,
    generate,
    linear_template,
    sidebar_template,
    two_column_template,
    write_fixture,
)

TEMPLATE_CYCLE = (linear_template, two_column_template, sidebar_template)

REPORTS = []  # every metrics report produced anywhere in this run


def announce(number, description, ok):
    print(f"ACCEPTANCE {number:02d} {'PASS' if ok else 'FAIL'}: {description}")
    assert ok, f"criterion {number} failed: {description}"


@pytest.fixture(scope="module")
def golden():
    """100 mixed fixtures through fuse, linearize, extract, refine, evaluate."""
    fixtures = [
        generate(seed, TEMPLATE_CYCLE[seed % 3]()) for seed in range(100)
    ]
    started = time.perf_counter()
    docs, records, outcomes = [], [], []
    for fixture in fixtures:
        fused = fuse_content(fixture.primitives, [])
        doc = linearize([fixture.page], fused)
        outcome = run_extraction(doc, OracleBackend(fixture.truth), DecodeConfig())
        refined, _ = refine(outcome.record, doc)
        docs.append(doc)
        records.append(refined)
        outcomes.extend(evaluate_resume(fixture.truth, refined))
    report = aggregate(outcomes)
    elapsed = time.perf_counter() - started
    REPORTS.append(report)
    return {
        "fixtures": fixtures,
        "docs": docs,
        "records": records,
        "report": report,
        "elapsed": elapsed,
    }


def brute_force_best(values):
    m, n = len(values), len(values[0])
    best = 0.0
    if m <= n:
        for cols in itertools.permutations(range(n), m):
            best = max(best, sum(values[i][cols[i]] for i in range(m)))
    else:
        for rows in itertools.permutations(range(m), n):
            best = max(best, sum(values[rows[j]][j] for j in range(n)))
    return best


def test_criterion_1_alignment_oracle_equivalence():
    # Entries are multiples of 1/64, so float sums are exact and equality
    # against the exhaustive optimum is meaningful with zero tolerance.
    rng = random.Random(20240601)
    started = time.perf_counter()
    for _ in range(1000):
        m, n = rng.randint(1, 6), rng.randint(1, 6)
        values = [[rng.randint(0, 64) / 64 for _ in range(n)] for _ in range(m)]
        alignment = hungarian_align(SimilarityMatrix(tuple(tuple(r) for r in values)))
        total = sum(s for _, _, s in alignment.pairs)
        assert total == brute_force_best(values)
        assert len(alignment.pairs) == min(m, n)
    elapsed = time.perf_counter() - started
    announce(
        1,
        f"1000 random matrices (M,N <= 6) match exhaustive optimum exactly "
        f"in {elapsed:.2f}s (< 5s)",
        elapsed < 5.0,
    )


def test_criterion_2_order_mismatch_robustness(golden):
    ok = True
    for i, fixture in enumerate(golden["fixtures"]):
        base = aggregate(evaluate_resume(fixture.truth, golden["records"][i]))
        shuffled_record, _ = corrupt(fixture, ShuffleEntities(), seed=i)
        shuffled = aggregate(evaluate_resume(fixture.truth, shuffled_record))
        REPORTS.append(shuffled)
        if shuffled.to_dict() != base.to_dict():
            ok = False
            break
    announce(2, "shuffled prediction lists change no metric (exact equality, 100 fixtures)", ok)


def test_criterion_3_pointer_fidelity(golden):
    checked = 0
    ok = True
    for doc, record in zip(golden["docs"], golden["records"]):
        for entry in record.work:
            if entry.description_range is None:
                ok = False
                break
            checked += 1
            if entry.description != slice_lines(doc, entry.description_range):
                ok = False
                break
    announce(
        3,
        f"all {checked} resolved descriptions byte-identical to their source slices",
        ok and checked > 0,
    )


def test_criterion_4_end_to_end_golden_run(golden):
    report = golden["report"]
    exact = (
        report.overall.precision == 1.0
        and report.overall.recall == 1.0
        and report.overall.f1 == 1.0
        and report.overall.accuracy == 1.0
        and report.macro.f1 == 1.0
    )
    truth_match = all(
        record == fixture.truth
        for record, fixture in zip(golden["records"], golden["fixtures"])
    )
    elapsed = golden["elapsed"]
    announce(
        4,
        f"100-fixture golden run: P=R=F1=Acc=1.0 exactly in {elapsed:.2f}s (< 30s)",
        exact and truth_match and elapsed < 30.0,
    )


def expected_counts(base_row, field, manifest):
    removed = manifest.removed_fields.count(field)
    spurious = manifest.spurious_fields.count(field)
    wrong = manifest.wrong_fields.count(field)
    return (
        base_row.e_gt,
        base_row.e_pred - removed + spurious,
        base_row.e_align - removed,
        base_row.e_correct - removed - wrong,
    )


def test_criterion_5_closed_form_degradation():
    ok = True
    specs = (DropEntity(1), HallucinateEntity(), PerturbDates(2))
    for seed, spec in itertools.product((3, 41, 77), specs):
        fixture = generate(seed, linear_template(work_entries=(4, 4)))
        base = aggregate(evaluate_resume(fixture.truth, fixture.truth))
        record, manifest = corrupt(fixture, spec, seed=seed + 1)
        measured = aggregate(evaluate_resume(fixture.truth, record))
        REPORTS.append(measured)
        fields = set(base.per_field) | set(measured.per_field)
        for field in fields:
            base_row = base.per_field[field]
            want = expected_counts(base_row, field, manifest)
            got_row = measured.per_field[field]
            got = (got_row.e_gt, got_row.e_pred, got_row.e_align, got_row.e_correct)
            if got != want:
                ok = False
        if isinstance(spec, DropEntity):
            # Recall drops by exactly the dropped/ground-truth count ratio.
            for field in set(manifest.removed_fields):
                got_row = measured.per_field[field]
                base_row = base.per_field[field]
                removed = manifest.removed_fields.count(field)
                if got_row.recall != (base_row.e_correct - removed) / base_row.e_gt:
                    ok = False
        if isinstance(spec, HallucinateEntity):
            if measured.overall.accuracy != base.overall.accuracy:
                ok = False
            if not measured.overall.precision < base.overall.precision:
                ok = False
    announce(
        5,
        "drop/hallucinate/perturb deltas equal manifest predictions exactly",
        ok,
    )


def test_criterion_6_layout_invariants():
    ok = True
    rng = random.Random(99)
    for seed, factory in itertools.product((2, 15, 58), TEMPLATE_CYCLE):
        fixture = generate(seed, factory())
        base = linearize([fixture.page], fixture.primitives)
        prims = list(fixture.primitives)
        for _ in range(200):
            rng.shuffle(prims)
            if linearize([fixture.page], prims) != base:
                ok = False
                break
    inversions = 0
    for seed in range(0, 30):
        fixture = generate(seed, two_column_template())
        doc = linearize([fixture.page], fixture.primitives)
        got = [line.text for line in doc.lines]
        if got != list(fixture.expected_lines):
            inversions += 1
    announce(
        6,
        "linearize invariant over 200 permutations per fixture; "
        f"two-column fixtures ordered with {inversions} inversions",
        ok and inversions == 0,
    )


def test_criterion_7_ablation_harness(tmp_path):
    corpus = tmp_path / "sidebar_corpus"
    for i in range(10):
        write_fixture(corpus / f"fixture_{i:04d}", generate(500 + i, sidebar_template()))
    _, full_report = run_e2e(
        PipelineConfig(input_dir=corpus, output_dir=tmp_path / "full",
                       evaluate=True, figures=False)
    )
    _, naive_report = run_e2e(
        PipelineConfig(input_dir=corpus, output_dir=tmp_path / "naive",
                       no_layout=True, evaluate=True, figures=False)
    )
    REPORTS.extend([full_report, naive_report])
    full_acc = full_report.per_group["long_text"].accuracy
    naive_acc = naive_report.per_group["long_text"].accuracy
    announce(
        7,
        f"no-layout long-text accuracy {naive_acc:.3f} strictly below full "
        f"pipeline {full_acc:.3f} on sidebar fixtures",
        naive_acc < full_acc,
    )


def test_criterion_8_metric_identities():
    assert REPORTS, "earlier criteria must have produced reports"
    ok = True
    for report in REPORTS:
        rows = (
            list(report.per_field.values())
            + list(report.per_group.values())
            + [report.overall]
        )
        for row in rows:
            if row.precision != (row.e_correct / row.e_pred if row.e_pred else 0.0):
                ok = False
            if row.recall != (row.e_correct / row.e_gt if row.e_gt else 0.0):
                ok = False
            if row.accuracy != (row.e_correct / row.e_align if row.e_align else 0.0):
                ok = False
            low, high = sorted((row.precision, row.recall))
            if not (low <= row.f1 <= high):
                ok = False
    announce(
        8,
        f"P, R, Acc identities and min(P,R) <= F1 <= max(P,R) hold on all "
        f"{len(REPORTS)} reports",
        ok,
    )


def test_criterion_9_refine_idempotence(golden):
    ok = True
    specs = (DropEntity(1), ShuffleEntities(), PerturbDates(1), HallucinateEntity())
    for i, fixture in enumerate(golden["fixtures"][:30]):
        doc = golden["docs"][i]
        once, _ = refine(golden["records"][i], doc)
        twice, _ = refine(once, doc)
        if twice != once:
            ok = False
        for spec in specs:
            corrupted, _ = corrupt(fixture, spec, seed=i)
            first, _ = refine(corrupted, doc)
            second, _ = refine(first, doc)
            if second != first:
                ok = False
    announce(9, "refine is idempotent on fixtures and corruption outputs", ok)


def test_criterion_10_decode_defaults():
    config = DecodeConfig()
    ok = config.temperature == 0.5 and config.repetition_penalty == 1.01
    announce(
        10,
        f"default decode config: temperature={config.temperature}, "
        f"repetition_penalty={config.repetition_penalty}",
        ok,
    )
