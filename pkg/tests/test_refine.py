import pytest
from hypothesis import given, strategies as st

from resumeflow.doc_model import LineRange
from resumeflow.extract import BasicInfo, EducationEntry, ResumeRecord, WorkEntry
from resumeflow.refine import (
    DEFAULT_REFINE_CONFIG,
    DateKind,
    RefineConfig,
    deduplicate,
    normalize_date,
    normalize_org,
    refine,
    verify_source,
)

from conftest import make_doc


def ym(raw):
    return normalize_date(raw)


def test_normalize_date_dash():
    date = ym("1996-11")
    assert (date.kind, date.year, date.month) == (DateKind.YEAR_MONTH, 1996, 11)


def test_normalize_date_dot():
    date = ym("2012.09")
    assert (date.kind, date.year, date.month) == (DateKind.YEAR_MONTH, 2012, 9)


def test_normalize_date_slash_and_cjk():
    assert ym("2012/07").month == 7
    date = ym("2015年3月")
    assert (date.year, date.month) == (2015, 3)


def test_normalize_date_year_only():
    date = ym("2019")
    assert (date.kind, date.year, date.month) == (DateKind.YEAR_ONLY, 2019, None)
    assert ym("2019年").kind is DateKind.YEAR_ONLY


def test_normalize_date_empty_and_present():
    assert ym("").kind is DateKind.EMPTY
    assert ym("   ").kind is DateKind.EMPTY
    for token in ("Present", "now", "至今", "CURRENT"):
        assert ym(token).kind is DateKind.PRESENT, token


def test_normalize_date_rejects_bad_ranges():
    assert ym("2012-13").kind is DateKind.UNPARSED
    assert ym("1776-07").kind is DateKind.UNPARSED


def test_normalize_date_unparsed_preserves_raw():
    date = ym(" sometime in spring ")
    assert date.kind is DateKind.UNPARSED
    assert date.raw == " sometime in spring "


@given(st.text(max_size=30))
def test_normalize_date_is_total(raw):
    date = normalize_date(raw)
    assert date.kind in DateKind
    if date.kind is DateKind.UNPARSED:
        assert date.raw == raw


def test_canonical_round_trip():
    for raw in ("2012.09", "2019", "Present", "", "mystery"):
        canonical = normalize_date(raw).canonical()
        assert normalize_date(canonical).canonical() == canonical


def test_normalize_org_strips_suffix():
    assert normalize_org("Rainbow Network Co.") == "Rainbow Network"


def test_normalize_org_no_matching_suffix():
    assert normalize_org("Alibaba Group") == "Alibaba Group"


def test_normalize_org_fixpoint():
    assert normalize_org("X Inc. Inc.") == "X"


def test_normalize_org_cjk_suffix():
    assert normalize_org("阿里巴巴有限公司") == "阿里巴巴"


def test_normalize_org_keeps_embedded_tokens():
    # "inc" inside a word is not a legal-form suffix.
    assert normalize_org("Brillinc") == "Brillinc"


@given(st.text(alphabet=st.characters(blacklist_categories=("Cs",)), max_size=40))
def test_normalize_org_idempotent(raw):
    once = normalize_org(raw)
    assert normalize_org(once) == once


def work_with_range(start, end, company="X", position="Dev"):
    return WorkEntry(
        company=company,
        position=position,
        description=f"desc {start}",
        description_range=LineRange(start, end),
    )


def test_deduplicate_containment():
    record = ResumeRecord(work=(work_with_range(10, 20), work_with_range(12, 18, "Y")))
    deduped, events = deduplicate(record)
    assert [e.company for e in deduped.work] == ["X"]
    assert len(events) == 1


def test_deduplicate_disjoint_kept():
    record = ResumeRecord(work=(work_with_range(10, 20), work_with_range(21, 30, "Y")))
    deduped, events = deduplicate(record)
    assert len(deduped.work) == 2 and events == []


def test_deduplicate_ratio_arithmetic():
    # Overlap 15..20 = 6 lines; smaller range has 10 -> ratio 0.6 > 0.5.
    record = ResumeRecord(work=(work_with_range(10, 20), work_with_range(15, 24, "Y")))
    deduped, _ = deduplicate(record)
    assert [e.company for e in deduped.work] == ["X"]
    # At threshold 0.6 the same pair survives (strict comparison).
    config = RefineConfig(dedup_overlap=0.6)
    kept, _ = deduplicate(record, config)
    assert len(kept.work) == 2


def test_deduplicate_ignores_rangeless_entities():
    record = ResumeRecord(
        work=(
            WorkEntry(company="A", description="no spans"),
            WorkEntry(company="B", description="none either"),
        )
    )
    deduped, events = deduplicate(record)
    assert deduped == record and events == []


DOC = make_doc(
    [
        "Zhang San",
        "Worked at ALIBABA, GROUP. as engineer",
        "Tsinghua University, Computer Science",
        "Phone: 13912345678",
    ]
)


def test_verify_source_drops_hallucinated_work():
    record = ResumeRecord(work=(WorkEntry(company="Hallucinated Corp"),))
    verified, events = verify_source(record, DOC)
    assert verified.work == ()
    assert len(events) == 1


def test_verify_source_keeps_verbatim_company():
    record = ResumeRecord(work=(WorkEntry(company="ALIBABA, GROUP."),))
    verified, _ = verify_source(record, DOC)
    assert len(verified.work) == 1


def test_verify_source_normalizes_case_and_punctuation():
    record = ResumeRecord(work=(WorkEntry(company="alibaba group"),))
    verified, _ = verify_source(record, DOC)
    assert len(verified.work) == 1


def test_verify_source_position_rescues_entry():
    record = ResumeRecord(work=(WorkEntry(company="Unknown Co", position="engineer"),))
    verified, _ = verify_source(record, DOC)
    assert len(verified.work) == 1


def test_verify_source_education_by_school():
    record = ResumeRecord(
        education=(
            EducationEntry(school="Tsinghua University"),
            EducationEntry(school="Nowhere Institute"),
        )
    )
    verified, events = verify_source(record, DOC)
    assert [e.school for e in verified.education] == ["Tsinghua University"]
    assert len(events) == 1


def test_verify_source_blanks_basic_fields_but_spares_age_born():
    record = ResumeRecord(
        basic=BasicInfo(
            name="Zhang San",
            phone_number="13912345678",
            current_location="Mars City",
            age="27",
            born="1996-11",
        )
    )
    verified, events = verify_source(record, DOC)
    assert verified.basic.name == "Zhang San"
    assert verified.basic.phone_number == "13912345678"
    assert verified.basic.current_location == ""
    assert verified.basic.age == "27" and verified.basic.born == "1996-11"
    assert len(events) == 1


def test_refine_clean_record_unchanged():
    record = ResumeRecord(
        basic=BasicInfo(name="Zhang San", phone_number="13912345678"),
        education=(EducationEntry(school="Tsinghua University", major="Computer Science"),),
    )
    refined, events = refine(record, DOC)
    assert refined == record
    assert events == []


def test_refine_keeps_basic_only_ground_truth():
    # A record holding just name/phone/email backed by the document text
    # passes through all four stages untouched.
    doc = make_doc(
        [
            "Gu Dabai",
            "Phone: 13987898888",
            "Email: 123245677@123.com",
            "Job Objective: New Media Operations",
        ]
    )
    record = ResumeRecord(
        basic=BasicInfo(
            name="Gu Dabai",
            phone_number="13987898888",
            personal_email="123245677@123.com",
        )
    )
    refined, events = refine(record, doc)
    assert refined == record and events == []


def test_refine_removes_duplicate_and_hallucination():
    doc = make_doc([f"line {i}" for i in range(10)] + ["Realwood Partners work history"])
    record = ResumeRecord(
        work=(
            WorkEntry(company="Realwood Partners", description_range=LineRange(2, 6)),
            WorkEntry(company="Realwood Partners", description_range=LineRange(3, 6)),
            WorkEntry(company="Ghost Labs", position="Wizard"),
        )
    )
    refined, events = refine(record, doc)
    assert len(refined.work) == 1
    assert refined.work[0].description == "\n".join(f"line {i}" for i in range(2, 7))
    stages = sorted({e.stage for e in events})
    assert stages == ["deduplicate", "reextract", "verify_source"]


def test_refine_normalizes_dates_and_orgs_in_place():
    doc = make_doc(["Rainbow Network Co. 2016.07 start", "engineer role"])
    record = ResumeRecord(
        work=(
            WorkEntry(company="Rainbow Network Co.", position="engineer",
                      start_date="2016.07", end_date="Present"),
        )
    )
    refined, events = refine(record, doc)
    entry = refined.work[0]
    assert entry.company == "Rainbow Network"
    assert entry.start_date == "2016-07"
    assert entry.end_date == "present"
    assert any(e.stage == "normalize" for e in events)


def test_refine_idempotent_on_messy_record():
    doc = make_doc(["Rainbow Network Co. 2016.07", "engineer role", "filler line"])
    record = ResumeRecord(
        work=(
            WorkEntry(company="Rainbow Network Co.", position="engineer",
                      start_date="2016.07", description_range=LineRange(0, 1)),
        )
    )
    once, _ = refine(record, doc)
    twice, events = refine(once, doc)
    assert twice == once
    assert events == []


def test_refine_config_from_files(tmp_path):
    toml_path = tmp_path / "refine.toml"
    toml_path.write_text(
        'dedup_overlap = 0.7\norg_suffixes = ["ltd."]\n', encoding="utf-8"
    )
    config = RefineConfig.from_file(toml_path)
    assert config.dedup_overlap == 0.7
    assert config.org_suffixes == ("ltd.",)
    json_path = tmp_path / "refine.json"
    json_path.write_text('{"present_tokens": ["ongoing"]}', encoding="utf-8")
    config = RefineConfig.from_file(json_path)
    assert config.present_tokens == ("ongoing",)
    assert normalize_date("ongoing", config).kind is DateKind.PRESENT


def test_refine_config_validation():
    with pytest.raises(ValueError):
        RefineConfig(dedup_overlap=1.5)
    with pytest.raises(ValueError):
        RefineConfig(org_suffixes=())
