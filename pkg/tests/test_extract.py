import json
import threading
import time

import pytest
from hypothesis import given, strategies as st

from resumeflow.doc_model import IndexedDocument, LineRange
from resumeflow.errors import (
    BackendUnavailable,
    EmptyDocument,
    MalformedJson,
    NoJsonFound,
    SchemaMismatch,
)
from resumeflow.extract import (
    BackendError,
    BasicInfo,
    DecodeConfig,
    ExtractionTask,
    HttpBackend,
    MockBackend,
    OracleBackend,
    ResumeRecord,
    WorkEntry,
    build_prompt,
    extract_json_block,
    parse_task_output,
    record_from_dict,
    resolve_pointers,
    run_extraction,
)

from conftest import make_doc

FIG6_BASIC_OUTPUT = """{
  "basicInfo": {
    "name": "Gu Dabai",
    "phoneNumber": "13987898888",
    "personalEmail": "123245677@123.com",
    "age": "",
    "born": "",
    "gender": "",
    "desiredLocation": [],
    "currentLocation": "",
    "placeOfOrigin": ""
  }
}"""


def test_prompt_contains_basic_schema_keys():
    doc = make_doc(["Gu Dabai"])
    prompt = build_prompt(ExtractionTask.BASIC_INFO, doc)
    for key in ("personalEmail", "phoneNumber", "desiredLocation"):
        assert key in prompt


def test_prompt_contains_education_schema_keys():
    doc = make_doc(["x"])
    prompt = build_prompt(ExtractionTask.EDUCATION, doc)
    for key in ("school", "major", "degree", "startDate", "endDate"):
        assert key in prompt


def test_prompt_embeds_rendered_document():
    doc = make_doc(["Gu Dabai", "Phone: 13987898888"])
    for task in ExtractionTask:
        prompt = build_prompt(task, doc)
        assert "[0]: Gu Dabai\n[1]: Phone: 13987898888" in prompt


def test_prompt_suppress_reasoning_marker():
    doc = make_doc(["x"])
    assert "/no_think" not in build_prompt(ExtractionTask.BASIC_INFO, doc)
    assert "/no_think" in build_prompt(ExtractionTask.BASIC_INFO, doc, True)


def test_prompt_empty_document():
    with pytest.raises(EmptyDocument):
        build_prompt(ExtractionTask.BASIC_INFO, IndexedDocument())


def test_extract_json_block_with_chatter():
    assert extract_json_block('Sure! {"a":1} Done.') == '{"a":1}'


def test_extract_json_block_nested():
    raw = '{"a":{"b":2}}'
    assert extract_json_block(raw) == raw


def test_extract_json_block_no_braces():
    with pytest.raises(NoJsonFound):
        extract_json_block("no braces here")


def test_extract_json_block_malformed():
    with pytest.raises(MalformedJson):
        extract_json_block("{ not: valid json }")


def test_parse_fig6_style_basic_output():
    basic = parse_task_output(ExtractionTask.BASIC_INFO, FIG6_BASIC_OUTPUT)
    assert basic == BasicInfo(
        name="Gu Dabai",
        phone_number="13987898888",
        personal_email="123245677@123.com",
    )


def test_parse_empty_education():
    assert parse_task_output(ExtractionTask.EDUCATION, '{"education":[]}') == ()


def test_parse_work_pointer_range():
    text = '{"workExperience":[{"company":"X","description":[15,25]}]}'
    (entry,) = parse_task_output(ExtractionTask.WORK_EXPERIENCE, text)
    assert entry.company == "X"
    assert entry.description_range == LineRange(15, 25)
    assert entry.description == ""


def test_parse_work_string_description():
    text = '{"workExperience":[{"company":"X","description":"did things"}]}'
    (entry,) = parse_task_output(ExtractionTask.WORK_EXPERIENCE, text)
    assert entry.description == "did things"
    assert entry.description_range is None


def test_parse_schema_mismatch():
    with pytest.raises(SchemaMismatch):
        parse_task_output(ExtractionTask.BASIC_INFO, '{"education": []}')
    with pytest.raises(SchemaMismatch):
        parse_task_output(ExtractionTask.EDUCATION, '{"education": "nope"}')
    with pytest.raises(SchemaMismatch):
        parse_task_output(ExtractionTask.BASIC_INFO, '"just a string"')


def test_parse_ignores_unknown_keys_and_coerces():
    text = '{"basicInfo": {"name": "A", "age": 27, "unknownKey": true}}'
    basic = parse_task_output(ExtractionTask.BASIC_INFO, text)
    assert basic.name == "A" and basic.age == "27"


def test_record_round_trip_through_dict():
    record = ResumeRecord(
        basic=BasicInfo(name="A", desired_location=("Beijing", "Shanghai")),
        work=(
            WorkEntry(
                company="X",
                description="a\nb",
                description_range=LineRange(3, 4),
            ),
        ),
    )
    again = record_from_dict(json.loads(json.dumps(record.to_dict())))
    assert again == record


def test_resolve_pointers_verbatim():
    texts = [f"line {i}" for i in range(30)]
    doc = make_doc(texts)
    record = ResumeRecord(work=(WorkEntry(company="X", description_range=LineRange(15, 25)),))
    resolved, warnings = resolve_pointers(record, doc)
    assert warnings == []
    assert resolved.work[0].description == "\n".join(texts[15:26])


def test_resolve_pointers_identity_without_ranges():
    record = ResumeRecord(work=(WorkEntry(company="X", description="keep me"),))
    resolved, warnings = resolve_pointers(record, make_doc(["a"]))
    assert resolved == record and warnings == []


def test_resolve_pointers_clamps_and_warns():
    doc = make_doc([f"l{i}" for i in range(30)])
    record = ResumeRecord(work=(WorkEntry(company="X", description_range=LineRange(5, 999)),))
    resolved, warnings = resolve_pointers(record, doc)
    assert len(warnings) == 1
    entry = resolved.work[0]
    assert entry.description_range == LineRange(5, 29)
    assert entry.description.count("\n") == 24  # 25 lines


def make_mock_table(basic=FIG6_BASIC_OUTPUT, education='{"education":[]}',
                    work='{"workExperience":[]}'):
    return MockBackend(
        table={
            "basic_info": basic,
            "education": education,
            "work_experience": work,
        }
    )


def test_run_extraction_fig6_mock():
    doc = make_doc(["Gu Dabai", "Phone: 13987898888"])
    outcome = run_extraction(doc, make_mock_table(), DecodeConfig())
    assert outcome.failures == ()
    assert outcome.record.basic.name == "Gu Dabai"
    assert outcome.record.basic.phone_number == "13987898888"
    assert outcome.record.education == () and outcome.record.work == ()


def test_run_extraction_degrades_on_garbage_task():
    doc = make_doc(["Gu Dabai"])
    backend = make_mock_table(education="complete garbage, no json")
    outcome = run_extraction(doc, backend, DecodeConfig(retries=1))
    assert outcome.record.education == ()
    assert len(outcome.failures) == 1
    assert outcome.failures[0].task is ExtractionTask.EDUCATION
    assert outcome.failures[0].kind == "parse"


class DeadBackend:
    def complete(self, prompt, config):
        raise BackendError("connection refused")


def test_run_extraction_backend_unavailable():
    with pytest.raises(BackendUnavailable):
        run_extraction(make_doc(["x"]), DeadBackend(), DecodeConfig(retries=0))


class RetryThenSucceedBackend:
    """Fails each prompt once, then delegates to a mock table."""

    def __init__(self, inner):
        self.inner = inner
        self.attempts = {}
        self.lock = threading.Lock()

    def complete(self, prompt, config):
        with self.lock:
            n = self.attempts.get(prompt, 0)
            self.attempts[prompt] = n + 1
        if n == 0:
            raise BackendError("flaky")
        return self.inner.complete(prompt, config)


def test_run_extraction_retries_transport_errors():
    backend = RetryThenSucceedBackend(make_mock_table())
    outcome = run_extraction(make_doc(["Gu Dabai"]), backend, DecodeConfig(retries=2))
    assert outcome.failures == ()
    assert outcome.record.basic.name == "Gu Dabai"


class DelayBackend:
    def __init__(self, inner, delay):
        self.inner = inner
        self.delay = delay

    def complete(self, prompt, config):
        time.sleep(self.delay)
        return self.inner.complete(prompt, config)


def test_run_extraction_is_concurrent():
    backend = DelayBackend(make_mock_table(), 0.25)
    started = time.perf_counter()
    run_extraction(make_doc(["x"]), backend, DecodeConfig())
    elapsed = time.perf_counter() - started
    # Three 0.25s tasks in parallel: bounded by the max, not the sum.
    assert 0.25 <= elapsed < 0.6


def test_mock_backend_from_file(tmp_path):
    path = tmp_path / "table.json"
    path.write_text(json.dumps({"basic_info": FIG6_BASIC_OUTPUT}), encoding="utf-8")
    backend = MockBackend.from_file(path)
    doc = make_doc(["x"])
    raw = backend.complete(build_prompt(ExtractionTask.BASIC_INFO, doc), DecodeConfig())
    assert "Gu Dabai" in raw
    with pytest.raises(BackendError):
        backend.complete(build_prompt(ExtractionTask.EDUCATION, doc), DecodeConfig())


def test_http_backend_payload_shape(monkeypatch):
    captured = {}

    class FakeResponse:
        def raise_for_status(self):
            pass

        def json(self):
            return {"choices": [{"message": {"content": '{"education": []}'}}]}

    def fake_post(url, json=None, timeout=None):
        captured["url"] = url
        captured["payload"] = json
        captured["timeout"] = timeout
        return FakeResponse()

    monkeypatch.setattr("resumeflow.extract.backends.requests.post", fake_post)
    backend = HttpBackend(endpoint="http://llm.local/v1/chat/completions")
    config = DecodeConfig(model="small-model", max_tokens=512, timeout=11.0)
    raw = backend.complete("extract the \"education\" list please", config)
    assert raw == '{"education": []}'
    payload = captured["payload"]
    assert payload["model"] == "small-model"
    assert payload["temperature"] == 0.5
    assert payload["repetition_penalty"] == 1.01
    assert payload["max_tokens"] == 512
    assert payload["messages"] == [
        {"role": "user", "content": 'extract the "education" list please'}
    ]
    assert captured["timeout"] == 11.0


def test_http_backend_transport_error(monkeypatch):
    def fake_post(url, json=None, timeout=None):
        raise OSError("boom")

    monkeypatch.setattr("resumeflow.extract.backends.requests.post", fake_post)
    backend = HttpBackend(endpoint="http://llm.local")
    with pytest.raises(BackendError):
        backend.complete('{"basicInfo"}', DecodeConfig())


def test_oracle_backend_points_at_description_lines():
    texts = ["head", "Work Experience", "2020-01 - 2021-01  X", "Engineer, City",
             "did the first thing", "did the second thing", "tail"]
    doc = make_doc(texts)
    truth = ResumeRecord(
        work=(
            WorkEntry(
                company="X",
                position="Engineer",
                description="did the first thing\ndid the second thing",
            ),
        )
    )
    backend = OracleBackend(truth)
    raw = backend.complete(
        build_prompt(ExtractionTask.WORK_EXPERIENCE, doc), DecodeConfig()
    )
    data = json.loads(raw)
    assert data["workExperience"][0]["description"] == [4, 5]


def test_oracle_extraction_reproduces_fixture_truth():
    from resumeflow.layout import linearize
    from resumeflow.refine import refine
    from resumeflow.synth import generate, linear_template

    fixture = generate(42, linear_template())
    doc = linearize([fixture.page], fixture.primitives)
    outcome = run_extraction(doc, OracleBackend(fixture.truth), DecodeConfig())
    assert outcome.failures == () and outcome.warnings == ()
    refined, _ = refine(outcome.record, doc)
    assert refined == fixture.truth


@given(
    st.dictionaries(
        st.text(alphabet="abc", max_size=4),
        st.integers(-5, 5) | st.text(alphabet="xyz", max_size=4),
        max_size=4,
    ),
    st.text(alphabet=" abc!?", max_size=10),
    st.text(alphabet=" xyz.!", max_size=10),
)
def test_extract_json_block_total_on_wrapped_objects(obj, prefix, suffix):
    # Any chatter without braces around exactly one well-formed object.
    raw = prefix + json.dumps(obj) + suffix
    block = extract_json_block(raw)
    assert json.loads(block) == obj


def test_decode_config_validation():
    with pytest.raises(ValueError):
        DecodeConfig(temperature=-0.1)
    with pytest.raises(ValueError):
        DecodeConfig(repetition_penalty=0.9)
    with pytest.raises(ValueError):
        DecodeConfig(retries=-1)
