"""LLM extraction orchestration: prompts, backends, parsing, pointers."""

from .backends import (
    BackendError,
    CompletionBackend,
    DecodeConfig,
    HttpBackend,
    MockBackend,
    OracleBackend,
    parse_indexed_lines,
    task_of_prompt,
)
from .prompts import ExtractionTask, TASK_TOP_KEYS, build_prompt, load_template
from .records import (
    BasicInfo,
    EducationEntry,
    ResumeRecord,
    WorkEntry,
    basic_info_from_dict,
    education_entry_from_dict,
    read_record_json,
    read_records_jsonl,
    record_from_dict,
    work_entry_from_dict,
    write_record_json,
    write_records_jsonl,
)
from .runner import (
    ExtractionOutcome,
    TaskFailure,
    extract_json_block,
    parse_task_output,
    resolve_pointers,
    run_extraction,
)

__all__ = [
    "BackendError",
    "BasicInfo",
    "CompletionBackend",
    "DecodeConfig",
    "EducationEntry",
    "ExtractionOutcome",
    "ExtractionTask",
    "HttpBackend",
    "MockBackend",
    "OracleBackend",
    "ResumeRecord",
    "TASK_TOP_KEYS",
    "TaskFailure",
    "WorkEntry",
    "basic_info_from_dict",
    "build_prompt",
    "education_entry_from_dict",
    "extract_json_block",
    "load_template",
    "parse_indexed_lines",
    "parse_task_output",
    "read_record_json",
    "read_records_jsonl",
    "record_from_dict",
    "resolve_pointers",
    "run_extraction",
    "task_of_prompt",
    "work_entry_from_dict",
    "write_record_json",
    "write_records_jsonl",
]
