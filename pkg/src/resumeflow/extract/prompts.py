"""Task prompts: versioned template files plus the indexed resume text."""

from __future__ import annotations

from enum import Enum
from importlib import resources

from ..doc_model import IndexedDocument, render_indexed
from ..errors import EmptyDocument


class ExtractionTask(Enum):
    """The three independent extraction sub-tasks."""

    BASIC_INFO = "basic_info"
    EDUCATION = "education"
    WORK_EXPERIENCE = "work_experience"


TEMPLATE_FILES = {
    ExtractionTask.BASIC_INFO: "basic_info_v1.txt",
    ExtractionTask.EDUCATION: "education_v1.txt",
    ExtractionTask.WORK_EXPERIENCE: "work_experience_v1.txt",
}

# Top-level JSON key each task's answer must carry.
TASK_TOP_KEYS = {
    ExtractionTask.BASIC_INFO: "basicInfo",
    ExtractionTask.EDUCATION: "education",
    ExtractionTask.WORK_EXPERIENCE: "workExperience",
}


def load_template(task: ExtractionTask) -> str:
    ref = resources.files(__package__).joinpath("templates", TEMPLATE_FILES[task])
    return ref.read_text(encoding="utf-8")


def build_prompt(
    task: ExtractionTask, doc: IndexedDocument, suppress_reasoning: bool = False
) -> str:
    """Template text with the rendered indexed document appended.

    ``suppress_reasoning`` inserts the /no_think marker understood by
    backends that support switchable reasoning.
    """
    if not doc.lines:
        raise EmptyDocument("cannot build an extraction prompt for an empty document")
    parts = [load_template(task).rstrip()]
    if suppress_reasoning:
        parts.append("/no_think")
    parts.append("Resume text:")
    parts.append(render_indexed(doc))
    return "\n\n".join(parts) + "\n"
