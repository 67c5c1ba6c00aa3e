"""Completion backends: HTTP, scripted mock, and fixture-grounded oracle.

A backend is anything with ``complete(prompt, config) -> str``.  All
three implementations here are safe to call from multiple threads at
once, which the extraction runner relies on for its parallel sub-tasks.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Mapping, Protocol, runtime_checkable

import requests

from ..errors import ResumeFlowError
from .prompts import ExtractionTask, TASK_TOP_KEYS
from .records import ResumeRecord


class BackendError(ResumeFlowError):
    """Transport-level completion failure (network, HTTP, bad envelope)."""


@dataclass(frozen=True)
class DecodeConfig:
    """Decode and transport settings for one extraction run."""

    temperature: float = 0.5
    repetition_penalty: float = 1.01
    max_tokens: int = 2048
    model: str = ""
    endpoint: str = ""
    timeout: float = 30.0
    retries: int = 2
    suppress_reasoning: bool = False

    def __post_init__(self) -> None:
        if self.temperature < 0:
            raise ValueError(f"temperature must be >= 0, got {self.temperature}")
        if self.repetition_penalty < 1:
            raise ValueError(
                f"repetition penalty must be >= 1, got {self.repetition_penalty}"
            )
        if self.retries < 0:
            raise ValueError(f"retries must be >= 0, got {self.retries}")


@runtime_checkable
class CompletionBackend(Protocol):
    def complete(self, prompt: str, config: DecodeConfig) -> str:
        ...


def task_of_prompt(prompt: str) -> ExtractionTask:
    """Infer the sub-task from the schema key the prompt asks for."""
    for task, key in TASK_TOP_KEYS.items():
        if f'"{key}"' in prompt:
            return task
    raise BackendError("prompt does not name a known extraction schema")


@dataclass(frozen=True)
class HttpBackend:
    """Chat-completions style HTTP backend.

    Posts ``{model, messages, temperature, repetition_penalty,
    max_tokens}`` and reads the first choice's message content.
    ``requests.post`` is used directly (no shared session) so concurrent
    calls from the three task threads are safe.
    """

    endpoint: str = ""

    def complete(self, prompt: str, config: DecodeConfig) -> str:
        url = self.endpoint or config.endpoint
        if not url:
            raise BackendError("no endpoint configured for HTTP backend")
        payload = {
            "model": config.model,
            "messages": [{"role": "user", "content": prompt}],
            "temperature": config.temperature,
            "repetition_penalty": config.repetition_penalty,
            "max_tokens": config.max_tokens,
        }
        try:
            response = requests.post(url, json=payload, timeout=config.timeout)
            response.raise_for_status()
            data = response.json()
        except Exception as exc:
            raise BackendError(f"completion request to {url} failed: {exc}") from exc
        try:
            choice = data["choices"][0]
            if "message" in choice:
                return choice["message"]["content"]
            return choice["text"]
        except (KeyError, IndexError, TypeError) as exc:
            raise BackendError(f"unexpected completion envelope: {data!r}") from exc


@dataclass(frozen=True)
class MockBackend:
    """Scripted backend: a table of raw completion text keyed by task."""

    table: Mapping[str, str] = field(default_factory=dict)

    @classmethod
    def from_file(cls, path: str | Path) -> "MockBackend":
        with open(path, "r", encoding="utf-8") as handle:
            return cls(table=json.load(handle))

    def complete(self, prompt: str, config: DecodeConfig) -> str:
        task = task_of_prompt(prompt)
        if task.value not in self.table:
            raise BackendError(f"mock table has no entry for task {task.value!r}")
        return self.table[task.value]


_INDEXED_LINE = re.compile(r"^\[(\d+)\]: (.*)$")


def parse_indexed_lines(prompt: str) -> list[str]:
    """Recover the ``[i]: text`` lines appended to a prompt, in order."""
    lines = []
    for raw in prompt.splitlines():
        match = _INDEXED_LINE.match(raw)
        if match:
            lines.append(match.group(2))
    return lines


@dataclass(frozen=True)
class OracleBackend:
    """Answers from a known-true record, grounded in the prompted text.

    Scalar fields come straight from the record.  Work descriptions are
    answered as line-number ranges located by searching the prompt's
    indexed lines for the description's first and last line, which makes
    the oracle faithful to whatever linearization it was shown: a badly
    ordered document yields ranges that span interleaved noise, exactly
    like a real span-pointing extractor would suffer.
    """

    truth: ResumeRecord

    def complete(self, prompt: str, config: DecodeConfig) -> str:
        task = task_of_prompt(prompt)
        if task is ExtractionTask.BASIC_INFO:
            payload = {"basicInfo": self.truth.basic.to_dict()}
        elif task is ExtractionTask.EDUCATION:
            payload = {"education": [e.to_dict() for e in self.truth.education]}
        else:
            doc_lines = parse_indexed_lines(prompt)
            entries = []
            for entry in self.truth.work:
                data = entry.to_dict()
                data.pop("descriptionRange", None)
                data["description"] = self._locate(entry.description, doc_lines)
                entries.append(data)
            payload = {"workExperience": entries}
        return json.dumps(payload, ensure_ascii=False)

    @staticmethod
    def _locate(description: str, doc_lines: list[str]):
        if not description:
            return ""
        wanted = description.split("\n")
        first = _find_containing(doc_lines, wanted[0], 0)
        if first is None:
            return ""
        last = _find_containing(doc_lines, wanted[-1], first)
        if last is None:
            return ""
        return [first, last]


def _find_containing(doc_lines: list[str], needle: str, start: int) -> int | None:
    for i in range(start, len(doc_lines)):
        if needle in doc_lines[i]:
            return i
    return None
