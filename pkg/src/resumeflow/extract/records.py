"""Structured extraction targets and their JSON wire format.

Absent string fields are empty strings, never missing keys; list fields
may be empty.  The JSON form uses the same camelCase keys the extraction
prompts ask the model for, so a model answer, a stored record, and a
ground-truth label all share one schema.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable

from ..doc_model import LineRange


@dataclass(frozen=True)
class BasicInfo:
    name: str = ""
    personal_email: str = ""
    phone_number: str = ""
    age: str = ""
    born: str = ""
    gender: str = ""
    job_intention: str = ""
    current_location: str = ""
    place_of_origin: str = ""
    desired_location: tuple[str, ...] = ()

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "personalEmail": self.personal_email,
            "phoneNumber": self.phone_number,
            "age": self.age,
            "born": self.born,
            "gender": self.gender,
            "desiredLocation": list(self.desired_location),
            "jobIntention": self.job_intention,
            "currentLocation": self.current_location,
            "placeOfOrigin": self.place_of_origin,
        }


@dataclass(frozen=True)
class EducationEntry:
    school: str = ""
    major: str = ""
    degree: str = ""
    start_date: str = ""
    end_date: str = ""
    location: str = ""

    def to_dict(self) -> dict:
        return {
            "school": self.school,
            "major": self.major,
            "degree": self.degree,
            "startDate": self.start_date,
            "endDate": self.end_date,
            "location": self.location,
        }


@dataclass(frozen=True)
class WorkEntry:
    company: str = ""
    position: str = ""
    start_date: str = ""
    end_date: str = ""
    location: str = ""
    description: str = ""
    description_range: LineRange | None = None

    def to_dict(self) -> dict:
        data = {
            "company": self.company,
            "position": self.position,
            "startDate": self.start_date,
            "endDate": self.end_date,
            "location": self.location,
            "description": self.description,
        }
        if self.description_range is not None:
            data["descriptionRange"] = self.description_range.to_list()
        return data


@dataclass(frozen=True)
class ResumeRecord:
    basic: BasicInfo = field(default_factory=BasicInfo)
    education: tuple[EducationEntry, ...] = ()
    work: tuple[WorkEntry, ...] = ()

    def to_dict(self) -> dict:
        return {
            "basicInfo": self.basic.to_dict(),
            "education": [entry.to_dict() for entry in self.education],
            "workExperience": [entry.to_dict() for entry in self.work],
        }


def _as_str(value) -> str:
    if value is None:
        return ""
    if isinstance(value, str):
        return value
    return str(value)


def _as_str_tuple(value) -> tuple[str, ...]:
    if isinstance(value, (list, tuple)):
        return tuple(_as_str(v) for v in value if _as_str(v))
    if isinstance(value, str) and value:
        return (value,)
    return ()


def basic_info_from_dict(data: dict) -> BasicInfo:
    return BasicInfo(
        name=_as_str(data.get("name")),
        personal_email=_as_str(data.get("personalEmail")),
        phone_number=_as_str(data.get("phoneNumber")),
        age=_as_str(data.get("age")),
        born=_as_str(data.get("born")),
        gender=_as_str(data.get("gender")),
        job_intention=_as_str(data.get("jobIntention")),
        current_location=_as_str(data.get("currentLocation")),
        place_of_origin=_as_str(data.get("placeOfOrigin")),
        desired_location=_as_str_tuple(data.get("desiredLocation")),
    )


def education_entry_from_dict(data: dict) -> EducationEntry:
    return EducationEntry(
        school=_as_str(data.get("school")),
        major=_as_str(data.get("major")),
        degree=_as_str(data.get("degree")),
        start_date=_as_str(data.get("startDate")),
        end_date=_as_str(data.get("endDate")),
        location=_as_str(data.get("location")),
    )


def _range_from_value(value) -> LineRange | None:
    """Accept a two-integer array, tolerating swapped or negative ends."""
    if not isinstance(value, (list, tuple)) or len(value) != 2:
        return None
    try:
        a, b = int(value[0]), int(value[1])
    except (TypeError, ValueError):
        return None
    start, end = min(a, b), max(a, b)
    start = max(0, start)
    end = max(start, end)
    return LineRange(start, end)


def work_entry_from_dict(data: dict) -> WorkEntry:
    description = data.get("description", "")
    description_range = None
    if isinstance(description, (list, tuple)):
        description_range = _range_from_value(description)
        description = ""
    else:
        description = _as_str(description)
    explicit = data.get("descriptionRange")
    if explicit is not None and description_range is None:
        description_range = _range_from_value(explicit)
    return WorkEntry(
        company=_as_str(data.get("company")),
        position=_as_str(data.get("position")),
        start_date=_as_str(data.get("startDate")),
        end_date=_as_str(data.get("endDate")),
        location=_as_str(data.get("location")),
        description=description,
        description_range=description_range,
    )


def record_from_dict(data: dict) -> ResumeRecord:
    basic = data.get("basicInfo") or {}
    education = data.get("education") or []
    work = data.get("workExperience") or []
    return ResumeRecord(
        basic=basic_info_from_dict(basic) if isinstance(basic, dict) else BasicInfo(),
        education=tuple(
            education_entry_from_dict(e) for e in education if isinstance(e, dict)
        ),
        work=tuple(work_entry_from_dict(w) for w in work if isinstance(w, dict)),
    )


def read_record_json(path: str | Path) -> ResumeRecord:
    with open(path, "r", encoding="utf-8") as handle:
        return record_from_dict(json.load(handle))


def write_record_json(path: str | Path, record: ResumeRecord) -> None:
    with open(path, "w", encoding="utf-8") as handle:
        json.dump(record.to_dict(), handle, ensure_ascii=False, indent=2)


def read_records_jsonl(path: str | Path) -> list[ResumeRecord]:
    records = []
    with open(path, "r", encoding="utf-8") as handle:
        for line in handle:
            line = line.strip()
            if line:
                records.append(record_from_dict(json.loads(line)))
    return records


def write_records_jsonl(path: str | Path, records: Iterable[ResumeRecord]) -> None:
    with open(path, "w", encoding="utf-8") as handle:
        for record in records:
            handle.write(json.dumps(record.to_dict(), ensure_ascii=False) + "\n")
