"""
Geometric and textual primitives shared by every pipeline stage.

Coordinates are page points with the origin at the top-left corner;
y grows downward.  Everything here is immutable after construction
(frozen dataclasses), so instances can be shared freely across threads.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Iterator

from .errors import RangeOutOfBounds


class Source(Enum):
    """Provenance of a text primitive."""

    METADATA = "metadata"
    OCR = "ocr"


@dataclass(frozen=True)
class BoundingBox:
    """Axis-aligned box in page points. x_min <= x_max, y_min <= y_max."""

    x_min: float
    y_min: float
    x_max: float
    y_max: float

    def __post_init__(self) -> None:
        for name in ("x_min", "y_min", "x_max", "y_max"):
            value = getattr(self, name)
            if not math.isfinite(value) or value < 0:
                raise ValueError(f"{name} must be finite and >= 0, got {value!r}")
        if self.x_min > self.x_max or self.y_min > self.y_max:
            raise ValueError(
                f"inverted box: ({self.x_min}, {self.y_min}, {self.x_max}, {self.y_max})"
            )

    @property
    def width(self) -> float:
        return self.x_max - self.x_min

    @property
    def height(self) -> float:
        return self.y_max - self.y_min

    @property
    def area(self) -> float:
        return self.width * self.height

    @property
    def center(self) -> tuple[float, float]:
        return ((self.x_min + self.x_max) / 2.0, (self.y_min + self.y_max) / 2.0)

    def intersection_area(self, other: "BoundingBox") -> float:
        w = min(self.x_max, other.x_max) - max(self.x_min, other.x_min)
        h = min(self.y_max, other.y_max) - max(self.y_min, other.y_min)
        if w <= 0 or h <= 0:
            return 0.0
        return w * h

    def union(self, other: "BoundingBox") -> "BoundingBox":
        return BoundingBox(
            min(self.x_min, other.x_min),
            min(self.y_min, other.y_min),
            max(self.x_max, other.x_max),
            max(self.y_max, other.y_max),
        )

    def contains_point(self, x: float, y: float) -> bool:
        return self.x_min <= x <= self.x_max and self.y_min <= y <= self.y_max

    def as_tuple(self) -> tuple[float, float, float, float]:
        return (self.x_min, self.y_min, self.x_max, self.y_max)


def union_boxes(boxes: Iterable[BoundingBox]) -> BoundingBox:
    """Bounding box of a non-empty collection of boxes."""
    it = iter(boxes)
    try:
        acc = next(it)
    except StopIteration:
        raise ValueError("union_boxes needs at least one box") from None
    for box in it:
        acc = acc.union(box)
    return acc


@dataclass(frozen=True)
class TextPrimitive:
    """One positioned text fragment: the atomic unit of document content."""

    text: str
    bbox: BoundingBox
    page: int = 0
    source: Source = Source.METADATA

    def __post_init__(self) -> None:
        if not self.text.strip():
            raise ValueError("primitive text must be non-empty after trimming")
        if self.page < 0:
            raise ValueError(f"page index must be >= 0, got {self.page}")

    def to_dict(self) -> dict:
        return {
            "text": self.text,
            "bbox": list(self.bbox.as_tuple()),
            "page": self.page,
            "source": self.source.value,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "TextPrimitive":
        x0, y0, x1, y1 = data["bbox"]
        return cls(
            text=data["text"],
            bbox=BoundingBox(x0, y0, x1, y1),
            page=int(data.get("page", 0)),
            source=Source(data.get("source", "metadata")),
        )


@dataclass(frozen=True)
class LayoutSegment:
    """A rectangular region whose content reads correctly with a plain
    top-to-bottom, left-to-right sort.

    ``member_ids`` index into the primitive list the segment was detected
    from; every primitive belongs to exactly one segment of a page.
    """

    bbox: BoundingBox
    page: int
    member_ids: tuple[int, ...]

    def __post_init__(self) -> None:
        if not self.member_ids:
            raise ValueError("segment must have at least one member")


@dataclass(frozen=True)
class IndexedLine:
    """One line of the linearized document. ``text`` never contains a
    line break; ``segment_ordinal`` is the document-global ordinal of the
    segment the line came from."""

    index: int
    text: str
    bbox: BoundingBox
    segment_ordinal: int = 0
    source_primitive_ids: tuple[int, ...] = ()

    def __post_init__(self) -> None:
        if "\n" in self.text or "\r" in self.text:
            raise ValueError("line text must not contain line breaks")
        if self.index < 0:
            raise ValueError(f"line index must be >= 0, got {self.index}")


@dataclass(frozen=True)
class IndexedDocument:
    """The linearized, line-numbered text every downstream stage references.

    Indices are exactly 0..len-1 in order; this is validated at
    construction so consumers can trust positional access.
    """

    lines: tuple[IndexedLine, ...] = ()
    page_count: int = 0

    def __post_init__(self) -> None:
        for position, line in enumerate(self.lines):
            if line.index != position:
                raise ValueError(
                    f"line at position {position} carries index {line.index}; "
                    "indices must be contiguous from 0"
                )

    def __len__(self) -> int:
        return len(self.lines)

    def __iter__(self) -> Iterator[IndexedLine]:
        return iter(self.lines)

    def to_dict(self) -> dict:
        return {
            "page_count": self.page_count,
            "lines": [
                {
                    "index": line.index,
                    "text": line.text,
                    "bbox": list(line.bbox.as_tuple()),
                    "segment": line.segment_ordinal,
                }
                for line in self.lines
            ],
        }

    @classmethod
    def from_dict(cls, data: dict) -> "IndexedDocument":
        lines = []
        for entry in data.get("lines", []):
            x0, y0, x1, y1 = entry["bbox"]
            lines.append(
                IndexedLine(
                    index=int(entry["index"]),
                    text=entry["text"],
                    bbox=BoundingBox(x0, y0, x1, y1),
                    segment_ordinal=int(entry.get("segment", 0)),
                )
            )
        return cls(lines=tuple(lines), page_count=int(data.get("page_count", 0)))


@dataclass(frozen=True)
class LineRange:
    """Inclusive range of line indices. Bounds against a concrete document
    are checked at resolution time, not at construction."""

    start: int
    end: int

    def __post_init__(self) -> None:
        if self.start < 0 or self.end < self.start:
            raise ValueError(f"invalid range [{self.start}, {self.end}]")

    def __len__(self) -> int:
        return self.end - self.start + 1

    def to_list(self) -> list[int]:
        return [self.start, self.end]


def render_indexed(doc: IndexedDocument) -> str:
    """Render the document as newline-joined ``[i]: text`` lines.

    The newline separator keeps line boundaries machine-recoverable:
    splitting the output on newlines and stripping the ``[i]: `` prefix
    round-trips to the exact line texts.
    """
    return "\n".join(f"[{line.index}]: {line.text}" for line in doc.lines)


def slice_lines(doc: IndexedDocument, line_range: LineRange) -> str:
    """Verbatim newline-joined text of lines ``start..=end``.

    Raises RangeOutOfBounds when the range does not fit the document.
    """
    if line_range.end >= len(doc.lines):
        raise RangeOutOfBounds(
            f"range [{line_range.start}, {line_range.end}] exceeds "
            f"document of {len(doc.lines)} lines"
        )
    return "\n".join(
        line.text for line in doc.lines[line_range.start : line_range.end + 1]
    )
