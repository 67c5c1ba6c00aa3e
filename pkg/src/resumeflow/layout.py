"""
Reading-order reconstruction: partition a page into linearly readable
segments, order them visually, and emit the indexed document.

The segment detector is pluggable.  The default is a recursive
projection-gap cut (split at the widest whitespace gap, columns before
rows); an external detector service can be dropped in through the
``SegmentDetector`` protocol without touching the rest of the pipeline.
"""

from __future__ import annotations

import statistics
from dataclasses import dataclass, replace
from typing import Protocol, Sequence, runtime_checkable

import requests

from .doc_model import (
    BoundingBox,
    IndexedDocument,
    IndexedLine,
    LayoutSegment,
    TextPrimitive,
    union_boxes,
)
from .errors import DetectorError, InvalidGeometry
from .ingest import PageGeometry


@runtime_checkable
class SegmentDetector(Protocol):
    """Splits one page's primitives into layout segments.

    ``member_ids`` of the returned segments index into the primitive
    list passed in; together they must partition it (every primitive in
    exactly one segment).
    """

    def detect(
        self, page: PageGeometry, primitives: Sequence[TextPrimitive]
    ) -> list[LayoutSegment]:
        ...


@dataclass(frozen=True)
class GeometricCutDetector:
    """Default detector: recursive whitespace-projection cuts."""

    min_gap_x: float = 18.0
    min_gap_y: float = 14.0
    max_depth: int = 6

    def __post_init__(self) -> None:
        if self.min_gap_x <= 0 or self.min_gap_y <= 0:
            raise ValueError("projection gap thresholds must be > 0")

    def detect(
        self, page: PageGeometry, primitives: Sequence[TextPrimitive]
    ) -> list[LayoutSegment]:
        return detect_segments_geometric(page, primitives, self)


@dataclass(frozen=True)
class WholePageDetector:
    """Degenerate detector: the whole page is one segment.

    Linearizing with it reduces to a naive top-to-bottom, left-to-right
    sort of the raw primitives, which is the ablation baseline for
    measuring what hierarchical ordering buys.
    """

    def detect(
        self, page: PageGeometry, primitives: Sequence[TextPrimitive]
    ) -> list[LayoutSegment]:
        if not primitives:
            return []
        return [
            LayoutSegment(
                bbox=union_boxes(p.bbox for p in primitives),
                page=page.page,
                member_ids=tuple(range(len(primitives))),
            )
        ]


@dataclass(frozen=True)
class HttpSegmentDetector:
    """Adapter for an external detector service.

    Protocol: POST ``{"page": {...}, "primitives": [...]}`` to ``url``;
    the service answers ``{"segments": [{"bbox": [x0,y0,x1,y1],
    "member_ids": [...]}]}``.
    """

    url: str
    timeout: float = 30.0

    def detect(
        self, page: PageGeometry, primitives: Sequence[TextPrimitive]
    ) -> list[LayoutSegment]:
        payload = {
            "page": page.to_dict(),
            "primitives": [p.to_dict() for p in primitives],
        }
        try:
            response = requests.post(self.url, json=payload, timeout=self.timeout)
            response.raise_for_status()
            data = response.json()
        except Exception as exc:
            raise DetectorError(f"external detector at {self.url} failed: {exc}") from exc
        segments = []
        try:
            for entry in data["segments"]:
                x0, y0, x1, y1 = entry["bbox"]
                segments.append(
                    LayoutSegment(
                        bbox=BoundingBox(x0, y0, x1, y1),
                        page=page.page,
                        member_ids=tuple(int(i) for i in entry["member_ids"]),
                    )
                )
        except (KeyError, TypeError, ValueError) as exc:
            raise DetectorError(f"external detector returned bad payload: {exc}") from exc
        return segments


def _merged_intervals(spans: list[tuple[float, float]]) -> list[tuple[float, float]]:
    spans.sort()
    merged = [spans[0]]
    for start, end in spans[1:]:
        last_start, last_end = merged[-1]
        if start <= last_end:
            merged[-1] = (last_start, max(last_end, end))
        else:
            merged.append((start, end))
    return merged


def _widest_gap(
    primitives: Sequence[TextPrimitive], ids: Sequence[int], axis: str
) -> tuple[float, float]:
    """Widest whitespace gap in the projection of member boxes onto an axis.

    Returns (gap width, gap midpoint); width 0.0 when the projection is
    contiguous.  On equal widths the lowest-coordinate gap wins.
    """
    if axis == "x":
        spans = [(primitives[i].bbox.x_min, primitives[i].bbox.x_max) for i in ids]
    else:
        spans = [(primitives[i].bbox.y_min, primitives[i].bbox.y_max) for i in ids]
    merged = _merged_intervals(spans)
    best_width, best_mid = 0.0, 0.0
    for (_, left_end), (right_start, _) in zip(merged, merged[1:]):
        width = right_start - left_end
        if width > best_width:
            best_width = width
            best_mid = (left_end + right_start) / 2.0
    return best_width, best_mid


def detect_segments_geometric(
    page: PageGeometry,
    primitives: Sequence[TextPrimitive],
    params: GeometricCutDetector | None = None,
) -> list[LayoutSegment]:
    """Recursive cut: split at the widest whitespace gap, x before y.

    A group with no gap at or above the thresholds (or at max depth)
    becomes one segment whose box is the union of its member boxes.
    Single-column pages therefore yield exactly one segment.
    """
    params = params or GeometricCutDetector()
    if not primitives:
        return []

    segments: list[LayoutSegment] = []

    def emit(ids: list[int]) -> None:
        segments.append(
            LayoutSegment(
                bbox=union_boxes(primitives[i].bbox for i in ids),
                page=page.page,
                member_ids=tuple(sorted(ids)),
            )
        )

    def cut(ids: list[int], depth: int) -> None:
        if len(ids) <= 1 or depth >= params.max_depth:
            emit(ids)
            return
        gap_x, mid_x = _widest_gap(primitives, ids, "x")
        if gap_x >= params.min_gap_x:
            left = [i for i in ids if primitives[i].bbox.center[0] < mid_x]
            right = [i for i in ids if primitives[i].bbox.center[0] >= mid_x]
            cut(left, depth + 1)
            cut(right, depth + 1)
            return
        gap_y, mid_y = _widest_gap(primitives, ids, "y")
        if gap_y >= params.min_gap_y:
            top = [i for i in ids if primitives[i].bbox.center[1] < mid_y]
            bottom = [i for i in ids if primitives[i].bbox.center[1] >= mid_y]
            cut(top, depth + 1)
            cut(bottom, depth + 1)
            return
        emit(ids)

    cut(list(range(len(primitives))), 0)
    return segments


def order_segments(
    segments: Sequence[LayoutSegment], row_tolerance: float = 10.0
) -> list[LayoutSegment]:
    """Sort segments by (page, row band of the top edge, left edge).

    Segments whose top y differ by at most ``row_tolerance`` share a
    band and read left to right, so a main column comes before a
    right-aligned sidebar that starts at the same height.
    """
    ordered = sorted(
        segments,
        key=lambda s: (s.page, s.bbox.y_min, s.bbox.x_min, s.bbox.y_max, s.bbox.x_max),
    )
    banded: list[tuple[int, int, LayoutSegment]] = []
    band = -1
    band_page = None
    band_anchor = 0.0
    for seg in ordered:
        if band_page != seg.page or seg.bbox.y_min - band_anchor > row_tolerance:
            band += 1
            band_page = seg.page
            band_anchor = seg.bbox.y_min
        banded.append((seg.page, band, seg))
    banded.sort(
        key=lambda item: (
            item[0],
            item[1],
            item[2].bbox.x_min,
            item[2].bbox.y_min,
            item[2].bbox.x_max,
            item[2].bbox.y_max,
        )
    )
    return [seg for _, _, seg in banded]


def group_lines(
    segment: LayoutSegment,
    primitives: Sequence[TextPrimitive],
    y_tolerance_ratio: float = 0.6,
) -> list[IndexedLine]:
    """Cluster a segment's member primitives into text lines.

    Primitives whose vertical centers lie within ``y_tolerance_ratio``
    times the median primitive height of each other share a line; within
    a line fragments sort by x and join with single spaces.  Returned
    lines carry segment-local indices; the caller re-indexes globally.
    """
    if not primitives:
        return []

    def cy(p: TextPrimitive) -> float:
        return p.bbox.center[1]

    members = sorted(
        enumerate(primitives), key=lambda item: (cy(item[1]), item[1].bbox.x_min, item[1].text)
    )
    median_height = statistics.median(p.bbox.height for p in primitives)
    tolerance = y_tolerance_ratio * median_height

    clusters: list[list[tuple[int, TextPrimitive]]] = [[members[0]]]
    anchor = cy(members[0][1])
    for position, prim in members[1:]:
        if cy(prim) - anchor <= tolerance:
            clusters[-1].append((position, prim))
        else:
            clusters.append([(position, prim)])
            anchor = cy(prim)

    lines = []
    for cluster in clusters:
        fragments = sorted(
            cluster, key=lambda item: (item[1].bbox.x_min, item[1].bbox.x_max, item[1].text)
        )
        # Line text must stay single-line even if a primitive smuggles breaks in.
        text = " ".join(
            f.text.strip().replace("\r", " ").replace("\n", " ") for _, f in fragments
        )
        lines.append(
            (
                statistics.fmean(cy(f) for _, f in cluster),
                IndexedLine(
                    index=0,
                    text=text,
                    bbox=union_boxes(f.bbox for _, f in fragments),
                    segment_ordinal=0,
                    source_primitive_ids=tuple(position for position, _ in fragments),
                ),
            )
        )
    lines.sort(key=lambda item: (item[0], item[1].bbox.x_min, item[1].text))
    return [replace(line, index=i) for i, (_, line) in enumerate(lines)]


def _canonical_key(prim: TextPrimitive) -> tuple:
    return (
        prim.page,
        prim.bbox.y_min,
        prim.bbox.x_min,
        prim.bbox.y_max,
        prim.bbox.x_max,
        prim.text,
        prim.source.value,
    )


def _check_partition(
    segments: Sequence[LayoutSegment], primitives: Sequence[TextPrimitive]
) -> None:
    seen: set[int] = set()
    for seg in segments:
        for member in seg.member_ids:
            if member < 0 or member >= len(primitives):
                raise DetectorError(f"segment references unknown primitive {member}")
            if member in seen:
                raise DetectorError(f"primitive {member} assigned to two segments")
            seen.add(member)
            cx, cy = primitives[member].bbox.center
            grown = BoundingBox(
                max(0.0, seg.bbox.x_min - 0.5),
                max(0.0, seg.bbox.y_min - 0.5),
                seg.bbox.x_max + 0.5,
                seg.bbox.y_max + 0.5,
            )
            if not grown.contains_point(cx, cy):
                raise DetectorError(
                    f"primitive {member} center ({cx}, {cy}) lies outside its segment"
                )
    if len(seen) != len(primitives):
        raise DetectorError(
            f"detector covered {len(seen)} of {len(primitives)} primitives"
        )


def linearize(
    pages: Sequence[PageGeometry],
    primitives: Sequence[TextPrimitive],
    detector: SegmentDetector | None = None,
    row_tolerance: float = 10.0,
    y_tolerance_ratio: float = 0.6,
) -> IndexedDocument:
    """Detect, order, and flatten everything into one indexed document.

    The output is independent of input primitive order: primitives are
    first brought into a canonical (page, y, x, text) order, so exact
    coordinate ties resolve by text content.
    """
    detector = detector or GeometricCutDetector()
    page_list = sorted(pages, key=lambda p: p.page)
    if len({p.page for p in page_list}) != len(page_list):
        raise InvalidGeometry("duplicate page index in page geometry list")
    known_pages = {p.page for p in page_list}
    for prim in primitives:
        if prim.page not in known_pages:
            raise InvalidGeometry(f"primitive on page {prim.page} has no page geometry")

    canonical = sorted(primitives, key=_canonical_key)
    offsets: dict[int, int] = {}
    by_page: dict[int, list[TextPrimitive]] = {}
    for position, prim in enumerate(canonical):
        if prim.page not in by_page:
            offsets[prim.page] = position
        by_page.setdefault(prim.page, []).append(prim)

    lines: list[IndexedLine] = []
    segment_ordinal = 0
    for page in page_list:
        page_prims = by_page.get(page.page, [])
        if not page_prims:
            continue
        try:
            segments = detector.detect(page, page_prims)
        except DetectorError:
            raise
        except Exception as exc:
            raise DetectorError(f"detector failed on page {page.page}: {exc}") from exc
        _check_partition(segments, page_prims)
        base = offsets[page.page]
        for seg in order_segments(segments, row_tolerance):
            members = [page_prims[i] for i in seg.member_ids]
            for line in group_lines(seg, members, y_tolerance_ratio):
                lines.append(
                    replace(
                        line,
                        index=len(lines),
                        segment_ordinal=segment_ordinal,
                        source_primitive_ids=tuple(
                            base + seg.member_ids[j] for j in line.source_primitive_ids
                        ),
                    )
                )
            segment_ordinal += 1

    page_count = (max(known_pages) + 1) if page_list else 0
    return IndexedDocument(lines=tuple(lines), page_count=page_count)
