"""
Content intake: OCR dispatch regions and metadata/OCR stream fusion.

The actual PDF metadata reader and OCR engine live behind external
adapters that deliver positioned text primitives as JSONL, one object
per line:

    {"text": "...", "bbox": [x0, y0, x1, y1], "page": 0, "source": "metadata"}

This module only decides where OCR should run (the parts of a page not
already covered by metadata text) and how the two streams merge into a
single deduplicated primitive set.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

from .doc_model import BoundingBox, TextPrimitive
from .errors import InvalidGeometry


@dataclass(frozen=True)
class PageGeometry:
    """Size of one page in points."""

    page: int
    width: float
    height: float

    def __post_init__(self) -> None:
        if self.width <= 0 or self.height <= 0:
            raise InvalidGeometry(
                f"page {self.page} has non-positive size {self.width}x{self.height}"
            )
        if self.page < 0:
            raise InvalidGeometry(f"page index must be >= 0, got {self.page}")

    def to_dict(self) -> dict:
        return {"page": self.page, "width": self.width, "height": self.height}

    @classmethod
    def from_dict(cls, data: dict) -> "PageGeometry":
        return cls(int(data["page"]), float(data["width"]), float(data["height"]))


@dataclass(frozen=True)
class OcrRegion:
    """A rectangle of the page that should be sent to an OCR engine."""

    page: int
    bbox: BoundingBox


def compute_ocr_regions(
    page: PageGeometry,
    metadata_boxes: Sequence[BoundingBox],
    grid_resolution: float = 4.0,
    min_region_area: float = 400.0,
) -> list[OcrRegion]:
    """Rectangles of the page grid not covered by any metadata box.

    The page is rasterized into ``grid_resolution`` point cells; a cell
    counts as covered when any metadata box overlaps it with positive
    area.  Uncovered cells are merged greedily row-major into maximal
    rectangles; rectangles smaller than ``min_region_area`` are dropped.
    """
    if page.width <= 0 or page.height <= 0:
        raise InvalidGeometry(f"page {page.page} has zero size")
    if grid_resolution <= 0:
        raise InvalidGeometry(f"grid resolution must be > 0, got {grid_resolution}")

    nx = max(1, int(-(-page.width // grid_resolution)))
    ny = max(1, int(-(-page.height // grid_resolution)))

    covered = [[False] * nx for _ in range(ny)]
    for box in metadata_boxes:
        # Cell range the box overlaps with positive area, clipped to the page.
        ix0 = max(0, int(box.x_min // grid_resolution))
        iy0 = max(0, int(box.y_min // grid_resolution))
        ix1 = min(nx - 1, int(-(-box.x_max // grid_resolution)) - 1)
        iy1 = min(ny - 1, int(-(-box.y_max // grid_resolution)) - 1)
        if box.area == 0:
            continue
        for iy in range(iy0, iy1 + 1):
            row = covered[iy]
            for ix in range(ix0, ix1 + 1):
                cell_x0 = ix * grid_resolution
                cell_y0 = iy * grid_resolution
                if box.x_min < cell_x0 + grid_resolution and box.x_max > cell_x0 \
                        and box.y_min < cell_y0 + grid_resolution and box.y_max > cell_y0:
                    row[ix] = True

    consumed = [[False] * nx for _ in range(ny)]
    regions: list[OcrRegion] = []
    for iy in range(ny):
        ix = 0
        while ix < nx:
            if covered[iy][ix] or consumed[iy][ix]:
                ix += 1
                continue
            x_end = ix
            while x_end + 1 < nx and not covered[iy][x_end + 1] and not consumed[iy][x_end + 1]:
                x_end += 1
            y_end = iy
            while y_end + 1 < ny and all(
                not covered[y_end + 1][k] and not consumed[y_end + 1][k]
                for k in range(ix, x_end + 1)
            ):
                y_end += 1
            for yy in range(iy, y_end + 1):
                for xx in range(ix, x_end + 1):
                    consumed[yy][xx] = True
            bbox = BoundingBox(
                ix * grid_resolution,
                iy * grid_resolution,
                min((x_end + 1) * grid_resolution, page.width),
                min((y_end + 1) * grid_resolution, page.height),
            )
            if bbox.area >= min_region_area:
                regions.append(OcrRegion(page.page, bbox))
            ix = x_end + 1
    return regions


def fuse_content(
    metadata: Sequence[TextPrimitive],
    ocr: Sequence[TextPrimitive],
    overlap_threshold: float = 0.5,
) -> list[TextPrimitive]:
    """Merge metadata and OCR primitives into one stream.

    Metadata text is authoritative wherever it exists: every metadata
    primitive is kept, and an OCR primitive is dropped exactly when the
    intersection over its own area with any same-page metadata primitive
    exceeds ``overlap_threshold``.  Output order is input order
    (metadata first, then surviving OCR); ordering documents is the
    layout stage's job.
    """
    fused = list(metadata)
    by_page: dict[int, list[TextPrimitive]] = {}
    for prim in metadata:
        by_page.setdefault(prim.page, []).append(prim)
    for prim in ocr:
        own_area = prim.bbox.area
        duplicate = False
        if own_area > 0:
            for meta in by_page.get(prim.page, ()):
                if prim.bbox.intersection_area(meta.bbox) / own_area > overlap_threshold:
                    duplicate = True
                    break
        if not duplicate:
            fused.append(prim)
    return fused


def read_primitives_jsonl(path: str | Path) -> list[TextPrimitive]:
    primitives = []
    with open(path, "r", encoding="utf-8") as handle:
        for line in handle:
            line = line.strip()
            if line:
                primitives.append(TextPrimitive.from_dict(json.loads(line)))
    return primitives


def write_primitives_jsonl(path: str | Path, primitives: Iterable[TextPrimitive]) -> None:
    with open(path, "w", encoding="utf-8") as handle:
        for prim in primitives:
            handle.write(json.dumps(prim.to_dict(), ensure_ascii=False) + "\n")


def read_pages_json(path: str | Path) -> list[PageGeometry]:
    with open(path, "r", encoding="utf-8") as handle:
        data = json.load(handle)
    return [PageGeometry.from_dict(entry) for entry in data]


def write_pages_json(path: str | Path, pages: Iterable[PageGeometry]) -> None:
    with open(path, "w", encoding="utf-8") as handle:
        json.dump([page.to_dict() for page in pages], handle, ensure_ascii=False, indent=2)
