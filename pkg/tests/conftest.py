import random

import pytest
from hypothesis import settings

from resumeflow.doc_model import (
    BoundingBox,
    IndexedDocument,
    IndexedLine,
    TextPrimitive,
)

settings.register_profile("ci", deadline=None, max_examples=60)
settings.load_profile("ci")


def make_doc(texts):
    """Indexed document with one synthetic line per text."""
    lines = tuple(
        IndexedLine(
            index=i,
            text=text,
            bbox=BoundingBox(50.0, 40.0 + 14.0 * i, 300.0, 50.0 + 14.0 * i),
            segment_ordinal=0,
        )
        for i, text in enumerate(texts)
    )
    return IndexedDocument(lines=lines, page_count=1)


def make_prim(text, x0, y0, x1=None, y1=None, page=0):
    if x1 is None:
        x1 = x0 + 5.2 * len(text)
    if y1 is None:
        y1 = y0 + 10.0
    return TextPrimitive(text=text, bbox=BoundingBox(x0, y0, x1, y1), page=page)


@pytest.fixture
def rng():
    return random.Random(1234)
