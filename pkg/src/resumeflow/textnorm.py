"""Shared text normalization used by source verification and field matching."""

from __future__ import annotations


def normalize_text(text: str) -> str:
    """Lowercase, replace punctuation with spaces, collapse whitespace.

    Punctuation is any character that is neither alphanumeric nor
    whitespace; replacing (rather than deleting) it keeps word
    boundaries intact, so "Zhang,San" and "Zhang San." normalize alike.
    """
    lowered = text.lower()
    cleaned = "".join(c if c.isalnum() or c.isspace() else " " for c in lowered)
    return " ".join(cleaned.split())
