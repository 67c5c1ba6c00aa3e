"""Exception types raised deliberately anywhere in the pipeline."""


class ResumeFlowError(Exception):
    """Base class for every error this package raises on purpose."""


class InvalidGeometry(ResumeFlowError):
    """A page, box, or coordinate set is degenerate or out of bounds."""


class RangeOutOfBounds(ResumeFlowError):
    """A line range does not fit inside the document it is resolved against."""


class DetectorError(ResumeFlowError):
    """A segment detector failed or returned an invalid partition."""


class EmptyDocument(ResumeFlowError):
    """An operation that needs document text was given an empty document."""


class NoJsonFound(ResumeFlowError):
    """Raw completion text contains no ``{ ... }`` block at all."""


class MalformedJson(ResumeFlowError):
    """The brace-delimited block was found but does not parse as JSON."""


class SchemaMismatch(ResumeFlowError):
    """Parsed JSON lacks the expected top-level key or has the wrong shape."""


class BackendUnavailable(ResumeFlowError):
    """Every extraction sub-task failed at the transport level."""


class EmptyPool(ResumeFlowError):
    """A fixture content pool that must be non-empty is empty."""
