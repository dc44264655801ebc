"""Exception hierarchy shared across the toolkit."""


class XlprojError(Exception):
    """Base class for all toolkit errors."""


class MalformedLine(XlprojError):
    """A standoff line does not have the expected tab structure."""


class OffsetOutOfRange(XlprojError):
    """An annotation span falls outside its document."""


class SurfaceMismatch(XlprojError):
    """The surface text on a T-line differs from the document slice."""


class DanglingNote(XlprojError):
    """A note line references an unknown T-id."""


class InvalidAnnotation(XlprojError):
    """An annotation violates its own invariants."""


class CorpusIoError(XlprojError):
    """A corpus file or directory could not be read or written."""


class DimensionMismatch(XlprojError):
    """Vectors of different dimensions were combined."""


class BackendUnavailable(XlprojError):
    """The embedding backend could not be reached or is still loading."""


class ProtocolError(XlprojError):
    """The embedding backend violated the wire protocol."""


class BatchTooLarge(XlprojError):
    """The embedding backend rejected a batch as too large."""


class MalformedReport(XlprojError):
    """A projection report TSV could not be parsed."""


class MalformedMapping(XlprojError):
    """A terminology mapping file could not be parsed."""


class UnknownScheme(XlprojError):
    """The requested terminology scheme does not occur in the corpus."""


class ConfigError(XlprojError):
    """A pipeline configuration file contains unknown or invalid keys."""
