"""Exception hierarchy for the wtbc package."""


class WTBCError(Exception):
    """Base class for all errors raised by this package."""


class IngestionError(WTBCError):
    """Input could not be read or decoded (message names the source and offset)."""


class SentinelCollisionError(IngestionError):
    """A document contains the reserved document-separator glyph."""


class OutOfRangeError(WTBCError):
    """A position or document id lies outside the indexed range."""


class NotFoundError(WTBCError):
    """A requested occurrence does not exist (fewer matches than asked for)."""


class UnknownWordError(WTBCError):
    """A word is not present in the vocabulary."""


class CorruptStreamError(WTBCError):
    """A byte stream ended mid-codeword or is otherwise malformed."""


class CapacityError(WTBCError):
    """The vocabulary does not fit within the maximum codeword length."""


class IndexFormatError(WTBCError):
    """An index file has a bad magic, version, flag set, or truncated section."""
