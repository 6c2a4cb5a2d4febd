"""Exception hierarchy shared by every toolkit module."""

from typing import Optional


class RasError(ValueError):
    """Base class for all domain errors raised by the toolkit."""


class RecordError(RasError):
    """An error tied to one input record (id and/or line number)."""

    def __init__(
        self,
        message: str,
        record_id: Optional[str] = None,
        line: Optional[int] = None,
    ) -> None:
        self.record_id = record_id
        self.line = line
        where = []
        if line is not None:
            where.append(f"line {line}")
        if record_id is not None:
            where.append(f"id={record_id!r}")
        super().__init__(f"{message} ({', '.join(where)})" if where else message)
        self.reason = message


class EmptyReferenceError(RecordError):
    """Reference has no words (N must be > 0)."""


class PlaceholderInReferenceError(RecordError):
    """Reference contains the placeholder token."""


class PlaceholderInPlainAlignmentError(RecordError):
    """Standard WER alignment was given a sequence containing placeholders."""


class InvalidTokenError(RecordError):
    """A word is empty or contains whitespace."""


class InvalidAlphaError(RasError):
    """Abstention cost factor outside the open interval (0, 1)."""


class EmptyCorpusError(RasError):
    """A corpus-level operation received no usable rows."""


class EmptyRecordsError(RasError):
    """Calibration received no preference records."""


class InvalidLambdaError(RasError):
    """Tie regularization weight is negative."""


class BarOutOfRangeError(RasError):
    """Confidence bar outside [0, 1]."""


class EmptyGridError(RasError):
    """A sweep received an empty grid."""


class CorpusParseError(RecordError):
    """A corpus line is not a valid record."""


class DuplicateIdError(RecordError):
    """The same id appears twice in one corpus or request."""


class ConfidenceLengthMismatchError(RecordError):
    """Confidence list length differs from the hypothesis word count."""


class MalformedRequestError(RasError):
    """A service request body failed validation as a whole."""


class EmptyGroupError(MalformedRequestError):
    """An advantage group has no rewards."""
