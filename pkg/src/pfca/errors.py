"""Exception hierarchy shared by every pfca module."""

from __future__ import annotations


class PFCAError(Exception):
    """Base class for all errors raised by pfca."""


class InvalidIndex(PFCAError, IndexError):
    """An object or attribute index is outside the context."""


class InvalidParameter(PFCAError, ValueError):
    """A numeric or structural argument is outside its allowed domain."""


class TooLarge(PFCAError):
    """The enumerated side exceeds the configured power-set limit."""


class ParamsInfeasible(PFCAError):
    """No scheme parameters satisfy the noise budget under the size ceiling."""


class PlaintextOutOfRange(PFCAError, ValueError):
    """A message is not in [0, t)."""


class NoiseOverflow(PFCAError):
    """Tracked noise exceeds what centered decryption can tolerate."""


class ParamsMismatch(PFCAError):
    """Operands come from different keys or parameter sets."""


class LengthMismatch(PFCAError, ValueError):
    """Cipher vectors of different lengths were combined."""


class EmptyInput(PFCAError, ValueError):
    """An aggregate was requested over an empty collection."""


class IntegrityError(PFCAError):
    """A recovered concept disagrees with the cardinality the pipeline reported."""


class TranscriptViolation(PFCAError):
    """The decryption transcript shows a raw cell was decrypted."""


class VerificationFailure(PFCAError):
    """PFCA and classical FCA produced different concept sets."""

    def __init__(self, message: str, missing=(), extra=()):
        super().__init__(message)
        self.missing = tuple(missing)
        self.extra = tuple(extra)


class ParseError(PFCAError):
    """A context file is malformed."""

    def __init__(self, message: str, line: int | None = None, path: str | None = None):
        where = ""
        if path is not None:
            where = f"{path}:"
        if line is not None:
            where += f"{line}:"
        super().__init__(f"{where} {message}" if where else message)
        self.message = message
        self.line = line
        self.path = path


class ReportIOError(PFCAError, OSError):
    """A report or context file could not be written."""
