"""Exception hierarchy shared across the toolkit."""


class ActionEvalError(Exception):
    """Base class for all errors raised by this package."""


class ParseError(ActionEvalError):
    """A CSV row could not be parsed in strict mode.

    Carries the 1-based line number and the rejection reason so callers
    can point the user at the offending row.
    """

    def __init__(self, message: str, *, line: int | None = None, reason: str | None = None):
        super().__init__(message)
        self.line = line
        self.reason = reason


class VocabularyError(ActionEvalError):
    """Vocabulary file violates its invariants (duplicate id/name, empty, ...)."""


class SerializeError(ActionEvalError):
    """A record cannot be rendered to the CSV schema (e.g. comma in a field)."""


class PromptError(ActionEvalError):
    """Prompt template or prompt bank violates its invariants."""


class ScheduleError(ActionEvalError):
    """Keyframe schedule configuration or video list is invalid."""


class EvaluationError(ActionEvalError):
    """Evaluation inputs are inconsistent (e.g. detection with unknown class)."""


class ReportError(ActionEvalError):
    """Report rendering was asked for something the report does not contain."""
