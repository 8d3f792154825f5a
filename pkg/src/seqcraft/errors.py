"""Exception hierarchy.

``TacticFailure`` is the only *recoverable* failure: tacticals such as
``EORELSE`` catch it and try something else.  Everything else (sort errors,
malformed input, kernel misuse) is a hard error and propagates.
"""


class EngineError(Exception):
    """Base class for all engine errors."""


class SignatureError(EngineError):
    """Invalid signature: duplicate names, undeclared sorts, bad display info."""


class UnknownOperatorError(EngineError):
    """A term refers to an operator the signature does not declare."""


class SortError(EngineError):
    """A term, substitution or judgment violates the sort discipline."""


class ParseError(EngineError):
    """Lexical or syntactic error, with position information."""

    def __init__(self, message: str, line: int | None = None, col: int | None = None):
        self.line = line
        self.col = col
        where = ""
        if line is not None:
            where = f" at line {line}" + (f", column {col}" if col is not None else "")
        super().__init__(message + where)


class KernelError(EngineError):
    """Misuse of the proof kernel (bad subgoal index, qed with open goals, ...)."""


class TacticFailure(EngineError):
    """Recoverable no-match failure of a tactic. Caught by EORELSE/EREPEAT."""


class ScriptError(EngineError):
    """A proof script failed; carries the failing step number."""

    def __init__(self, message: str, step: int | None = None):
        self.step = step
        super().__init__(message)
