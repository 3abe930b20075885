"""
schemas/errors.py

Every error raised by the toolkit derives from GlueError (a ValueError), and
its message starts with a bracketed tag such as `[PARSE ERROR]`.
"""
from __future__ import annotations

from typing import Any, Iterable, List, Optional, Sequence


class GlueError(ValueError):
    """Base class for toolkit errors."""


class LTSError(GlueError):
    pass


class CollisionError(GlueError):
    pass


class OpenSystemError(GlueError):
    def __init__(self, message: str, labels: Sequence[Any] = ()):
        super().__init__(message)
        self.labels = tuple(labels)


class ParseError(GlueError):
    """A text input could not be read. Carries position and expected tokens."""

    def __init__(
        self,
        message: str,
        line: Optional[int] = None,
        column: Optional[int] = None,
        expected: Iterable[str] = (),
        source: str = "<text>",
    ):
        self.line = line
        self.column = column
        self.expected = sorted(set(expected))
        self.source = source
        where = f"{source}:{line}:{column}" if line is not None else source
        detail = f" (expected one of: {', '.join(self.expected)})" if self.expected else ""
        super().__init__(f"[PARSE ERROR] {where}: {message}{detail}")


class MscSyntaxError(ParseError):
    pass


class SemanticError(ParseError):
    pass


class UnknownInstance(GlueError):
    pass


class NotConnected(GlueError):
    pass


class ArchitectureError(GlueError):
    def __init__(self, issues: List[dict]):
        self.issues = list(issues)
        lines = "; ".join(f"{i['code']} {i['message']}" for i in self.issues)
        super().__init__(f"[ARCH ERROR] {len(self.issues)} violation(s): {lines}")


class ConformanceError(GlueError):
    def __init__(self, verdict: Any):
        self.verdict = verdict
        super().__init__(f"[CONFORMANCE ERROR] enhancement does not reflect the coordinator: {verdict.detail}")


class DeadlockError(GlueError):
    def __init__(self, state: Any, trace: Sequence[Any]):
        self.state = state
        self.trace = tuple(trace)
        shown = " ".join(str(label) for label in self.trace) or "<empty>"
        super().__init__(f"[DEADLOCK ERROR] glue reaches a non-final sink via: {shown}")


class ScriptError(GlueError):
    pass


class EnhancementError(GlueError):
    pass
