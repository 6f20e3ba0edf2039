"""
Source spans, diagnostic codes and the exception hierarchy shared by every stage.
"""
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, List, Optional


class DiagnosticCode(str, Enum):
    """Closed set of stable diagnostic codes (the negative corpus relies on these)"""
    SCOPE_ERROR = "ScopeError"
    TYPE_MISMATCH = "TypeMismatch"
    NOT_A_FUNCTION = "NotAFunction"
    NOT_A_PAIR = "NotAPair"
    CRISPNESS_VIOLATION = "CrispnessViolation"
    FLAT_ON_COHESIVE_TYPE = "FlatOnCohesiveType"
    SHARP_ELIM_COHESIVE = "SharpElimCohesive"
    UNIVERSE_ERROR = "UniverseError"
    MOTIVE_MISMATCH = "MotiveMismatch"
    REWRITE_ILL_FORMED = "RewriteIllFormed"
    DUPLICATE_NAME = "DuplicateName"
    FUEL_EXHAUSTED = "FuelExhausted"

    @classmethod
    def parse(cls, text: str) -> "DiagnosticCode":
        """Look up a code by its stable name, e.g. ``CrispnessViolation``."""
        for code in cls:
            if code.value == text:
                return code
        raise ValueError(f"Unknown diagnostic code: {text}")


@dataclass(frozen=True)
class SourceSpan:
    """A 1-based line/column range inside one file"""
    file: str
    start_line: int
    start_col: int
    end_line: int
    end_col: int

    def merge(self, other: "SourceSpan") -> "SourceSpan":
        return SourceSpan(self.file, self.start_line, self.start_col, other.end_line, other.end_col)

    def __str__(self) -> str:
        return f"{self.file}:{self.start_line}:{self.start_col}"


@dataclass(frozen=True)
class ContextEntry:
    """One line of a telescope dump attached to a diagnostic"""
    name: str
    type: str
    polarity: str

    def to_dict(self) -> Dict[str, str]:
        return {"name": self.name, "type": self.type, "polarity": self.polarity}


@dataclass
class Diagnostic:
    """Structured error with a stable code, a location and the telescope it arose in"""
    code: DiagnosticCode
    message: str
    span: Optional[SourceSpan] = None
    context: List[ContextEntry] = field(default_factory=list)

    def to_dict(self) -> Dict[str, Any]:
        """
        Serialize with a fixed field order.

        Returns:
            ``{code, message, file, line, col, context}``
        """
        return {
            "code": self.code.value,
            "message": self.message,
            "file": self.span.file if self.span else None,
            "line": self.span.start_line if self.span else None,
            "col": self.span.start_col if self.span else None,
            "context": [entry.to_dict() for entry in self.context],
        }

    def render(self) -> str:
        """Human-readable form: ``file:line:col: Code: message`` plus the context dump."""
        where = f"{self.span}: " if self.span else ""
        lines = [f"{where}{self.code.value}: {self.message}"]
        for entry in self.context:
            sep = "::" if entry.polarity == "crisp" else ":"
            lines.append(f"    {entry.name} {sep} {entry.type}")
        return "\n".join(lines)


# ============================================================================
# Exceptions
# ============================================================================

class CohesiveKernelError(Exception):
    """Base exception for the checker"""
    pass


class ParseError(CohesiveKernelError):
    """Raised when source text cannot be tokenized or parsed"""

    def __init__(self, message: str, span: Optional[SourceSpan] = None, expected: Optional[str] = None):
        self.message = message
        self.span = span
        self.expected = expected
        where = f"{span}: " if span else ""
        hint = f" (expected {expected})" if expected else ""
        super().__init__(f"{where}{message}{hint}")

    def to_dict(self) -> Dict[str, Any]:
        return {
            "code": "ParseError",
            "message": self.message if not self.expected else f"{self.message} (expected {self.expected})",
            "file": self.span.file if self.span else None,
            "line": self.span.start_line if self.span else None,
            "col": self.span.start_col if self.span else None,
            "context": [],
        }


class CheckError(CohesiveKernelError):
    """Raised by name resolution and the kernel; wraps a Diagnostic"""

    def __init__(self, code: DiagnosticCode, message: str, span: Optional[SourceSpan] = None,
                 context: Optional[List[ContextEntry]] = None):
        self.diagnostic = Diagnostic(code, message, span, list(context or []))
        super().__init__(f"{code.value}: {message}")

    @property
    def code(self) -> DiagnosticCode:
        return self.diagnostic.code

    @property
    def span(self) -> Optional[SourceSpan]:
        return self.diagnostic.span

    def locate(self, span: Optional[SourceSpan]) -> "CheckError":
        """Attach a span unless a more precise one is already present."""
        if self.diagnostic.span is None and span is not None:
            self.diagnostic.span = span
        return self


class InternalError(CohesiveKernelError):
    """Raised when an internal invariant is breached (never a user error)"""
    pass
