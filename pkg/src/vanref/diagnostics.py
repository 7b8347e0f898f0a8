"""Positioned diagnostics shared by the parser, normalizer, scanner and CLI."""

from __future__ import annotations

from dataclasses import dataclass

ERROR = "error"
WARNING = "warning"


@dataclass(frozen=True)
class Diagnostic:
    severity: str
    code: str
    message: str
    offset: int | None = None

    def render(self, source: str | None = None, path: str | None = None) -> str:
        """Format as ``path:line:col: severity: message`` for terminal output."""
        prefix = path or ""
        if self.offset is not None and source is not None:
            line, col = line_col(source, self.offset)
            prefix += f":{line}:{col}"
        elif self.offset is not None:
            prefix += f":@{self.offset}"
        if prefix:
            prefix += ": "
        return f"{prefix}{self.severity}: {self.message} [{self.code}]"


def error(code: str, message: str, offset: int | None = None) -> Diagnostic:
    return Diagnostic(ERROR, code, message, offset)


def warning(code: str, message: str, offset: int | None = None) -> Diagnostic:
    return Diagnostic(WARNING, code, message, offset)


def line_col(source: str, offset: int) -> tuple[int, int]:
    """1-based line and column of a character offset."""
    offset = max(0, min(offset, len(source)))
    line = source.count("\n", 0, offset) + 1
    last_nl = source.rfind("\n", 0, offset)
    return line, offset - last_nl
