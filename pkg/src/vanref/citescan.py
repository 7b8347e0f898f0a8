"""Citation-key extraction and first-occurrence numbering for manuscripts."""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from .diagnostics import Diagnostic, warning
from .model import BibRecord

_CITE_RE = re.compile(r"\\cite\s*\{([^{}]*)\}")
_KEY_RE = re.compile(r"[A-Za-z0-9.:*+/_-]+")
_COMMENT_RE = re.compile(r"(?<!\\)%[^\n]*")


@dataclass(frozen=True)
class CitationIndex:
    """Cited keys in first-appearance order with their 1-based numbers."""

    keys: tuple[str, ...] = ()
    numbers: dict[str, int] = field(default_factory=dict)
    occurrences: tuple[tuple[str, int], ...] = ()
    diagnostics: tuple[Diagnostic, ...] = ()


def _blank_comments(text: str) -> str:
    """Replace %-to-EOL comments with spaces so offsets stay stable."""
    return _COMMENT_RE.sub(lambda m: " " * len(m.group(0)), text)


def scan_citations(text: str) -> CitationIndex:
    """Collect ``\\cite{...}`` keys and number them by first appearance.

    Comma-separated groups expand in place, incidental whitespace around
    keys is trimmed, and citations inside %-comments are ignored.  Empty
    groups and keys with characters outside the accepted set produce
    diagnostics rather than failures.
    """
    source = _blank_comments(text)
    ordered: list[str] = []
    numbers: dict[str, int] = {}
    occurrences: list[tuple[str, int]] = []
    diagnostics: list[Diagnostic] = []
    for match in _CITE_RE.finditer(source):
        group = match.group(1)
        offset = match.start()
        if not group.strip():
            diagnostics.append(warning(
                "empty-cite-group", "\\cite with no citation key", offset))
            continue
        for raw_key in group.split(","):
            key = raw_key.strip()
            if not key or not _KEY_RE.fullmatch(key):
                diagnostics.append(warning(
                    "malformed-key", f"malformed citation key {raw_key.strip()!r}",
                    offset))
                continue
            occurrences.append((key, offset))
            if key not in numbers:
                ordered.append(key)
                numbers[key] = len(ordered)
    return CitationIndex(
        keys=tuple(ordered),
        numbers=numbers,
        occurrences=tuple(occurrences),
        diagnostics=tuple(diagnostics),
    )


def resolve(index: CitationIndex,
            records: list[BibRecord]) -> tuple[list[tuple[int, BibRecord]], list[str]]:
    """Pair cited keys with database records, in citation-number order.

    Uncited records are excluded.  Missing keys are reported without
    renumbering: their numbers were already assigned in the manuscript, so
    gaps stay open.
    """
    by_key = {}
    for record in records:
        by_key.setdefault(record.key, record)
    resolved: list[tuple[int, BibRecord]] = []
    missing: list[str] = []
    for key in index.keys:
        record = by_key.get(key)
        if record is None:
            missing.append(key)
        else:
            resolved.append((index.numbers[key], record))
    return resolved, missing
