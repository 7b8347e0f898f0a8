"""Lexer and parser for BibTeX-style bibliography databases.

The grammar accepted is ``@type{key, name = value, ...}`` with brace-,
quote- or bare-delimited values, ``#`` concatenation, ``@string`` macros,
``@comment``/``@preamble`` blocks and ``%``-to-end-of-line comments between
entries.  Values are flattened to plain strings at parse time; delimiter
style never reaches later stages.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterator

from .diagnostics import Diagnostic, error, warning

# Month macros are predefined, like the standard BibTeX styles do.
MONTH_MACROS = {
    "jan": "January",
    "feb": "February",
    "mar": "March",
    "apr": "April",
    "may": "May",
    "jun": "June",
    "jul": "July",
    "aug": "August",
    "sep": "September",
    "oct": "October",
    "nov": "November",
    "dec": "December",
}

# Identifier characters follow BibTeX: anything but whitespace and the
# syntax characters below.  Citation keys may start with a digit ("21st").
_NAME_RE = re.compile(r"""[^\s"#%'(),={}]+""")
_TYPE_RE = re.compile(r"[A-Za-z]+")
_SPACE_RE = re.compile(r"\s*")
_KEY_BRACE_RE = re.compile(r"[^,\s{}]+")
_KEY_PAREN_RE = re.compile(r"[^,\s()]+")


class BibtexSyntaxError(ValueError):
    """Lexing failure; ``offset`` locates the problem in the input."""

    code = "syntax"

    def __init__(self, message: str, offset: int):
        super().__init__(message)
        self.offset = offset


class UnbalancedBraceError(BibtexSyntaxError):
    code = "unbalanced-brace"


class UnterminatedStringError(BibtexSyntaxError):
    code = "unterminated-string"


class UnexpectedEOFError(BibtexSyntaxError):
    code = "unexpected-eof"


class TokenKind(Enum):
    ENTRY = "entry"      # value is the lowercased entry type
    NAME = "name"        # key, field name or macro reference
    NUMBER = "number"    # bare digit run
    VALUE = "value"      # brace- or quote-delimited text, delimiters stripped
    EQUALS = "equals"
    HASH = "hash"
    COMMA = "comma"
    CLOSE = "close"      # end of an entry body


@dataclass(frozen=True)
class Token:
    kind: TokenKind
    value: str
    offset: int


@dataclass(frozen=True)
class RawEntry:
    """One database record with verbatim (macro-expanded) field values."""

    entry_type: str
    key: str
    fields: dict[str, str]
    span: tuple[int, int] = (0, 0)


@dataclass
class Database:
    entries: list[RawEntry] = field(default_factory=list)
    macros: dict[str, str] = field(default_factory=dict)
    diagnostics: list[Diagnostic] = field(default_factory=list)

    def get(self, key: str) -> RawEntry | None:
        for entry in self.entries:
            if entry.key == key:
                return entry
        return None


def _skip_space(text: str, i: int) -> int:
    if i < len(text) and text[i] in " \t\n\r":
        return _SPACE_RE.match(text, i).end()
    return i


def _skip_junk(text: str, i: int) -> int:
    """Advance past inter-entry free text, honoring %-to-EOL comments."""
    n = len(text)
    while i < n:
        at = text.find("@", i)
        pct = text.find("%", i)
        if pct == -1 or (at != -1 and at < pct):
            return at if at != -1 else n
        nl = text.find("\n", pct)
        if nl == -1:
            return n
        i = nl + 1
    return n


_BRACE_JUMP_RE = re.compile(r"[{}]")
_QUOTE_JUMP_RE = re.compile(r'["{}]')


def _scan_braced(text: str, i: int) -> tuple[str, int]:
    """Scan text after an opening brace up to its matching close brace."""
    start = i
    depth = 0
    while True:
        m = _BRACE_JUMP_RE.search(text, i)
        if m is None:
            raise UnbalancedBraceError("brace opened here is never closed", start - 1)
        if m.group(0) == "{":
            depth += 1
        elif depth == 0:
            return text[start:m.start()], m.end()
        else:
            depth -= 1
        i = m.end()


def _scan_quoted(text: str, i: int) -> tuple[str, int]:
    """Scan text after an opening quote; braces may nest inside."""
    start = i
    depth = 0
    while True:
        m = _QUOTE_JUMP_RE.search(text, i)
        if m is None:
            raise UnterminatedStringError(
                "string opened here is never closed", start - 1)
        c = m.group(0)
        if c == '"':
            if depth == 0:
                return text[start:m.start()], m.end()
        elif c == "{":
            depth += 1
        else:
            depth -= 1
            if depth < 0:
                raise UnbalancedBraceError("unexpected '}' inside string", m.start())
        i = m.end()


def tokenize(text: str) -> Iterator[Token]:
    """Yield the token stream of a ``.bib`` source.

    Inter-entry free text is skipped per BibTeX convention.  Raises
    :class:`BibtexSyntaxError` subclasses on unbalanced braces,
    unterminated strings, or input that ends inside an entry.
    """
    i = 0
    n = len(text)
    while True:
        i = _skip_junk(text, i)
        if i >= n:
            return
        at = i
        i = _skip_space(text, i + 1)
        m = _TYPE_RE.match(text, i)
        if m is None:
            continue  # stray '@' counts as junk
        entry_type = m.group(0).lower()
        i = _skip_space(text, m.end())
        if entry_type == "comment":
            continue  # BibTeX ignores everything after @comment
        if i >= n or text[i] not in "{(":
            continue  # '@type' without a body: junk
        close = "}" if text[i] == "{" else ")"
        yield Token(TokenKind.ENTRY, entry_type, at)
        i += 1
        while True:
            i = _skip_space(text, i)
            if i >= n:
                raise UnexpectedEOFError("input ended inside an entry", n)
            c = text[i]
            if c == close:
                yield Token(TokenKind.CLOSE, c, i)
                i += 1
                break
            if c == ",":
                yield Token(TokenKind.COMMA, c, i)
                i += 1
            elif c == "=":
                yield Token(TokenKind.EQUALS, c, i)
                i += 1
            elif c == "#":
                yield Token(TokenKind.HASH, c, i)
                i += 1
            elif c == "{":
                value, j = _scan_braced(text, i + 1)
                yield Token(TokenKind.VALUE, value, i)
                i = j
            elif c == '"':
                value, j = _scan_quoted(text, i + 1)
                yield Token(TokenKind.VALUE, value, i)
                i = j
            else:
                m = _NAME_RE.match(text, i)
                if m is None:
                    raise BibtexSyntaxError(f"unexpected character {c!r}", i)
                word = m.group(0)
                kind = TokenKind.NUMBER if word.isdigit() else TokenKind.NAME
                yield Token(kind, word, i)
                i = m.end()


_WS_RUN_RE = re.compile(r"\s+")


def _flatten(value: str) -> str:
    return _WS_RUN_RE.sub(" ", value).strip()


class _Parser:
    """Recursive-descent parser with per-entry error recovery."""

    def __init__(self, text: str, macros: dict[str, str] | None = None):
        self.text = text
        self.db = Database(macros={**MONTH_MACROS, **(macros or {})})
        self._seen_keys: set[str] = set()

    def run(self) -> Database:
        pos = 0
        n = len(self.text)
        while pos < n:
            pos = _skip_junk(self.text, pos)
            if pos >= n:
                break
            try:
                pos = self._parse_block(pos)
            except BibtexSyntaxError as exc:
                self.db.diagnostics.append(error(
                    "malformed-entry",
                    f"entry skipped: {exc}",
                    pos,
                ))
                resume = self.text.find("@", max(pos, exc.offset) + 1)
                pos = n if resume == -1 else resume
        return self.db

    # -- block-level parsing

    def _parse_block(self, at: int) -> int:
        text = self.text
        i = _skip_space(text, at + 1)
        m = _TYPE_RE.match(text, i)
        if m is None:
            return at + 1  # stray '@': junk
        entry_type = m.group(0).lower()
        i = _skip_space(text, m.end())
        if entry_type == "comment":
            return i
        if i >= len(text) or text[i] not in "{(":
            raise BibtexSyntaxError(f"expected '{{' after @{entry_type}", i)
        close = "}" if text[i] == "{" else ")"
        i = _skip_space(text, i + 1)
        if entry_type == "string":
            return self._parse_string(i, close)
        if entry_type == "preamble":
            _, i = self._parse_value(i)
            return self._expect(i, close)
        return self._parse_entry(entry_type, i, close, at)

    def _parse_string(self, i: int, close: str) -> int:
        text = self.text
        m = _NAME_RE.match(text, i)
        if m is None or m.group(0).isdigit():
            raise BibtexSyntaxError("expected macro name in @string", i)
        name = m.group(0).lower()
        i = self._expect(_skip_space(text, m.end()), "=")
        value, i = self._parse_value(_skip_space(text, i))
        if name in self.db.macros and name not in MONTH_MACROS:
            self.db.diagnostics.append(
                warning("macro-redefined", f"macro '{name}' redefined", i))
        self.db.macros[name] = value
        return self._expect(_skip_space(text, i), close)

    def _parse_entry(self, entry_type: str, i: int, close: str, at: int) -> int:
        text = self.text
        key_re = _KEY_PAREN_RE if close == ")" else _KEY_BRACE_RE
        m = key_re.match(text, i)
        if m is None:
            raise BibtexSyntaxError("missing citation key", i)
        key = m.group(0)
        i = _skip_space(text, m.end())
        fields: dict[str, str] = {}
        while True:
            if i >= len(text):
                raise UnexpectedEOFError("input ended inside an entry", len(text))
            if text[i] == close:
                i += 1
                break
            i = self._expect(i, ",")
            i = _skip_space(text, i)
            if i < len(text) and text[i] == close:  # trailing comma
                i += 1
                break
            name_at = i
            m = _NAME_RE.match(text, i)
            if m is None:
                raise BibtexSyntaxError("expected field name", i)
            name = m.group(0).lower()
            i = self._expect(_skip_space(text, m.end()), "=")
            value, i = self._parse_value(_skip_space(text, i))
            i = _skip_space(text, i)
            if name in fields:
                self.db.diagnostics.append(warning(
                    "duplicate-field",
                    f"duplicate field '{name}' in entry '{key}' ignored",
                    name_at,
                ))
            else:
                fields[name] = value
        if not entry_type.isascii() or not entry_type.isalpha():
            raise BibtexSyntaxError(f"invalid entry type '{entry_type}'", at)
        if key in self._seen_keys:
            self.db.diagnostics.append(warning(
                "duplicate-key",
                f"duplicate entry key '{key}'; first occurrence kept",
                at,
            ))
        else:
            self._seen_keys.add(key)
            self.db.entries.append(
                RawEntry(entry_type, key, fields, span=(at, i)))
        return i

    # -- value parsing (with '#' concatenation and macro expansion)

    def _parse_value(self, i: int) -> tuple[str, int]:
        value, i = self._parse_piece(i)
        while True:
            j = _skip_space(self.text, i)
            if j < len(self.text) and self.text[j] == "#":
                piece, i = self._parse_piece(_skip_space(self.text, j + 1))
                value += piece
            else:
                return _flatten(value), i

    def _parse_piece(self, i: int) -> tuple[str, int]:
        text = self.text
        if i >= len(text):
            raise UnexpectedEOFError("input ended where a value was expected", len(text))
        c = text[i]
        if c == "{":
            return _scan_braced(text, i + 1)
        if c == '"':
            return _scan_quoted(text, i + 1)
        m = _NAME_RE.match(text, i)
        if m is None:
            raise BibtexSyntaxError(f"expected a value, found {c!r}", i)
        word = m.group(0)
        if word.isdigit():
            return word, m.end()
        expansion = self.db.macros.get(word.lower())
        if expansion is None:
            self.db.diagnostics.append(warning(
                "undefined-macro", f"undefined macro '{word}'", i))
            expansion = ""
        return expansion, m.end()

    def _expect(self, i: int, char: str) -> int:
        i = _skip_space(self.text, i)
        if i >= len(self.text):
            raise UnexpectedEOFError(f"expected '{char}' before end of input", len(self.text))
        if self.text[i] != char:
            raise BibtexSyntaxError(f"expected '{char}', found {self.text[i]!r}", i)
        return i + 1


def parse_database(text: str, macros: dict[str, str] | None = None) -> Database:
    """Parse a ``.bib`` source into entries, a macro table and diagnostics.

    Malformed entries are skipped with a positioned diagnostic and parsing
    continues at the next ``@``.  Duplicate keys keep the first occurrence.
    Never raises on string input.
    """
    return _Parser(text, macros).run()


def serialize_entry(entry: RawEntry) -> str:
    lines = [f"@{entry.entry_type}{{{entry.key},"]
    for name, value in entry.fields.items():
        lines.append(f"  {name} = {{{value}}},")
    lines.append("}")
    return "\n".join(lines)


def serialize_database(entries: list[RawEntry]) -> str:
    """Render entries back to ``.bib`` text; reparsing yields equal fields."""
    return "\n\n".join(serialize_entry(e) for e in entries) + "\n"


_CONTROL_WORD_RE = re.compile(r"[A-Za-z]+\*?")
_ESCAPES = {"&": "&", "%": "%", "_": "_", "#": "#", "$": "$", "{": "{", "}": "}"}


def strip_latex(value: str, diagnostics: list[Diagnostic] | None = None) -> str:
    """Reduce a raw field value to plain text.

    Handles the escape list (``\\&`` and friends), ``--`` outside math,
    and brace groups, which are unwrapped with their content preserved.
    Unknown control sequences are dropped; each adds a diagnostic when a
    sink list is supplied.  Never fails.
    """
    out: list[str] = []
    i = 0
    n = len(value)
    in_math = False
    while i < n:
        c = value[i]
        if c == "\\":
            nxt = value[i + 1] if i + 1 < n else ""
            if nxt in _ESCAPES:
                out.append(_ESCAPES[nxt])
                i += 2
            elif nxt == "\\":
                out.append(" ")
                i += 2
            elif m := _CONTROL_WORD_RE.match(value, i + 1):
                if diagnostics is not None:
                    diagnostics.append(warning(
                        "unknown-macro",
                        f"dropped control sequence '\\{m.group(0)}'",
                        i,
                    ))
                i = m.end()
                if i < n and value[i] == " ":  # TeX eats the space after a word
                    i += 1
            else:
                if diagnostics is not None:
                    diagnostics.append(warning(
                        "unknown-macro", f"dropped control symbol '\\{nxt}'", i))
                i += 2
        elif c == "$":
            in_math = not in_math
            out.append(c)
            i += 1
        elif c == "-" and not in_math and value.startswith("--", i):
            j = i
            while j < n and value[j] == "-":
                j += 1
            out.append("-")
            i = j
        elif c in "{}" and not in_math:
            i += 1  # case-protection group: drop the braces, keep content
        else:
            out.append(c)
            i += 1
    return _WS_RUN_RE.sub(" ", "".join(out)).strip()
