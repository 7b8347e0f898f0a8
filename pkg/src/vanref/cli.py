"""Command-line front end: ``format``, ``check`` and ``scan`` subcommands.

Reference lines go to standard output only; diagnostics go to standard
error only.  Exit codes: 0 success, 1 content errors, 2 I/O or syntax
failure.  Line endings are always ``\\n``.
"""

from __future__ import annotations

import argparse
import os
import re
import sys
from dataclasses import dataclass, field

from .bibtex import Database, parse_database
from .citescan import scan_citations, resolve
from .diagnostics import Diagnostic, ERROR, error, warning
from .model import BibRecord, EntryType, normalize
from .render import Reference, RenderError, StyleConfig, render_reference

CONFIG_ENV_VAR = "VANREF_CONFIG"

EXIT_OK = 0
EXIT_CONTENT = 1
EXIT_IO = 2


@dataclass
class RunConfig:
    bib_paths: list[str] = field(default_factory=list)
    tex_path: str | None = None
    keys: list[str] | None = None
    out_path: str | None = None
    output_format: str = "plain"
    max_authors: int = 6
    etal_text: str = "et al."
    strict: bool = False

    def style(self) -> StyleConfig:
        return StyleConfig(max_authors_before_etal=self.max_authors,
                           etal_text=self.etal_text)


# ---------------------------------------------------------------------------
# shared plumbing

def _read_file(path: str) -> str:
    with open(path, encoding="utf-8") as handle:
        return handle.read()


class _Reporter:
    """Collects diagnostics and prints them to stderr as they arrive."""

    def __init__(self, stderr):
        self.stderr = stderr
        self.errors = 0
        self.warnings = 0

    def emit(self, diag: Diagnostic, source: str | None = None,
             path: str | None = None) -> None:
        if diag.severity == ERROR:
            self.errors += 1
        else:
            self.warnings += 1
        print(diag.render(source, path), file=self.stderr)

    def exit_code(self, strict: bool) -> int:
        if self.errors or (strict and self.warnings):
            return EXIT_CONTENT
        return EXIT_OK


def _load_databases(paths: list[str], reporter: _Reporter) -> Database | None:
    merged = Database()
    seen: set[str] = set()
    for path in paths:
        try:
            text = _read_file(path)
        except (OSError, UnicodeDecodeError) as exc:
            print(f"{path}: cannot read: {exc}", file=reporter.stderr)
            return None
        # macros accumulate across files, like one long database
        db = parse_database(text, macros=merged.macros)
        for diag in db.diagnostics:
            reporter.emit(diag, text, path)
        merged.macros.update(db.macros)
        for entry in db.entries:
            if entry.key in seen:
                reporter.emit(warning(
                    "duplicate-key",
                    f"duplicate entry key '{entry.key}' across files"),
                    text, path)
            else:
                seen.add(entry.key)
                merged.entries.append(entry)
    return merged


def _normalize_all(db: Database, reporter: _Reporter,
                   path_hint: str = "") -> dict[str, BibRecord]:
    records: dict[str, BibRecord] = {}
    for entry in db.entries:
        record, diags = normalize(entry)
        for diag in diags:
            reporter.emit(diag, path=path_hint)
        records[record.key] = record
    return records


_MARKDOWN_SPECIALS = re.compile(r"([\\`*_\[\]<>])")


def _markdown_escape(text: str) -> str:
    return _MARKDOWN_SPECIALS.sub(r"\\\1", text)


def _write_lines(lines: list[str], out_path: str | None, stdout) -> bool:
    body = "".join(line + "\n" for line in lines)
    if out_path is None:
        stdout.write(body)
        return True
    try:
        with open(out_path, "w", encoding="utf-8", newline="\n") as handle:
            handle.write(body)
        return True
    except (OSError, UnicodeDecodeError) as exc:
        print(f"{out_path}: cannot write: {exc}", file=sys.stderr)
        return False


# ---------------------------------------------------------------------------
# subcommands

def cmd_format(config: RunConfig, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    reporter = _Reporter(stderr or sys.stderr)
    if not config.bib_paths:
        print("no bibliography files given", file=reporter.stderr)
        return EXIT_IO
    db = _load_databases(config.bib_paths, reporter)
    if db is None:
        return EXIT_IO
    records = _normalize_all(db, reporter)
    style = config.style()

    if config.tex_path is not None:
        try:
            tex = _read_file(config.tex_path)
        except (OSError, UnicodeDecodeError) as exc:
            print(f"{config.tex_path}: cannot read: {exc}", file=reporter.stderr)
            return EXIT_IO
        index = scan_citations(tex)
        for diag in index.diagnostics:
            reporter.emit(diag, tex, config.tex_path)
        pairs, missing = resolve(index, list(records.values()))
        for key in missing:
            reporter.emit(warning("missing-key", f"no database entry for '{key}'"))
        numbered = pairs
    elif config.keys is not None:
        if not config.keys:
            print("no keys", file=reporter.stderr)
            return EXIT_CONTENT
        numbered = []
        for number, key in enumerate(config.keys, start=1):
            record = records.get(key)
            if record is None:
                reporter.emit(warning("missing-key", f"no database entry for '{key}'"))
            else:
                numbered.append((number, record))
    else:
        numbered = list(enumerate(records.values(), start=1))

    references = []
    for number, record in numbered:
        try:
            references.append(
                Reference(number, record.key, render_reference(record, style)))
        except RenderError as exc:
            reporter.emit(warning("render", f"entry '{record.key}': {exc}"))
    lines = []
    for ref in references:
        text = (_markdown_escape(ref.text) if config.output_format == "markdown"
                else ref.text)
        lines.append(f"{ref.number}. {text}")
    if not _write_lines(lines, config.out_path, stdout):
        return EXIT_IO
    return reporter.exit_code(config.strict)


# Fields every entry type may carry.
_COMMON_FIELDS = {
    "title", "year", "month", "day", "date", "language", "note", "key",
}

_CONTRIBUTOR_FIELDS = {
    "author", "editor", "compiler", "organization",
}

_JOURNAL_FIELDS = _CONTRIBUTOR_FIELDS | {
    "journal", "volume", "number", "issue", "volsuppl", "issuesuppl",
    "volpart", "issuepart", "pages", "epub", "pmid", "retractionof",
    "retractionin", "erratumin", "republishedfrom", "articletype",
    "inpress", "pagination",
}

_WEB_FIELDS = {"url", "medium", "updated", "lastchecked", "part", "extent",
               "datesep"}

_BOOK_FIELDS = _CONTRIBUTOR_FIELDS | {
    "address", "publisher", "edition", "medium",
}

_KNOWN_FIELDS: dict[EntryType, set[str]] = {
    EntryType.ARTICLE: _JOURNAL_FIELDS,
    EntryType.WEBJOURNAL: _JOURNAL_FIELDS | _WEB_FIELDS,
    EntryType.BOOK: _BOOK_FIELDS,
    EntryType.CDROM: _BOOK_FIELDS,
    EntryType.AUDIOVISUAL: _BOOK_FIELDS,
    EntryType.MAP: _BOOK_FIELDS | {"cartographer"},
    EntryType.DICTIONARY: _BOOK_FIELDS | {"term", "pages"},
    EntryType.CHAPTER: _BOOK_FIELDS | {"booktitle", "pages"},
    EntryType.INPROCEEDINGS: _BOOK_FIELDS | {
        "booktitle", "pages", "conference", "conferencedate", "conferenceplace"},
    EntryType.PROCEEDINGS: _BOOK_FIELDS | {
        "conference", "conferencedate", "conferenceplace"},
    EntryType.TECHREPORT: _BOOK_FIELDS | {
        "institution", "affiliation", "type", "number", "contract", "sponsor"},
    EntryType.DISSERTATION: _BOOK_FIELDS | {"school"},
    EntryType.PATENT: {"inventor", "assignee", "country", "number"},
    EntryType.NEWSPAPER: _CONTRIBUTOR_FIELDS | {
        "journal", "section", "pages", "column"},
    EntryType.WEBMONOGRAPH: _BOOK_FIELDS | _WEB_FIELDS,
    EntryType.WEBPAGE: _BOOK_FIELDS | _WEB_FIELDS,
    EntryType.WEBDATABASE: _BOOK_FIELDS | _WEB_FIELDS,
    EntryType.MISC: _BOOK_FIELDS | _WEB_FIELDS | _JOURNAL_FIELDS,
}


def cmd_check(config: RunConfig, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    reporter = _Reporter(stderr or sys.stderr)
    if not config.bib_paths:
        print("no bibliography files given", file=reporter.stderr)
        return EXIT_IO
    db = _load_databases(config.bib_paths, reporter)
    if db is None:
        return EXIT_IO
    style = config.style()
    checked = 0
    for entry in db.entries:
        record, diags = normalize(entry)
        for diag in diags:
            reporter.emit(diag)
        known = _KNOWN_FIELDS.get(record.entry_type, set()) | _COMMON_FIELDS
        for name in entry.fields:
            if name not in known:
                reporter.emit(Diagnostic(
                    "warning", "unknown-field",
                    f"entry '{entry.key}': field '{name}' not used by "
                    f"entry type '{record.entry_type.value}'",
                    entry.span[0]))
        try:
            render_reference(record, style)
        except RenderError as exc:
            reporter.emit(error("render", f"entry '{entry.key}': {exc}"))
        checked += 1
    print(f"checked {checked} entries: "
          f"{reporter.errors} errors, {reporter.warnings} warnings",
          file=stdout)
    return reporter.exit_code(config.strict)


def cmd_scan(config: RunConfig, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    reporter = _Reporter(stderr or sys.stderr)
    if config.tex_path is None:
        print("no manuscript given", file=reporter.stderr)
        return EXIT_IO
    try:
        tex = _read_file(config.tex_path)
    except (OSError, UnicodeDecodeError) as exc:
        print(f"{config.tex_path}: cannot read: {exc}", file=reporter.stderr)
        return EXIT_IO
    index = scan_citations(tex)
    for diag in index.diagnostics:
        reporter.emit(diag, tex, config.tex_path)
    lines = [f"{index.numbers[key]} {key}" for key in index.keys]
    if not _write_lines(lines, config.out_path, stdout):
        return EXIT_IO
    return reporter.exit_code(config.strict)


# ---------------------------------------------------------------------------
# argument and config-file handling

_TRUE_WORDS = {"1", "true", "yes", "on"}


def _load_config_file(path: str) -> dict[str, str]:
    values: dict[str, str] = {}
    try:
        text = _read_file(path)
    except (OSError, UnicodeDecodeError) as exc:
        raise OSError(f"{path}: cannot read config: {exc}") from exc
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            continue
        name, _, value = line.partition("=")
        values[name.strip().lower().replace("-", "_")] = value.strip()
    return values


def _config_from_args(args: argparse.Namespace) -> RunConfig:
    config = RunConfig()
    config_path = os.environ.get(CONFIG_ENV_VAR)
    if config_path:
        file_values = _load_config_file(config_path)
        if "max_authors" in file_values:
            config.max_authors = int(file_values["max_authors"])
        if "etal_text" in file_values:
            config.etal_text = file_values["etal_text"]
        if "format" in file_values:
            config.output_format = file_values["format"]
        if "strict" in file_values:
            config.strict = file_values["strict"].lower() in _TRUE_WORDS
    config.bib_paths = list(getattr(args, "bib", None) or [])
    config.tex_path = getattr(args, "tex", None)
    if getattr(args, "keys", None) is not None:
        config.keys = [k.strip() for k in args.keys.split(",") if k.strip()]
    if getattr(args, "all", False):
        config.keys = None
        config.tex_path = None
    config.out_path = getattr(args, "out", None)
    if getattr(args, "format", None):
        config.output_format = args.format
    if getattr(args, "max_authors", None) is not None:
        config.max_authors = args.max_authors
    if getattr(args, "etal_text", None) is not None:
        config.etal_text = args.etal_text
    if getattr(args, "strict", False):
        config.strict = True
    if config.max_authors < 1:
        raise ValueError("max authors must be at least 1")
    return config


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="vanref",
        description="Build numbered Vancouver-style reference lists "
                    "from BibTeX databases.")
    sub = parser.add_subparsers(dest="command", required=True)

    fmt = sub.add_parser("format", help="render a numbered reference list")
    fmt.add_argument("--bib", nargs="+", action="extend", default=[],
                     metavar="PATH", help="bibliography database(s)")
    mode = fmt.add_mutually_exclusive_group()
    mode.add_argument("--tex", metavar="PATH",
                      help="manuscript; numbering follows citation order")
    mode.add_argument("--keys", metavar="K1,K2,...",
                      help="explicit comma-separated citation keys")
    mode.add_argument("--all", action="store_true",
                      help="render every entry in database order (default)")
    fmt.add_argument("--out", metavar="PATH", help="write to file instead of stdout")
    fmt.add_argument("--format", choices=("plain", "markdown"),
                     help="output flavor (default plain)")
    fmt.add_argument("--max-authors", type=int, dest="max_authors", metavar="N",
                     help="authors listed before 'et al.' (default 6)")
    fmt.add_argument("--etal-text", dest="etal_text", metavar="TEXT",
                     help="text used for truncated author lists")
    fmt.add_argument("--strict", action="store_true",
                     help="treat warnings as failures")

    chk = sub.add_parser("check", help="lint a database and dry-run the renderer")
    chk.add_argument("--bib", nargs="+", action="extend", default=[],
                     metavar="PATH")
    chk.add_argument("--strict", action="store_true")

    scn = sub.add_parser("scan", help="list cited keys in citation order")
    scn.add_argument("--tex", required=True, metavar="PATH")
    scn.add_argument("--out", metavar="PATH")
    scn.add_argument("--strict", action="store_true")
    return parser


_COMMANDS = {
    "format": cmd_format,
    "check": cmd_check,
    "scan": cmd_scan,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        config = _config_from_args(args)
    except (OSError, ValueError) as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_IO
    return _COMMANDS[args.command](config)


if __name__ == "__main__":
    sys.exit(main())
