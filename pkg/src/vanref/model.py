"""Typed bibliographic records: contributors, dates, pagination, entry types.

Everything here is an immutable value type; normalization turns a
:class:`~vanref.bibtex.RawEntry` into a :class:`BibRecord` plus diagnostics
and never raises on odd input.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from enum import Enum

from .bibtex import RawEntry, strip_latex
from .diagnostics import Diagnostic, error, warning


class NameParseError(ValueError):
    """An empty name inside a contributor field; ``index`` is its position."""

    def __init__(self, message: str, index: int):
        super().__init__(message)
        self.index = index


@dataclass(frozen=True)
class PersonName:
    """One contributor: either a personal name or a corporate literal."""

    family: str = ""
    given: str = ""
    particle: str = ""
    suffix: str = ""
    literal: str = ""

    def __post_init__(self):
        if bool(self.family) == bool(self.literal):
            raise ValueError("exactly one of family/literal must be set")
        if "," in self.suffix:
            raise ValueError("suffix must not contain a comma")


class Role(Enum):
    AUTHOR = "author"
    EDITOR = "editor"
    COMPILER = "compiler"
    INVENTOR = "inventor"
    ASSIGNEE = "assignee"
    CARTOGRAPHER = "cartographer"
    ORGANIZATION = "organization"


@dataclass(frozen=True)
class ContributorList:
    names: tuple[PersonName, ...]
    role: Role = Role.AUTHOR
    truncated: bool = False  # source ended with "and others"

    def __post_init__(self):
        if not self.names:
            raise ValueError("a contributor list must hold at least one name")


@dataclass(frozen=True)
class PartialDate:
    """A year with optional month/day detail, copyright and open-range forms.

    ``raw`` overrides rendering entirely (kept for forms like ``c2000-01``).
    """

    year: int | str
    month: int | None = None
    day: int | None = None
    day_end: int | None = None
    circa: bool = False
    open_ended: bool = False
    raw: str = ""

    def __post_init__(self):
        if self.month is not None and not 1 <= self.month <= 12:
            raise ValueError("month out of range")
        if self.day is not None:
            if self.month is None:
                raise ValueError("a day requires a month")
            if not 1 <= self.day <= 31:
                raise ValueError("day out of range")
        if self.day_end is not None:
            if self.day is None:
                raise ValueError("a day range requires a start day")
            if not self.day <= self.day_end <= 31:
                raise ValueError("day range must stay within the month")


class PageKind(Enum):
    NUMERIC_RANGE = "numeric_range"
    ROMAN_RANGE = "roman_range"
    SINGLE = "single"
    TEXT = "text"


@dataclass(frozen=True)
class PageExtent:
    kind: PageKind
    first: str = ""
    last: str = ""
    text: str = ""


class EntryType(Enum):
    ARTICLE = "article"
    BOOK = "book"
    CHAPTER = "chapter"
    PROCEEDINGS = "proceedings"
    INPROCEEDINGS = "inproceedings"
    TECHREPORT = "techreport"
    DISSERTATION = "dissertation"
    PATENT = "patent"
    NEWSPAPER = "newspaper"
    AUDIOVISUAL = "audiovisual"
    MAP = "map"
    DICTIONARY = "dictionary"
    CDROM = "cdrom"
    WEBJOURNAL = "webjournal"
    WEBMONOGRAPH = "webmonograph"
    WEBPAGE = "webpage"
    WEBDATABASE = "webdatabase"
    MISC = "misc"


@dataclass(frozen=True)
class BibRecord:
    """A normalized record; every rendered symbol reads one field here."""

    key: str
    entry_type: EntryType
    raw_entry_type: str = ""
    contributors: tuple[ContributorList, ...] = ()
    title: str = ""
    journal: str = ""
    booktitle: str = ""
    volume: str = ""
    issue: str = ""
    volume_supplement: str = ""
    issue_supplement: str = ""
    volume_part: str = ""
    issue_part: str = ""
    pages: PageExtent | None = None
    date: PartialDate | None = None
    date_epub: PartialDate | None = None
    place: str = ""
    publisher: str = ""
    edition: str = ""
    pmid: str = ""
    retraction_of: str = ""
    retraction_in: str = ""
    erratum_in: str = ""
    republished_from: str = ""
    sponsor: str = ""
    report_type: str = ""
    report_number: str = ""
    contract_number: str = ""
    article_type: str = ""
    language_note: str = ""
    url: str = ""
    medium: str = ""
    updated: PartialDate | None = None
    cited: PartialDate | None = None
    part_title: str = ""
    extent_text: str = ""
    conference_name: str = ""
    conference_date: PartialDate | None = None
    conference_place: str = ""
    defined_term: str = ""
    term_pages: str = ""
    country: str = ""
    section: str = ""
    column: str = ""
    affiliation: str = ""
    in_press: bool = False
    continuous_pagination: bool = False
    date_separator: str = ";"

    def lists(self, *roles: Role) -> tuple[ContributorList, ...]:
        return tuple(c for c in self.contributors if c.role in roles)


# ---------------------------------------------------------------------------
# contributor names

def _split_depth0(value: str) -> list[str]:
    """Split into whitespace-separated words at brace depth zero."""
    words: list[str] = []
    depth = 0
    current: list[str] = []
    for c in value:
        if c == "{":
            depth += 1
        elif c == "}":
            depth = max(0, depth - 1)
        if c.isspace() and depth == 0:
            if current:
                words.append("".join(current))
                current = []
        else:
            current.append(c)
    if current:
        words.append("".join(current))
    return words


def _split_commas_depth0(words: list[str]) -> list[list[str]]:
    """Regroup words into comma-separated parts (commas at depth zero)."""
    parts: list[list[str]] = [[]]
    for word in words:
        pending = word
        while True:
            depth = 0
            cut = -1
            for i, c in enumerate(pending):
                if c == "{":
                    depth += 1
                elif c == "}":
                    depth = max(0, depth - 1)
                elif c == "," and depth == 0:
                    cut = i
                    break
            if cut == -1:
                if pending:
                    parts[-1].append(pending)
                break
            head = pending[:cut]
            if head:
                parts[-1].append(head)
            parts.append([])
            pending = pending[cut + 1:]
    return parts


def _is_lower_word(word: str) -> bool:
    """BibTeX case of a word: decided by its first letter at depth zero."""
    depth = 0
    for c in word:
        if c == "{":
            depth += 1
        elif c == "}":
            depth = max(0, depth - 1)
        elif depth == 0 and c.isalpha():
            return c.islower()
    return False


def _clean(text: str) -> str:
    return strip_latex(text)


def _person_from_parts(first: list[str], von: list[str], last: list[str],
                       suffix: list[str]) -> PersonName:
    return PersonName(
        family=_clean(" ".join(last)),
        given=_clean(" ".join(first)),
        particle=_clean(" ".join(von)),
        suffix=_clean(" ".join(suffix)),
    )


def _split_von_last(words: list[str]) -> tuple[list[str], list[str]]:
    """Split ``von Last`` words: the particle runs to the last lowercase word."""
    for i, w in enumerate(words[:-1]):
        if _is_lower_word(w):
            von_start = i
            break
    else:
        return [], words
    von_end = von_start
    for i in range(von_start, len(words) - 1):
        if _is_lower_word(words[i]):
            von_end = i
    return words[von_start:von_end + 1], words[von_end + 1:]


def _parse_one_name(piece: str) -> PersonName:
    stripped = piece.strip()
    if stripped.startswith("{") and stripped.endswith("}"):
        inner, depth = stripped[1:-1], 0
        for c in inner:  # the outer braces must be one group
            depth += c == "{"
            depth -= c == "}"
            if depth < 0:
                break
        else:
            if depth == 0:
                return PersonName(literal=_clean(inner))
    words = _split_depth0(stripped)
    parts = _split_commas_depth0(words)
    if len(parts) == 1:
        tokens = parts[0]
        if len(tokens) == 1:
            return _person_from_parts([], [], tokens, [])
        lowers = [i for i, w in enumerate(tokens) if _is_lower_word(w)]
        if not lowers or lowers == [len(tokens) - 1]:
            return _person_from_parts(tokens[:-1], [], tokens[-1:], [])
        von, last = _split_von_last(tokens[lowers[0]:])
        return _person_from_parts(tokens[:lowers[0]], von, last, [])
    left = parts[0]
    if left and _is_lower_word(left[0]):
        von, last = _split_von_last(left)
    else:
        von, last = [], left
    if len(parts) == 2:
        return _person_from_parts(parts[1], von, last, [])
    first = [w for grp in parts[2:] for w in grp]
    return _person_from_parts(first, von, last, parts[1])


def parse_names(value: str, role: Role = Role.AUTHOR) -> ContributorList:
    """Parse a BibTeX name field into a contributor list.

    Names are separated by the word ``and`` at brace depth zero and follow
    the ``First von Last``, ``von Last, First`` and ``von Last, Jr, First``
    forms; a fully braced name is taken as a corporate literal.  A trailing
    ``and others`` sets the truncation flag.
    """
    words = _split_depth0(value)
    pieces: list[list[str]] = [[]]
    for word in words:
        if word.lower() == "and":
            pieces.append([])
        else:
            pieces[-1].append(word)
    truncated = False
    if pieces and len(pieces[-1]) == 1 and pieces[-1][0].lower() == "others":
        truncated = True
        pieces.pop()
    names = []
    for index, piece in enumerate(pieces):
        if not piece:
            raise NameParseError(f"empty name at position {index}", index)
        try:
            names.append(_parse_one_name(" ".join(piece)))
        except ValueError as exc:
            raise NameParseError(
                f"unusable name at position {index}: {exc}", index) from exc
    return ContributorList(tuple(names), role=role, truncated=truncated)


def initials(given: str) -> str:
    """NLM initials: first letter of each space- or hyphen-separated token."""
    out = []
    for token in re.split(r"[\s\-]+", given):
        for c in token:
            if c.isalpha():
                out.append(c.upper())
                break
    return "".join(out)


# ---------------------------------------------------------------------------
# dates

_MONTH_NUMBERS: dict[str, int] = {}
for _i, _name in enumerate(
        ["january", "february", "march", "april", "may", "june", "july",
         "august", "september", "october", "november", "december"], start=1):
    _MONTH_NUMBERS[_name] = _i
    _MONTH_NUMBERS[_name[:3]] = _i

_DATE_RE = re.compile(
    r"(c?)(\d{4})"
    r"(?:\s+([A-Za-z]+)"
    r"(?:\s+(\d{1,2})(?:-(\d{1,2}))?)?)?"
    r"(\s*-)?"
)


def parse_month(value: str) -> int | None:
    value = value.strip()
    if value.isdigit() and 1 <= int(value) <= 12:
        return int(value)
    return _MONTH_NUMBERS.get(value.lower())


def parse_date(value: str,
               diagnostics: list[Diagnostic] | None = None) -> PartialDate:
    """Parse forms like ``2002 Jul 25``, ``2001 Sep 13-15``, ``c2000 -``.

    A copyright range such as ``c2000-01`` keeps its verbatim form; anything
    unrecognized is stored raw with a diagnostic.
    """
    s = value.strip()
    m = _DATE_RE.fullmatch(s)
    if m:
        circa, year, month_word, day, day_end, open_tail = m.groups()
        month = parse_month(month_word) if month_word else None
        if month_word and month is None:
            pass  # fall through to the raw form below
        else:
            try:
                return PartialDate(
                    year=int(year),
                    month=month,
                    day=int(day) if day else None,
                    day_end=int(day_end) if day_end else None,
                    circa=bool(circa),
                    open_ended=bool(open_tail),
                )
            except ValueError:
                pass
    m = re.fullmatch(r"c(\d{4})-(\d{2}|\d{4})", s)
    if m:
        return PartialDate(year=int(m.group(1)), circa=True, raw=s)
    if diagnostics is not None:
        diagnostics.append(warning("unparsed-date", f"date kept verbatim: '{s}'"))
    return PartialDate(year=s, raw=s)


# ---------------------------------------------------------------------------
# pages

_ROMAN_RE = r"[ivxlcdm]+"


def complete_page(first: str, last: str) -> str:
    """Fill an NLM-abbreviated ending page from the starting page's digits."""
    if len(last) >= len(first):
        return last
    return first[:len(first) - len(last)] + last


def parse_pages(value: str) -> PageExtent:
    """Classify a pages field; unrecognized shapes pass through verbatim."""
    s = value.strip()
    if re.fullmatch(r"\d+", s):
        return PageExtent(PageKind.SINGLE, first=s)
    m = re.fullmatch(r"(\d+)\s*-\s*(\d+)", s)
    if m:
        first, last = m.groups()
        if int(complete_page(first, last)) >= int(first):
            return PageExtent(PageKind.NUMERIC_RANGE, first=first, last=last)
        return PageExtent(PageKind.TEXT, text=s)
    m = re.fullmatch(f"({_ROMAN_RE})\\s*-\\s*({_ROMAN_RE})", s)
    if m:
        return PageExtent(PageKind.ROMAN_RANGE, first=m.group(1), last=m.group(2))
    if re.fullmatch(_ROMAN_RE, s):
        return PageExtent(PageKind.SINGLE, first=s)
    return PageExtent(PageKind.TEXT, text=s)


# ---------------------------------------------------------------------------
# entry-type mapping and normalization

_TYPE_MAP = {
    "article": EntryType.ARTICLE,
    "book": EntryType.BOOK,
    "inbook": EntryType.CHAPTER,
    "incollection": EntryType.CHAPTER,
    "chapter": EntryType.CHAPTER,
    "proceedings": EntryType.PROCEEDINGS,
    "inproceedings": EntryType.INPROCEEDINGS,
    "conference": EntryType.INPROCEEDINGS,
    "techreport": EntryType.TECHREPORT,
    "report": EntryType.TECHREPORT,
    "phdthesis": EntryType.DISSERTATION,
    "mastersthesis": EntryType.DISSERTATION,
    "dissertation": EntryType.DISSERTATION,
    "patent": EntryType.PATENT,
    "newspaper": EntryType.NEWSPAPER,
    "audiovisual": EntryType.AUDIOVISUAL,
    "video": EntryType.AUDIOVISUAL,
    "map": EntryType.MAP,
    "dictionary": EntryType.DICTIONARY,
    "cdrom": EntryType.CDROM,
    "electronic": EntryType.CDROM,
    "webpage": EntryType.WEBPAGE,
    "homepage": EntryType.WEBPAGE,
    "webdatabase": EntryType.WEBDATABASE,
    "database": EntryType.WEBDATABASE,
    "misc": EntryType.MISC,
}


def map_entry_type(raw: RawEntry,
                   diagnostics: list[Diagnostic] | None = None) -> EntryType:
    """Total mapping from the raw ``@type`` (plus web/medium markers)."""
    base = _TYPE_MAP.get(raw.entry_type)
    has_url = bool(raw.fields.get("url", "").strip())
    medium = raw.fields.get("medium", "").strip()
    if base is EntryType.ARTICLE and has_url:
        return EntryType.WEBJOURNAL
    if base is EntryType.BOOK:
        if has_url:
            return EntryType.WEBMONOGRAPH
        if medium:
            if "cd-rom" in medium.lower():
                return EntryType.CDROM
            return EntryType.AUDIOVISUAL
    if base is None:
        if diagnostics is not None:
            diagnostics.append(warning(
                "unknown-entry-type",
                f"unknown entry type '@{raw.entry_type}' treated as misc",
                raw.span[0],
            ))
        return EntryType.MISC
    return base


_ROLE_FIELDS = [
    ("author", Role.AUTHOR),
    ("organization", Role.ORGANIZATION),
    ("editor", Role.EDITOR),
    ("compiler", Role.COMPILER),
    ("inventor", Role.INVENTOR),
    ("assignee", Role.ASSIGNEE),
    ("cartographer", Role.CARTOGRAPHER),
]

_TRUE_WORDS = {"yes", "true", "1", "on"}


def normalize(raw: RawEntry) -> tuple[BibRecord, list[Diagnostic]]:
    """Build a typed record from a raw entry, collecting diagnostics."""
    diags: list[Diagnostic] = []
    f = raw.fields

    def plain(name: str) -> str:
        return strip_latex(f[name], diags) if name in f else ""

    def date_of(name: str) -> PartialDate | None:
        return parse_date(f[name], diags) if name in f else None

    contributors: list[ContributorList] = []
    for field_name, role in _ROLE_FIELDS:
        if field_name in f:
            try:
                contributors.append(parse_names(f[field_name], role))
            except NameParseError as exc:
                diags.append(error(
                    "empty-name",
                    f"entry '{raw.key}': bad {field_name} field: {exc}",
                    raw.span[0],
                ))

    entry_type = map_entry_type(raw, diags)

    date = date_of("date")
    if date is None and "year" in f:
        year_text = f["year"].strip()
        month = parse_month(f["month"]) if "month" in f else None
        if "month" in f and month is None:
            diags.append(warning(
                "unparsed-date", f"month kept verbatim: '{f['month']}'"))
        day = day_end = None
        if "day" in f:
            m = re.fullmatch(r"(\d{1,2})(?:-(\d{1,2}))?", f["day"].strip())
            if m and month is not None:
                day = int(m.group(1))
                day_end = int(m.group(2)) if m.group(2) else None
            else:
                diags.append(warning(
                    "unparsed-date", f"day kept verbatim: '{f['day']}'"))
        try:
            date = PartialDate(
                year=int(year_text) if year_text.isdigit() else year_text,
                month=month, day=day, day_end=day_end)
        except ValueError:
            diags.append(warning(
                "unparsed-date", f"date fields kept verbatim for '{raw.key}'"))
            date = PartialDate(year=year_text, raw=year_text)
    if date is None:
        diags.append(warning(
            "missing-date", f"entry '{raw.key}' has no date; year skipped"))

    pages_value = plain("pages")
    pages = None
    term_pages = ""
    if entry_type is EntryType.DICTIONARY:
        term_pages = pages_value
    elif pages_value:
        pages = parse_pages(pages_value)

    pagination = f.get("pagination", "").strip().lower()
    if pagination and pagination != "continuous":
        diags.append(warning(
            "unknown-value", f"pagination value '{pagination}' ignored"))

    datesep = f.get("datesep", ";").strip() or ";"
    if datesep not in {";", "."}:
        diags.append(warning(
            "unknown-value", f"datesep '{datesep}' ignored; using ';'"))
        datesep = ";"

    # The "number" field carries the issue for journal-family entries and
    # the document number for reports and patents.
    number_value = plain("number")
    if entry_type in (EntryType.TECHREPORT, EntryType.PATENT):
        issue = plain("issue")
        report_number = number_value
    else:
        issue = number_value or plain("issue")
        report_number = ""

    record = BibRecord(
        key=raw.key,
        entry_type=entry_type,
        raw_entry_type=raw.entry_type,
        contributors=tuple(contributors),
        title=plain("title"),
        journal=plain("journal"),
        booktitle=plain("booktitle"),
        volume=plain("volume"),
        issue=issue,
        volume_supplement=plain("volsuppl"),
        issue_supplement=plain("issuesuppl"),
        volume_part=plain("volpart"),
        issue_part=plain("issuepart"),
        pages=pages,
        date=date,
        date_epub=date_of("epub"),
        place=plain("address"),
        publisher=plain("publisher") or plain("school") or plain("institution"),
        edition=plain("edition"),
        pmid=plain("pmid"),
        retraction_of=plain("retractionof"),
        retraction_in=plain("retractionin"),
        erratum_in=plain("erratumin"),
        republished_from=plain("republishedfrom"),
        sponsor=plain("sponsor"),
        report_type=plain("type"),
        report_number=report_number,
        contract_number=plain("contract"),
        article_type=plain("articletype"),
        language_note=plain("language"),
        url=f.get("url", "").strip(),
        medium=plain("medium"),
        updated=date_of("updated"),
        cited=date_of("lastchecked"),
        part_title=plain("part"),
        extent_text=plain("extent"),
        conference_name=plain("conference"),
        conference_date=date_of("conferencedate"),
        conference_place=plain("conferenceplace"),
        defined_term=plain("term"),
        term_pages=term_pages,
        country=plain("country"),
        section=plain("section"),
        column=plain("column"),
        affiliation=plain("affiliation"),
        in_press="inpress" in f and f["inpress"].strip().lower() in _TRUE_WORDS | {""},
        continuous_pagination=pagination == "continuous",
        date_separator=datesep,
    )
    return record, diags


def normalize_database(entries: list[RawEntry]) -> tuple[list[BibRecord], list[Diagnostic]]:
    records: list[BibRecord] = []
    diags: list[Diagnostic] = []
    for raw in entries:
        record, entry_diags = normalize(raw)
        records.append(record)
        diags.extend(entry_diags)
    return records, diags
