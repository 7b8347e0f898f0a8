"""Vancouver-style reference rendering.

One template function per entry-type family; ``render_reference`` dispatches
through :data:`TEMPLATES`.  All functions are pure: strings in, strings out.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

from .model import (
    BibRecord,
    ContributorList,
    EntryType,
    PageExtent,
    PageKind,
    PartialDate,
    PersonName,
    Role,
    complete_page,
    initials,
)

DEFAULT_MONTHS = ("Jan", "Feb", "Mar", "Apr", "May", "Jun",
                  "Jul", "Aug", "Sep", "Oct", "Nov", "Dec")


@dataclass(frozen=True)
class StyleConfig:
    max_authors_before_etal: int = 6
    etal_text: str = "et al."
    month_names: tuple[str, ...] = DEFAULT_MONTHS
    compress_pages: bool = True

    def __post_init__(self):
        if self.max_authors_before_etal < 1:
            raise ValueError("max_authors_before_etal must be at least 1")
        if len(self.month_names) != 12:
            raise ValueError("month_names must hold twelve entries")


DEFAULT_STYLE = StyleConfig()


class RenderError(Exception):
    """A record cannot be rendered under its entry type's template."""


class MissingRequiredField(RenderError):
    def __init__(self, entry_type: EntryType, field: str):
        super().__init__(
            f"entry type '{entry_type.value}' requires field '{field}'")
        self.entry_type = entry_type
        self.field = field


class ConflictingLocator(RenderError):
    def __init__(self):
        super().__init__(
            "volume supplement and issue supplement are mutually exclusive")


class InvalidRange(ValueError):
    """Ending page smaller than starting page."""


# ---------------------------------------------------------------------------
# building blocks

def _sentence(text: str) -> str:
    """Terminate a segment with exactly one period."""
    text = text.strip()
    if not text or text.endswith((".", "?")):
        return text
    return text + "."


def _join(segments: list[str]) -> str:
    return " ".join(s for s in segments if s)


def compress_page_range(first: str, last: str) -> str:
    """NLM ending-page abbreviation: 284,287 -> ``284-7``.

    Equal-length pages drop their shared digit prefix from the ending page
    (keeping at least one digit); unequal lengths are written in full.
    Raises :class:`InvalidRange` when the range decreases.
    """
    if not first.isdigit() or not last.isdigit():
        raise InvalidRange(f"page range {first!r}-{last!r} is not numeric")
    a, b = int(first), int(last)
    if b < a:
        raise InvalidRange(f"page range {a}-{b} decreases")
    if a == b:
        return first
    if len(first) != len(last):
        return f"{first}-{last}"
    i = 0
    while last[i] == first[i]:
        i += 1
    return f"{first}-{last[i:]}"


def format_pages(extent: PageExtent, style: StyleConfig = DEFAULT_STYLE) -> str:
    """Render a page extent; only numeric ranges are ever compressed."""
    if extent.kind is PageKind.TEXT:
        return extent.text
    if extent.kind is PageKind.SINGLE:
        return extent.first
    if extent.kind is PageKind.ROMAN_RANGE:
        return f"{extent.first}-{extent.last}"
    if not style.compress_pages:
        return f"{extent.first}-{extent.last}"
    return compress_page_range(extent.first, complete_page(extent.first, extent.last))


def format_date(date: PartialDate, style: StyleConfig = DEFAULT_STYLE) -> str:
    """``YYYY[ Mon[ D[-D]]]`` with a ``c`` copyright prefix; raw wins."""
    if date.raw:
        return date.raw
    out = ("c" if date.circa else "") + str(date.year)
    if date.month:
        out += f" {style.month_names[date.month - 1]}"
        if date.day:
            out += f" {date.day}"
            if date.day_end:
                out += f"-{date.day_end}"
    if date.open_ended:
        out += " -"
    return out


def format_name(name: PersonName, style: StyleConfig = DEFAULT_STYLE) -> str:
    """``[particle ]Family II[ suffix]``; corporate literals pass verbatim."""
    if name.literal:
        return name.literal
    parts = [p for p in (name.particle, name.family) if p]
    out = " ".join(parts)
    ii = initials(name.given)
    if ii:
        out += f" {ii}"
    if name.suffix:
        out += f" {name.suffix}"
    return out


_ROLE_LABELS = {
    Role.EDITOR: "editor",
    Role.COMPILER: "compiler",
    Role.INVENTOR: "inventor",
    Role.ASSIGNEE: "assignee",
    Role.CARTOGRAPHER: "cartographer",
}


def _join_names(rendered: list[str], literal_flags: list[bool]) -> str:
    """Join names, separating corporate literals with semicolons."""
    out = rendered[0]
    for prev_lit, cur_lit, text in zip(literal_flags, literal_flags[1:], rendered[1:]):
        out += ("; " if prev_lit or cur_lit else ", ") + text
    return out


def format_contributors(lists: tuple[ContributorList, ...] | list[ContributorList],
                        style: StyleConfig = DEFAULT_STYLE,
                        affiliation: str = "") -> str:
    """Render contributor lists as one period-terminated block.

    Within a list the first ``max_authors_before_etal`` names are shown and
    any overflow (or a truncated source) becomes ``et al.``; role labels are
    appended per list, pluralized by name count; lists join with ``; ``.
    """
    blocks = []
    for contributor_list in lists:
        names = list(contributor_list.names)
        shown = names[:style.max_authors_before_etal]
        rendered = [format_name(n, style) for n in shown]
        flags = [bool(n.literal) for n in shown]
        body = _join_names(rendered, flags)
        if contributor_list.truncated or len(names) > style.max_authors_before_etal:
            body += f", {style.etal_text}"
        label = _ROLE_LABELS.get(contributor_list.role)
        if label:
            body += f", {label}" + ("s" if len(names) > 1 else "")
        blocks.append(body)
    out = "; ".join(blocks)
    if affiliation:
        out += f" ({affiliation})"
    return _sentence(out)


# ---------------------------------------------------------------------------
# shared record pieces

def _require(rec: BibRecord, *fields: str) -> None:
    for field in fields:
        if not getattr(rec, field):
            raise MissingRequiredField(rec.entry_type, field)


def _primary_contributors(rec: BibRecord, style: StyleConfig,
                          roles: tuple[Role, ...] = (Role.AUTHOR, Role.ORGANIZATION),
                          affiliation: str = "") -> str:
    lists = rec.lists(*roles)
    if not lists:
        return ""
    return format_contributors(lists, style, affiliation=affiliation)


def _bracketed_title(rec: BibRecord, bracket: str = "") -> str:
    title = rec.title
    if bracket:
        title += f" [{bracket}]"
    return _sentence(title)


def format_journal_locator(rec: BibRecord) -> str:
    """Volume/issue/supplement/part locator, e.g. ``42 Suppl 2`` or ``(401)``."""
    if rec.volume_supplement and rec.issue_supplement:
        raise ConflictingLocator()
    if rec.volume:
        if rec.volume_supplement:
            return f"{rec.volume} Suppl {rec.volume_supplement}"
        if rec.volume_part:
            return f"{rec.volume}(Pt {rec.volume_part})"
        if rec.issue:
            inner = rec.issue
            if rec.issue_supplement:
                inner += f" Suppl {rec.issue_supplement}"
            elif rec.issue_part:
                inner += f" Pt {rec.issue_part}"
            return f"{rec.volume}({inner})"
        return rec.volume
    if rec.issue:
        return f"({rec.issue})"
    return ""


def _date_locator_pages(date_str: str, locator: str, pages: str) -> str:
    out = date_str
    if locator:
        out += f";{locator}" if out else locator
    if pages:
        out += f":{pages}" if out else pages
    return _sentence(out)


def _imprint(rec: BibRecord, style: StyleConfig, date_block: str = "") -> str:
    """``Place: Publisher; date.`` with the record's publisher/date separator."""
    out = rec.place
    if rec.publisher:
        out = f"{out}: {rec.publisher}" if out else rec.publisher
    if not date_block and rec.date is not None:
        date_block = format_date(rec.date, style)
    if date_block:
        if not out:
            out = date_block
        elif rec.date_separator == ".":
            out = f"{_sentence(out)} {date_block}"
        else:
            out = f"{out}; {date_block}"
    return _sentence(out)


def _web_date_block(rec: BibRecord, style: StyleConfig) -> str:
    """Date plus the ``[updated ...; cited ...]`` bracket, either part optional."""
    parts = []
    if rec.updated is not None:
        parts.append("updated " + format_date(rec.updated, style))
    if rec.cited is not None:
        parts.append("cited " + format_date(rec.cited, style))
    bracket = f"[{'; '.join(parts)}]" if parts else ""
    date_str = format_date(rec.date, style) if rec.date is not None else ""
    return _join([date_str, bracket])


def _year_text(rec: BibRecord, style: StyleConfig) -> str:
    if rec.date is None:
        return ""
    return format_date(replace(rec.date, month=None, day=None, day_end=None), style)


def _part_extent(rec: BibRecord) -> str:
    if rec.part_title and rec.extent_text:
        return _sentence(f"{rec.part_title}; {rec.extent_text}")
    return _sentence(rec.part_title or rec.extent_text)


def _note_segments(rec: BibRecord) -> list[str]:
    pairs = (
        ("Cited in PubMed; PMID ", rec.pmid),
        ("Retraction of: ", rec.retraction_of),
        ("Retraction in: ", rec.retraction_in),
        ("Erratum in: ", rec.erratum_in),
        ("Corrected and republished from: ", rec.republished_from),
    )
    return [_sentence(label + text) for label, text in pairs if text]


# ---------------------------------------------------------------------------
# entry-type templates

def _render_article(rec: BibRecord, style: StyleConfig) -> str:
    _require(rec, "title", "journal")
    segments = [
        _primary_contributors(rec, style),
        _bracketed_title(rec, rec.article_type),
        _sentence(rec.journal),
    ]
    if rec.in_press:
        segments.append(_sentence(_join(["In press", _year_text(rec, style)])))
    else:
        effective = rec
        if rec.continuous_pagination:
            effective = replace(rec, issue="", issue_supplement="", issue_part="")
        date_str = (_year_text(rec, style) if rec.continuous_pagination
                    else format_date(rec.date, style) if rec.date is not None else "")
        if rec.entry_type is EntryType.WEBJOURNAL:
            date_str = _web_date_block(rec, style)
        locator = format_journal_locator(effective)
        pages = format_pages(rec.pages, style) if rec.pages else ""
        if date_str or locator or pages:
            segments.append(_date_locator_pages(date_str, locator, pages))
    if rec.date_epub is not None:
        segments.append(_sentence("Epub " + format_date(rec.date_epub, style)))
    segments.extend(_note_segments(rec))
    return _join(segments)


def _render_webjournal(rec: BibRecord, style: StyleConfig) -> str:
    _require(rec, "url")
    body = _render_article(
        replace(rec, journal=_join([rec.journal, f"[{rec.medium}]" if rec.medium else ""])),
        style)
    return _join([body, "Available from:", rec.url])


def _secondary_editor_block(rec: BibRecord, style: StyleConfig) -> str:
    """Editor/compiler credit after the edition, for authored monographs."""
    editors = rec.lists(Role.EDITOR, Role.COMPILER)
    if not editors or not rec.lists(Role.AUTHOR, Role.ORGANIZATION):
        return ""
    return format_contributors(editors, style)


def _book_contributors(rec: BibRecord, style: StyleConfig) -> str:
    primary = _primary_contributors(rec, style)
    if primary:
        return primary
    editors = rec.lists(Role.EDITOR, Role.COMPILER)
    if editors:
        return format_contributors(editors, style)
    return ""


def _render_book(rec: BibRecord, style: StyleConfig) -> str:
    _require(rec, "title")
    return _join([
        _book_contributors(rec, style),
        _sentence(rec.title),
        _sentence(rec.edition),
        _secondary_editor_block(rec, style),
        _imprint(rec, style),
    ])


def _render_dictionary(rec: BibRecord, style: StyleConfig) -> str:
    _require(rec, "title")
    segments = [
        _book_contributors(rec, style),
        _sentence(rec.title),
        _sentence(rec.edition),
        _imprint(rec, style),
    ]
    if rec.defined_term:
        term = rec.defined_term
        if rec.term_pages:
            term += f"; p. {rec.term_pages}"
        segments.append(_sentence(term))
    return _join(segments)


def _conference_line(rec: BibRecord, style: StyleConfig) -> str:
    parts = [rec.conference_name]
    if rec.conference_date is not None:
        parts.append(format_date(rec.conference_date, style))
    if rec.conference_place:
        parts.append(rec.conference_place)
    return _sentence("; ".join(p for p in parts if p))


def _render_chapter(rec: BibRecord, style: StyleConfig) -> str:
    _require(rec, "title", "booktitle")
    editors = rec.lists(Role.EDITOR, Role.COMPILER)
    in_block = "In: " + _join([
        format_contributors(editors, style) if editors else "",
        _sentence(rec.booktitle),
        _conference_line(rec, style) if rec.conference_name else "",
    ])
    segments = [
        _primary_contributors(rec, style),
        _sentence(rec.title),
        in_block,
        _imprint(rec, style),
    ]
    if rec.pages is not None:
        segments.append(_sentence(f"p. {format_pages(rec.pages, style)}"))
    return _join(segments)


def _render_proceedings(rec: BibRecord, style: StyleConfig) -> str:
    _require(rec, "title")
    return _join([
        _book_contributors(rec, style),
        _sentence(rec.title),
        _conference_line(rec, style) if rec.conference_name else "",
        _imprint(rec, style),
    ])


def _render_techreport(rec: BibRecord, style: StyleConfig) -> str:
    _require(rec, "title")
    segments = [
        _primary_contributors(rec, style, affiliation=rec.affiliation),
        _sentence(rec.title),
        _sentence(rec.report_type),
        _imprint(rec, style),
    ]
    if rec.report_number:
        segments.append(_sentence(f"Report No.: {rec.report_number}"))
    if rec.contract_number:
        segments.append(_sentence(f"Contract No.: {rec.contract_number}"))
    if rec.sponsor:
        segments.append(_sentence(f"Sponsored by {rec.sponsor}"))
    return _join(segments)


_DEFAULT_BRACKETS = {
    EntryType.DISSERTATION: "dissertation",
    EntryType.MAP: "map",
    EntryType.CDROM: "CD-ROM",
}


def _render_media_monograph(rec: BibRecord, style: StyleConfig) -> str:
    """Dissertations, audiovisual media, CD-ROMs and maps: title [medium]."""
    _require(rec, "title")
    bracket = rec.medium or _DEFAULT_BRACKETS.get(rec.entry_type, "")
    contributors = rec.lists(Role.AUTHOR, Role.ORGANIZATION, Role.CARTOGRAPHER,
                             Role.EDITOR, Role.COMPILER)
    return _join([
        format_contributors(contributors, style) if contributors else "",
        _bracketed_title(rec, bracket),
        _imprint(rec, style),
    ])


def _render_patent(rec: BibRecord, style: StyleConfig) -> str:
    _require(rec, "title", "report_number")
    people = rec.lists(Role.INVENTOR, Role.ASSIGNEE) or rec.lists(Role.AUTHOR)
    number_line = _join([rec.country, "patent", rec.report_number])
    return _join([
        format_contributors(people, style) if people else "",
        _sentence(rec.title),
        _sentence(number_line),
        _sentence(format_date(rec.date, style)) if rec.date is not None else "",
    ])


def _render_newspaper(rec: BibRecord, style: StyleConfig) -> str:
    _require(rec, "title", "journal")
    date_str = format_date(rec.date, style) if rec.date is not None else ""
    locator = date_str
    if rec.section:
        locator += f";Sect. {rec.section}"
        if rec.pages is not None:
            locator += f":{format_pages(rec.pages, style)}"
    elif rec.pages is not None:
        locator += f":{format_pages(rec.pages, style)}"
    if rec.column:
        locator += f" (col. {rec.column})"
    return _join([
        _primary_contributors(rec, style),
        _sentence(rec.title),
        _sentence(rec.journal),
        _sentence(locator),
    ])


def _render_web_monograph(rec: BibRecord, style: StyleConfig) -> str:
    _require(rec, "title", "url")
    bracket = f"{rec.medium}" if rec.medium else ""
    return _join([
        _book_contributors(rec, style),
        _bracketed_title(rec, bracket),
        _sentence(rec.edition),
        _imprint(rec, style, date_block=_web_date_block(rec, style)),
        _part_extent(rec),
        "Available from:",
        rec.url,
    ])


def _render_generic(rec: BibRecord, style: StyleConfig) -> str:
    """Fallback for unknown entry types: contributors, title, imprint."""
    segments = [
        _book_contributors(rec, style),
        _sentence(rec.title),
        _imprint(rec, style),
    ]
    if rec.url:
        segments += ["Available from:", rec.url]
    return _join(segments)


TEMPLATES = {
    EntryType.ARTICLE: _render_article,
    EntryType.WEBJOURNAL: _render_webjournal,
    EntryType.BOOK: _render_book,
    EntryType.DICTIONARY: _render_dictionary,
    EntryType.CHAPTER: _render_chapter,
    EntryType.INPROCEEDINGS: _render_chapter,
    EntryType.PROCEEDINGS: _render_proceedings,
    EntryType.TECHREPORT: _render_techreport,
    EntryType.DISSERTATION: _render_media_monograph,
    EntryType.AUDIOVISUAL: _render_media_monograph,
    EntryType.CDROM: _render_media_monograph,
    EntryType.MAP: _render_media_monograph,
    EntryType.PATENT: _render_patent,
    EntryType.NEWSPAPER: _render_newspaper,
    EntryType.WEBMONOGRAPH: _render_web_monograph,
    EntryType.WEBPAGE: _render_web_monograph,
    EntryType.WEBDATABASE: _render_web_monograph,
    EntryType.MISC: _render_generic,
}


def render_reference(rec: BibRecord, style: StyleConfig = DEFAULT_STYLE) -> str:
    """Render one record to its reference string.

    Raises :class:`MissingRequiredField` on the first unmet requirement of
    the record's template and :class:`ConflictingLocator` on impossible
    supplement combinations.
    """
    template = TEMPLATES.get(rec.entry_type, _render_generic)
    return template(rec, style)


@dataclass(frozen=True)
class Reference:
    """A fully rendered reference bound to its citation key and number."""

    number: int
    key: str
    text: str


def render_numbered(pairs: list[tuple[int, BibRecord]],
                    style: StyleConfig = DEFAULT_STYLE) -> list[Reference]:
    """Render ``(number, record)`` pairs, e.g. the output of ``resolve``."""
    return [Reference(number, rec.key, render_reference(rec, style))
            for number, rec in pairs]
