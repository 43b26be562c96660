"""Parsing of Web of Science style export files.

Two export dialects are supported: the tagged flat-file format (2-char
field codes in columns 1-2, continuation lines indented three spaces,
"ER" record terminator, "EF" file terminator) and the tab-delimited
format (header row of field codes, one record per line).  Both feed a
common record builder that keeps the retained columns.
"""

from __future__ import annotations

import dataclasses
import io
import json
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import BinaryIO, Iterator

from .errors import FormatError
from .normalize import NormalizationRules, YearMonth, normalize_date, split_authors, split_list_field

PUBLICATION_TYPES = frozenset({"B", "J", "P", "S"})

# tag -> BiblioRecord attribute, in canonical column order
RETAINED_TAGS = (
    "PT", "AF", "TI", "JI", "LA", "DT", "DE", "AB",
    "C1", "NR", "TC", "PD", "PY", "SC", "PG", "UT",
)

_LIST_TAGS = frozenset({"AF", "DE", "SC"})

_TAG_LINE = re.compile(r"^([A-Z0-9]{2})( |$)")
_TAG_TOKEN = re.compile(r"^[A-Z0-9]{2}$")


@dataclass
class BiblioRecord:
    """One publication with the retained export columns."""

    publication_type: str
    title: str
    author_full_names: list[str] = field(default_factory=list)
    source_abbrev: str = ""
    language: str = ""
    document_type: str = ""
    author_keywords: list[str] = field(default_factory=list)
    abstract: str | None = None
    addresses: str = ""
    cited_reference_count: int = 0
    times_cited: int = 0
    publication_date: str = ""
    publication_year: int = 0
    research_areas: list[str] = field(default_factory=list)
    page_count: int | None = None
    accession_id: str | None = None

    def __post_init__(self) -> None:
        if self.publication_type not in PUBLICATION_TYPES:
            raise ValueError(f"publication_type must be one of B/J/P/S, got {self.publication_type!r}")
        if self.times_cited < 0 or self.cited_reference_count < 0:
            raise ValueError("citation counts must be nonnegative")
        if self.page_count is not None and self.page_count < 1:
            raise ValueError("page_count must be positive when present")
        for name in ("author_full_names", "author_keywords", "research_areas"):
            if any(not entry for entry in getattr(self, name)):
                raise ValueError(f"{name} contains an empty entry")

    def distinct_authors(self) -> list[str]:
        """Author names with '[anonymous]' entries and repeats removed."""
        return split_authors("; ".join(self.author_full_names))


@dataclass
class Corpus:
    """A record collection plus the index of records with a usable date."""

    records: list[BiblioRecord]
    dated_view: dict[int, YearMonth]

    def __len__(self) -> int:
        return len(self.records)

    def dated_records(self) -> Iterator[tuple[BiblioRecord, YearMonth]]:
        for index, ym in self.dated_view.items():
            yield self.records[index], ym

    @classmethod
    def from_records(cls, records: list[BiblioRecord], rules: NormalizationRules | None = None) -> "Corpus":
        dated = {}
        for index, record in enumerate(records):
            ym = normalize_date(record.publication_date, record.publication_year, rules)
            if ym is not None:
                dated[index] = ym
        return cls(records=list(records), dated_view=dated)


@dataclass
class ParseResult:
    """Records parsed from one stream plus per-record skip warnings."""

    records: list[BiblioRecord]
    warnings: list[str]

    @property
    def skipped(self) -> int:
        return len(self.warnings)


def _to_int(text: str, default: int = 0) -> int:
    try:
        return int(text.strip())
    except (ValueError, AttributeError):
        return default


def _build_record(fields: dict[str, list[str]], warnings: list[str], context: str) -> BiblioRecord | None:
    """Assemble a BiblioRecord from tag -> raw lines; None if unusable."""
    def joined(tag: str) -> str:
        return " ".join(part.strip() for part in fields.get(tag, [])).strip()

    title = joined("TI")
    if not title:
        warnings.append(f"{context}: record missing title, skipped")
        return None

    pt = joined("PT")
    pt = pt.split()[0].upper() if pt else "J"
    if pt not in PUBLICATION_TYPES:
        warnings.append(f"{context}: unknown publication type {pt!r}, record skipped")
        return None

    authors: list[str] = []
    for line in fields.get("AF", []):
        authors.extend(name.strip() for name in line.split(";") if name.strip())

    page_count = _to_int(joined("PG"), 0)
    return BiblioRecord(
        publication_type=pt,
        title=title,
        author_full_names=authors,
        source_abbrev=joined("JI"),
        language=joined("LA"),
        document_type=joined("DT"),
        author_keywords=split_list_field(joined("DE"), lowercase=True),
        abstract=joined("AB") or None,
        addresses="; ".join(part.strip() for part in fields.get("C1", []) if part.strip()),
        cited_reference_count=max(0, _to_int(joined("NR"))),
        times_cited=max(0, _to_int(joined("TC"))),
        publication_date=joined("PD"),
        publication_year=_to_int(joined("PY")),
        research_areas=split_list_field(joined("SC")),
        page_count=page_count if page_count > 0 else None,
        accession_id=joined("UT") or None,
    )


def _parse_tagged(text: str) -> ParseResult:
    records: list[BiblioRecord] = []
    warnings: list[str] = []
    fields: dict[str, list[str]] = {}
    current_tag: str | None = None
    record_start = 1

    def flush(line_no: int) -> None:
        nonlocal fields, current_tag, record_start
        if fields:
            record = _build_record(fields, warnings, f"record starting at line {record_start}")
            if record is not None:
                records.append(record)
        fields = {}
        current_tag = None
        record_start = line_no + 1

    for line_no, raw_line in enumerate(text.splitlines(), start=1):
        line = raw_line.rstrip()
        if not line.strip():
            continue
        match = _TAG_LINE.match(line)
        if match:
            tag = match.group(1)
            if tag == "ER":
                flush(line_no)
                continue
            if tag == "EF":
                break
            if not fields:
                record_start = line_no
            current_tag = tag
            fields.setdefault(tag, []).append(line[3:].strip())
        elif line.startswith("   ") and current_tag:
            fields[current_tag].append(line.strip())
        elif current_tag:
            # tolerate nonstandard wrapping without the 3-space indent
            fields[current_tag].append(line.strip())
    flush(0)
    return ParseResult(records=records, warnings=warnings)


def _parse_tab_delimited(text: str) -> ParseResult:
    lines = text.splitlines()
    while lines and not lines[0].strip():
        lines.pop(0)
    if not lines:
        return ParseResult(records=[], warnings=[])

    header = lines[0].rstrip("\r\n").split("\t")
    tags = [tag.strip() for tag in header]
    bad = [tag for tag in tags if not _TAG_TOKEN.match(tag)]
    if bad:
        raise FormatError(f"malformed header at line 1: invalid field tags {bad}")

    records: list[BiblioRecord] = []
    warnings: list[str] = []
    for line_no, line in enumerate(lines[1:], start=2):
        if not line.strip():
            continue
        cells = line.split("\t")
        fields: dict[str, list[str]] = {}
        for tag, cell in zip(tags, cells):
            if cell.strip():
                fields[tag] = [cell.strip()]
        record = _build_record(fields, warnings, f"line {line_no}")
        if record is not None:
            records.append(record)
    return ParseResult(records=records, warnings=warnings)


def sniff_format(text: str) -> str:
    """Guess the export dialect from the first non-empty line."""
    for line in text.splitlines():
        if line.strip():
            return "tab_delimited" if "\t" in line else "tagged"
    return "tagged"


def parse_export(stream: BinaryIO | str | bytes, format: str = "auto") -> ParseResult:
    """Parse one export stream into records.

    `stream` may be a binary file object, bytes, or already-decoded
    text; content must be UTF-8 (an optional byte-order mark is
    stripped).  `format` is "tagged", "tab_delimited", or "auto".
    Unknown tags are ignored; a record missing its title is skipped
    with a counted warning.
    """
    if isinstance(stream, bytes):
        text = stream.decode("utf-8-sig")
    elif isinstance(stream, str):
        text = stream.lstrip("\ufeff")
    else:
        text = stream.read().decode("utf-8-sig")
    if format == "auto":
        format = sniff_format(text)
    if format == "tagged":
        return _parse_tagged(text)
    if format == "tab_delimited":
        return _parse_tab_delimited(text)
    raise ValueError(f"unknown format {format!r}")


def parse_file(path: str | Path, format: str = "auto") -> ParseResult:
    with open(path, "rb") as fh:
        return parse_export(fh, format)


def _duplicate_key_triple(record: BiblioRecord) -> tuple[str, str, str]:
    first_author = record.author_full_names[0] if record.author_full_names else ""
    return (record.title.strip().casefold(), first_author, record.source_abbrev)


def detect_duplicates(records: list[BiblioRecord]) -> list[list[int]]:
    """Group indices of records that are duplicates of one another.

    Two records match when their accession ids are equal, or, when
    either lacks an accession id, when their (case-folded trimmed
    title, first author, source) triples are equal.  Groups are the
    equivalence classes of that relation; only groups of size >= 2 are
    returned, ordered by first occurrence.
    """
    parent = list(range(len(records)))

    def find(i: int) -> int:
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    def union(a: int, b: int) -> None:
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[max(ra, rb)] = min(ra, rb)

    by_accession: dict[str, int] = {}
    by_triple: dict[tuple[str, str, str], list[int]] = {}
    for index, record in enumerate(records):
        if record.accession_id:
            first = by_accession.setdefault(record.accession_id, index)
            if first != index:
                union(first, index)
        by_triple.setdefault(_duplicate_key_triple(record), []).append(index)

    for bucket in by_triple.values():
        if len(bucket) < 2:
            continue
        lacking = [i for i in bucket if not records[i].accession_id]
        if not lacking:
            continue  # all carry distinct-or-equal ids; id rule already applied
        anchor = lacking[0]
        for i in bucket:
            if i == anchor:
                continue
            union(anchor, i)

    groups: dict[int, list[int]] = {}
    for index in range(len(records)):
        groups.setdefault(find(index), []).append(index)
    result = [sorted(members) for members in groups.values() if len(members) >= 2]
    result.sort(key=lambda group: group[0])
    return result


def merge_corpora(parts: list[list[BiblioRecord]], rules: NormalizationRules | None = None) -> Corpus:
    """Concatenate parsed parts, drop duplicates, and resolve dates.

    Parts are concatenated in argument order; for each duplicate group
    only the first occurrence is kept.  Records whose date cannot be
    resolved stay in the corpus but are absent from the dated view.
    """
    merged: list[BiblioRecord] = []
    for part in parts:
        merged.extend(part)
    dropped = {index for group in detect_duplicates(merged) for index in group[1:]}
    kept = [record for index, record in enumerate(merged) if index not in dropped]
    return Corpus.from_records(kept, rules)


def write_corpus_jsonl(corpus: Corpus, path: str | Path) -> None:
    """Write one JSON object per record, field names as in BiblioRecord."""
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for record in corpus.records:
            fh.write(json.dumps(dataclasses.asdict(record), sort_keys=True, ensure_ascii=False))
            fh.write("\n")


def read_corpus_jsonl(path: str | Path, rules: NormalizationRules | None = None) -> Corpus:
    records = []
    with open(path, encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                records.append(BiblioRecord(**json.loads(line)))
            except (json.JSONDecodeError, TypeError, ValueError) as exc:
                raise FormatError(f"{path}:{line_no}: bad corpus record: {exc}") from exc
    return Corpus.from_records(records, rules)


def _serialize_field(record: BiblioRecord, tag: str) -> str:
    if tag == "PT":
        return record.publication_type
    if tag == "AF":
        return "; ".join(record.author_full_names)
    if tag == "TI":
        return record.title
    if tag == "JI":
        return record.source_abbrev
    if tag == "LA":
        return record.language
    if tag == "DT":
        return record.document_type
    if tag == "DE":
        return "; ".join(record.author_keywords)
    if tag == "AB":
        return record.abstract or ""
    if tag == "C1":
        return record.addresses
    if tag == "NR":
        return str(record.cited_reference_count)
    if tag == "TC":
        return str(record.times_cited)
    if tag == "PD":
        return record.publication_date
    if tag == "PY":
        return str(record.publication_year)
    if tag == "SC":
        return "; ".join(record.research_areas)
    if tag == "PG":
        return "" if record.page_count is None else str(record.page_count)
    if tag == "UT":
        return record.accession_id or ""
    raise KeyError(tag)


def to_tab_delimited(records: list[BiblioRecord], tags: tuple[str, ...] = RETAINED_TAGS) -> str:
    """Serialize records back to the tab-delimited dialect."""
    out = io.StringIO()
    out.write("\t".join(tags))
    out.write("\n")
    for record in records:
        out.write("\t".join(_serialize_field(record, tag) for tag in tags))
        out.write("\n")
    return out.getvalue()
