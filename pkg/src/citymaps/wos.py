"""Reader for Web of Science "full record" tagged plain-text exports.

Each field starts with a two-letter tag at column 0 followed by a space;
continuation lines start with three spaces.  A record ends with ``ER`` and the
file ends with ``EF``.  Only the fields needed downstream are kept.
"""

from __future__ import annotations

import codecs
import csv
import logging
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Optional

log = logging.getLogger(__name__)

TAG_RE = re.compile(r"^([A-Z][A-Z0-9]) (.*)$")
CONT_RE = re.compile(r"^   (.*)$")
BRACKET_RE = re.compile(r"^\s*\[[^\]]*\]\s*")

DEFAULT_DOC_TYPES = frozenset({"Article"})
DEFAULT_YEARS = (1989, 2009)


@dataclass(frozen=True)
class PublicationRecord:
    accession_id: Optional[str]
    pub_year: Optional[int]
    journal: str = ""
    doc_type: str = ""
    times_cited: int = 0
    addresses: tuple[str, ...] = ()
    authors: tuple[str, ...] = ()
    has_times_cited: bool = True

    @property
    def valid(self) -> bool:
        """True when the record carries both PY and TC."""
        return self.pub_year is not None and self.has_times_cited


@dataclass
class Diagnostic:
    source: str
    line: int
    message: str


@dataclass
class ParseResult:
    records: list[PublicationRecord]
    diagnostics: list[Diagnostic] = field(default_factory=list)
    warnings: list[Diagnostic] = field(default_factory=list)

    @property
    def skipped(self) -> int:
        return len(self.diagnostics)


@dataclass
class Corpus:
    records: list[PublicationRecord]
    source_files: list[str] = field(default_factory=list)
    duplicates: int = 0

    def __len__(self) -> int:
        return len(self.records)


class MalformedRecord(ValueError):
    pass


def split_addresses(lines: Iterable[str]) -> list[str]:
    """One address per C1 line, with any leading ``[Author; Author]`` group removed."""
    out = []
    for line in lines:
        line = BRACKET_RE.sub("", line).strip()
        if line:
            out.append(line)
    return out


def _build(fields: dict[str, list[str]]) -> PublicationRecord:
    def first(tag: str) -> Optional[str]:
        vals = fields.get(tag)
        return " ".join(v.strip() for v in vals).strip() if vals else None

    py = first("PY")
    year: Optional[int] = None
    if py is not None:
        if not py.isdigit():
            raise MalformedRecord(f"non-numeric PY {py!r}")
        year = int(py)

    tc = first("TC")
    cited = 0
    if tc is not None:
        if not tc.isdigit():
            raise MalformedRecord(f"non-numeric TC {tc!r}")
        cited = int(tc)

    return PublicationRecord(
        accession_id=first("UT"),
        pub_year=year,
        journal=first("SO") or "",
        doc_type=first("DT") or "",
        times_cited=cited,
        addresses=tuple(split_addresses(fields.get("C1", []))),
        authors=tuple(a.strip() for a in fields.get("AU", []) if a.strip()),
        has_times_cited=tc is not None,
    )


def parse_export(text: str, source: str = "<string>") -> ParseResult:
    """Parse one tagged export into records.

    A block with an unrecognisable line is skipped with a diagnostic; parsing
    resumes after the next ``ER``.  Records without PY are kept and flagged.
    """
    result = ParseResult(records=[])
    fields: dict[str, list[str]] = {}
    tag: Optional[str] = None
    bad: Optional[Diagnostic] = None
    in_record = False
    seen_ef = False

    def reset() -> None:
        nonlocal fields, tag, bad, in_record
        fields, tag, bad, in_record = {}, None, None, False

    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.rstrip("\r")
        if not line.strip():
            continue
        stripped = line.rstrip()
        if stripped == "ER":
            if bad is not None:
                result.diagnostics.append(bad)
            elif in_record:
                try:
                    rec = _build(fields)
                except MalformedRecord as exc:
                    result.diagnostics.append(Diagnostic(source, lineno, str(exc)))
                else:
                    if rec.pub_year is None:
                        result.warnings.append(Diagnostic(source, lineno, "record has no PY"))
                    elif not rec.has_times_cited:
                        result.warnings.append(Diagnostic(source, lineno, "record has no TC"))
                    result.records.append(rec)
            reset()
            continue
        if stripped == "EF":
            seen_ef = True
            if in_record:
                result.diagnostics.append(Diagnostic(source, lineno, "record not terminated by ER"))
            reset()
            continue

        m = TAG_RE.match(line)
        if m:
            tag, data = m.group(1), m.group(2)
            if tag in ("FN", "VR") and not in_record:
                continue
            in_record = True
            fields.setdefault(tag, []).append(data)
            continue
        m = CONT_RE.match(line)
        if m and tag is not None:
            fields[tag].append(m.group(1))
            continue
        in_record = True
        if bad is None:
            bad = Diagnostic(source, lineno, f"malformed line {line[:40]!r}")

    if in_record:
        result.diagnostics.append(Diagnostic(source, 0, "trailing record not terminated by ER"))
    if not seen_ef:
        log.warning("%s: no EF terminator", source)
    return result


def decode_bytes(data: bytes, source: str = "<bytes>") -> str:
    """Decode an export: BOM first, then UTF-8, then Latin-1."""
    for bom, enc in ((codecs.BOM_UTF8, "utf-8-sig"), (codecs.BOM_UTF16_LE, "utf-16"), (codecs.BOM_UTF16_BE, "utf-16")):
        if data.startswith(bom):
            log.info("%s: decoded as %s (BOM)", source, enc)
            return data.decode(enc)
    try:
        text = data.decode("utf-8")
    except UnicodeDecodeError:
        log.info("%s: not valid UTF-8, decoded as latin-1", source)
        return data.decode("latin-1")
    log.debug("%s: decoded as utf-8", source)
    return text


def read_export(path: str | Path) -> ParseResult:
    path = Path(path)
    return parse_export(decode_bytes(path.read_bytes(), str(path)), str(path))


def merge_exports(files: list[list[PublicationRecord]], names: Optional[list[str]] = None) -> Corpus:
    """Concatenate parsed files, dropping repeats of an accession id already seen."""
    seen: set[str] = set()
    records = []
    dups = 0
    for recs in files:
        for rec in recs:
            if rec.accession_id:
                if rec.accession_id in seen:
                    log.info("duplicate record %s dropped", rec.accession_id)
                    dups += 1
                    continue
                seen.add(rec.accession_id)
            records.append(rec)
    return Corpus(records, list(names or []), dups)


def doc_type_matches(doc_type: str, doc_types: Iterable[str]) -> bool:
    wanted = {d.strip().lower() for d in doc_types}
    return any(part.strip().lower() in wanted for part in doc_type.split(";"))


def filter_corpus(
    corpus: Corpus,
    doc_types: Iterable[str] = DEFAULT_DOC_TYPES,
    year_range: tuple[int, int] = DEFAULT_YEARS,
) -> Corpus:
    doc_types = list(doc_types)
    lo, hi = year_range
    kept = [
        r
        for r in corpus.records
        if r.pub_year is not None and lo <= r.pub_year <= hi and doc_type_matches(r.doc_type, doc_types)
    ]
    if not kept:
        log.warning("filter left an empty corpus (doc types %s, years %d-%d)", doc_types, lo, hi)
    return Corpus(kept, list(corpus.source_files), corpus.duplicates)


def format_record(rec: PublicationRecord) -> str:
    """Serialise a record back into tagged format (without the trailing ER)."""
    lines = ["PT J"]

    def put(tag: str, values: Iterable[str]) -> None:
        for i, v in enumerate(values):
            lines.append(f"{tag} {v}" if i == 0 else f"   {v}")

    put("AU", rec.authors)
    put("SO", [rec.journal] if rec.journal else [])
    put("DT", [rec.doc_type] if rec.doc_type else [])
    put("C1", rec.addresses)
    if rec.has_times_cited:
        put("TC", [str(rec.times_cited)])
    if rec.pub_year is not None:
        put("PY", [str(rec.pub_year)])
    if rec.accession_id:
        put("UT", [rec.accession_id])
    return "\n".join(lines)


def format_export(records: Iterable[PublicationRecord]) -> str:
    parts = ["FN Thomson Reuters Web of Science", "VR 1.0"]
    for rec in records:
        parts.append(format_record(rec))
        parts.append("ER")
        parts.append("")
    parts.append("EF")
    return "\n".join(parts) + "\n"


def write_corpus_csv(corpus: Corpus, path: str | Path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["accession_id", "pub_year", "journal", "doc_type", "times_cited", "addresses"])
        for r in corpus.records:
            w.writerow([r.accession_id or "", r.pub_year or "", r.journal, r.doc_type, r.times_cited, " | ".join(r.addresses)])
