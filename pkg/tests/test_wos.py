import re

from hypothesis import given, settings
from hypothesis import strategies as st

from citymaps.synthetic import demo_records, write_packages
from citymaps.wos import (
    Corpus,
    PublicationRecord,
    decode_bytes,
    filter_corpus,
    format_export,
    merge_exports,
    parse_export,
    read_export,
)

MINIMAL = "PT J\nPY 2005\nTC 3\nSO JOURNAL OF DOCUMENTATION\nDT Article\nC1 Univ X, Leiden, Netherlands.\nER"


def rec(uid=None, year=2000, dt="Article", tc=0, addresses=()):
    return PublicationRecord(uid, year, "J", dt, tc, tuple(addresses))


def test_minimal_block():
    res = parse_export(MINIMAL)
    assert len(res.records) == 1
    r = res.records[0]
    assert (r.pub_year, r.times_cited, r.journal, r.doc_type) == (2005, 3, "JOURNAL OF DOCUMENTATION", "Article")
    assert r.addresses == ("Univ X, Leiden, Netherlands.",)
    assert r.valid


def test_header_only_is_empty():
    assert parse_export("FN Thomson Reuters Web of Science\nVR 1.0\nEF\n").records == []


def test_multiline_fields():
    text = (
        "FN x\nVR 1.0\nPT J\nAU Smith, J\n   Doe, K\n"
        "C1 [Smith, J; Doe, K] Univ Amsterdam, Amsterdam, Netherlands.\n"
        "   [Nagy, P] Hungarian Acad Sci, Budapest, Hungary.\n"
        "PY 2001\nUT WOS:1\nER\nEF\n"
    )
    r = parse_export(text).records[0]
    assert r.authors == ("Smith, J", "Doe, K")
    assert r.addresses == ("Univ Amsterdam, Amsterdam, Netherlands.", "Hungarian Acad Sci, Budapest, Hungary.")
    assert r.times_cited == 0 and not r.has_times_cited
    assert not r.valid


def test_missing_py_kept_with_warning():
    res = parse_export("PT J\nTC 4\nER\nEF\n")
    assert len(res.records) == 1
    assert res.records[0].pub_year is None
    assert res.skipped == 0
    assert len(res.warnings) == 1


def test_malformed_block_skipped_and_parsing_continues():
    text = MINIMAL + "\nPT J\ngarbage here\nPY 2001\nER\n" + MINIMAL + "\nPT J\nPY 19x9\nER\nEF\n"
    res = parse_export(text)
    assert len(res.records) == 2
    assert res.skipped == 2
    assert len(res.diagnostics) == 2


def test_missing_ef_is_not_fatal(caplog):
    res = parse_export(MINIMAL + "\n")
    assert len(res.records) == 1
    assert "EF" in caplog.text


def test_crlf_and_latin1():
    data = (MINIMAL.replace("Leiden", "Zürich") + "\nEF\n").replace("\n", "\r\n").encode("latin-1")
    text = decode_bytes(data)
    r = parse_export(text).records[0]
    assert r.addresses == ("Univ X, Zürich, Netherlands.",)


def test_utf8_bom():
    text = decode_bytes(b"\xef\xbb\xbf" + (MINIMAL + "\nEF\n").encode())
    assert parse_export(text).records[0].pub_year == 2005


def test_thirteen_packages(tmp_path):
    paths = write_packages(demo_records(6500, seed=11), tmp_path, size=500)
    assert len(paths) == 13
    oracle = sum(len(re.findall(r"^ER\s*$", p.read_text(), re.M)) for p in paths)
    parsed = sum(len(read_export(p).records) for p in paths)
    assert oracle == 6500
    assert parsed == oracle


def test_merge_two_files_sharing_one_ut():
    a = [rec("U1"), rec("U2"), rec("U3")]
    b = [rec("U3"), rec("U4")]
    c = merge_exports([a, b])
    assert len(c) == len(a) + len(b) - 1
    assert [r.accession_id for r in c.records] == ["U1", "U2", "U3", "U4"]
    assert c.duplicates == 1


def test_merge_single_file_identity():
    a = [rec("U1"), rec(None), rec("U2")]
    assert merge_exports([a]).records == a


def test_merge_duplicates_against_set_union(tmp_path):
    recs = demo_records(300, seed=5)
    files = [recs[:120], recs[100:220] + [recs[5]], recs[220:]]
    expected = len({r.accession_id for part in files for r in part})
    assert sum(map(len, files)) - expected == 21
    assert len(merge_exports(files)) == expected


def test_records_without_ut_never_deduplicated():
    assert len(merge_exports([[rec(None)], [rec(None)]])) == 2


def test_filter_defaults():
    records = [
        rec("a", 2000, "Article"),
        rec("b", 2000, "Review"),
        rec("c", 1988, "Article"),
        rec("d", 1989, "Article"),
        rec("e", 2009, "Article"),
        rec("f", 2010, "Article"),
        rec("g", 2005, "Article; Proceedings Paper"),
        rec("h", 2005, "Editorial Material"),
        rec("i", 1995, "Article"),
        rec("j", 1999, "Article"),
    ]
    kept = filter_corpus(Corpus(records))
    assert [r.accession_id for r in kept.records] == ["a", "d", "e", "g", "i", "j"]
    ids = {r.accession_id for r in kept.records}
    assert "b" not in ids  # Review
    assert "c" not in ids and "d" in ids  # 1988 out, 1989 in


def test_filter_ten_records_seven_articles():
    records = [rec(str(i), 1995, "Article") for i in range(7)] + [
        rec("r", 1995, "Review"),
        rec("o", 1980, "Article"),
        rec("n", 2020, "Article"),
    ]
    assert len(filter_corpus(Corpus(records))) == 7


def test_empty_filter_warns(caplog):
    assert len(filter_corpus(Corpus([rec("x", 1950)]))) == 0
    assert "empty" in caplog.text


text_st = st.text(alphabet=st.characters(whitelist_categories=("Lu", "Ll", "Nd"), whitelist_characters=" &-."), min_size=1, max_size=30).map(str.strip).filter(bool)
record_st = st.builds(
    PublicationRecord,
    accession_id=st.one_of(st.none(), st.from_regex(r"WOS:[0-9]{6}", fullmatch=True)),
    pub_year=st.integers(1900, 2030),
    journal=text_st,
    doc_type=st.sampled_from(["Article", "Review", "Letter"]),
    times_cited=st.integers(0, 10**6),
    addresses=st.lists(st.builds(lambda a, b: f"{a}, {b}", text_st, text_st), max_size=4).map(tuple),
)


@settings(max_examples=100, deadline=None)
@given(st.lists(record_st, max_size=8))
def test_round_trip(records):
    res = parse_export(format_export(records))
    assert res.skipped == 0
    got = [(r.pub_year, r.times_cited, r.journal, r.doc_type, r.addresses) for r in res.records]
    assert got == [(r.pub_year, r.times_cited, r.journal, r.doc_type, r.addresses) for r in records]


@settings(max_examples=60, deadline=None)
@given(st.lists(st.tuples(record_st, st.booleans()), max_size=8))
def test_diagnostics_count_equals_skipped_blocks(blocks):
    parts = []
    for r, broken in blocks:
        body = format_export([r]).split("\n")[2:-3]  # drop header, ER and EF
        if broken:
            body.insert(1, "!! not a tagged line")
        parts.append("\n".join(body) + "\nER")
    res = parse_export("\n".join(parts) + "\nEF\n")
    n_broken = sum(b for _, b in blocks)
    assert res.skipped == len(res.diagnostics) == n_broken
    assert len(res.records) == len(blocks) - n_broken


@settings(max_examples=50, deadline=None)
@given(st.lists(record_st, max_size=20), st.integers(1900, 2030), st.integers(0, 40))
def test_filter_predicate_holds(records, lo, span):
    kept = filter_corpus(Corpus(records), {"Article"}, (lo, lo + span))
    assert all(r.doc_type == "Article" and lo <= r.pub_year <= lo + span for r in kept.records)
    assert len(kept) == sum(r.doc_type == "Article" and lo <= r.pub_year <= lo + span for r in records)
