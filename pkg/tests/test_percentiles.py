import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from citymaps.percentiles import (
    R6,
    GroupBy,
    ReferenceGrouping,
    Scope,
    YearThreshold,
    assign_percentiles,
    flag_top,
    r6_classify,
    write_py_txt,
    year_thresholds,
)
from citymaps.wos import PublicationRecord


def recs(citations, year=2000, doc_type="Article", journal="J"):
    return [PublicationRecord(f"{year}-{i}", year, journal, doc_type, c) for i, c in enumerate(citations)]


def pct(citations):
    return [a.percentile for a in assign_percentiles(recs(citations))]


def pairwise_oracle(citations):
    n = len(citations)
    return [100 * sum(1 for d in citations if d <= c) / n for c in citations]


def test_two_papers():
    assert pct([0, 10]) == [50, 100]


def test_all_tied():
    assert pct([5, 5, 5]) == [100, 100, 100]


def test_single_paper():
    assert pct([0]) == [100]


def test_random_partitions_match_oracle():
    rng = random.Random(1)
    for _ in range(200):
        cits = [rng.randint(0, 1000) for _ in range(rng.randint(1, 200))]
        assert pct(cits) == pairwise_oracle(cits)


@given(st.lists(st.integers(0, 50), min_size=1, max_size=60))
def test_monotone_and_max_is_100(cits):
    p = pct(cits)
    for i in range(len(cits)):
        for j in range(len(cits)):
            if cits[i] >= cits[j]:
                assert p[i] >= p[j]
            if cits[i] == cits[j]:
                assert p[i] == p[j]
    assert p[cits.index(max(cits))] == 100
    assert min(p) >= 100 / len(cits)


def test_grouping_by_year():
    records = recs([0, 10], 2000) + recs([3], 2001)
    assert [a.percentile for a in assign_percentiles(records)] == [50, 100, 100]


def test_grouping_year_doctype_and_journal():
    records = recs([1, 2], doc_type="Article", journal="A") + recs([5], doc_type="Review", journal="A") + recs([9], journal="B")
    by_year = [a.percentile for a in assign_percentiles(records)]
    by_type = [a.percentile for a in assign_percentiles(records, ReferenceGrouping(GroupBy.YEAR_DOCTYPE))]
    by_journal = [a.percentile for a in assign_percentiles(records, ReferenceGrouping(GroupBy.YEAR_DOCTYPE, Scope.JOURNAL))]
    assert by_year == [25, 50, 75, 100]
    assert by_type == [100 / 3, 200 / 3, 100, 100]
    assert by_journal == [50, 100, 100, 100]


def test_year_required():
    with pytest.raises(ValueError):
        assign_percentiles([PublicationRecord("x", None)])


def test_flag_boundaries():
    top = flag_top(assign_percentiles(recs([0, 1, 2, 3, 4, 5, 6, 7, 8, 9])), 10)
    assert [a.percentile for a in top if a.top_flag] == [100]
    assert top[8].percentile == 90 and not top[8].top_flag


def test_single_paper_always_top():
    for k in (0.5, 10, 50, 99.5):
        assert flag_top(assign_percentiles(recs([0])), k)[0].top_flag


def test_twenty_distinct_values_two_flagged():
    # enumeration: percentiles are 5, 10, ..., 100; those above 90 are 95 and 100
    expected = {p for p in range(5, 101, 5) if p > 90}
    top = flag_top(assign_percentiles(recs(list(range(20)))), 10)
    assert {a.percentile for a in top if a.top_flag} == expected
    assert sum(a.top_flag for a in top) == 2


@pytest.mark.parametrize("k", [0, 100, -5, 150])
def test_bad_k(k):
    with pytest.raises(ValueError):
        flag_top(assign_percentiles(recs([1])), k)


@given(st.sets(st.integers(0, 10**6), min_size=1, max_size=300))
def test_flagged_fraction_distinct(values):
    values = list(values)
    n = len(values)
    top = flag_top(assign_percentiles(recs(values)), 10)
    flagged = sum(a.top_flag for a in top)
    oracle = sum(1 for v in values if Fraction(100 * sum(d <= v for d in values), n) > 90)
    assert flagged == oracle
    assert abs(flagged / n - Fraction(1, 10)) <= Fraction(1, n)
    if n % 10 == 0:
        assert flagged == n // 10


def test_year_thresholds_example():
    th = year_thresholds(flag_top(assign_percentiles(recs(list(range(20)), 2003)), 10))
    assert th == [YearThreshold(2003, 2, 18)]


def test_year_thresholds_single_and_empty():
    a = assign_percentiles(recs([7], 2001) + recs([1, 2, 3], 2002))
    assert year_thresholds(a, 10) == [YearThreshold(2001, 1, 7), YearThreshold(2002, 1, 3)]
    unflagged = assign_percentiles(recs([1, 2, 3], 2002))
    assert year_thresholds(unflagged) == [YearThreshold(2002, 0, None)]


def test_top_count_matches_flags():
    rng = random.Random(2)
    records = [PublicationRecord(str(i), rng.randint(1990, 1995), "J", "Article", rng.randint(0, 40)) for i in range(500)]
    flagged = flag_top(assign_percentiles(records), 10)
    for t in year_thresholds(flagged):
        assert t.top_count == sum(a.top_flag for a in flagged if a.record.pub_year == t.year)


def test_py_txt(tmp_path):
    p = tmp_path / "py.txt"
    write_py_txt([YearThreshold(1990, 3, 12), YearThreshold(1991, 0, None)], p)
    assert p.read_bytes() == b"1990\t3\t12\n1991\t0\t\n"


@pytest.mark.parametrize("p, cls", [(100, R6.TOP1), (99.5, R6.TOP1), (99, R6.TOP5), (96, R6.TOP5), (91, R6.TOP10), (90, R6.TOP25), (76, R6.TOP25), (75, R6.TOP50), (50.01, R6.TOP50), (50, R6.BOTTOM50), (0.1, R6.BOTTOM50)])
def test_r6(p, cls):
    assert r6_classify(p) is cls


def test_r6_bands_partition_grid():
    bounds = {R6.TOP1: (99, 100), R6.TOP5: (95, 99), R6.TOP10: (90, 95), R6.TOP25: (75, 90), R6.TOP50: (50, 75), R6.BOTTOM50: (0, 50)}
    seen = set()
    for i in range(1, 10001):
        p = i / 100
        cls = r6_classify(p)
        lo, hi = bounds[cls]
        assert lo < p <= hi
        assert sum(1 for lo2, hi2 in bounds.values() if lo2 < p <= hi2) == 1
        seen.add(cls)
    assert seen == set(R6)


def test_assignment_carries_r6():
    a = assign_percentiles(recs(list(range(100))))
    assert a[-1].r6_class is R6.TOP1
    assert a[49].r6_class is R6.BOTTOM50
