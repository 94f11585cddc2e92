"""Citation percentiles within reference sets, top-k flags and NSF rank classes.

A paper's percentile is the share of its reference set cited *at most* as
often as itself (``<=`` counting), so the most cited paper always scores 100.
"""

from __future__ import annotations

import bisect
from collections import defaultdict
from dataclasses import dataclass, replace
from enum import Enum
from fractions import Fraction
from pathlib import Path
from typing import Hashable, Iterable, Optional, Sequence

from .wos import PublicationRecord


class GroupBy(str, Enum):
    YEAR = "year"
    YEAR_DOCTYPE = "year-doctype"


class Scope(str, Enum):
    FIELD = "field"
    JOURNAL = "journal"


class R6(str, Enum):
    TOP1 = "top1"
    TOP5 = "top5"
    TOP10 = "top10"
    TOP25 = "top25"
    TOP50 = "top50"
    BOTTOM50 = "bottom50"


R6_BANDS = ((99, R6.TOP1), (95, R6.TOP5), (90, R6.TOP10), (75, R6.TOP25), (50, R6.TOP50))


@dataclass(frozen=True)
class ReferenceGrouping:
    group_by: GroupBy = GroupBy.YEAR
    scope: Scope = Scope.FIELD

    def key(self, rec: PublicationRecord) -> tuple:
        k: tuple = (rec.pub_year,)
        if self.group_by is GroupBy.YEAR_DOCTYPE:
            k += (rec.doc_type,)
        if self.scope is Scope.JOURNAL:
            k += (rec.journal,)
        return k


@dataclass(frozen=True)
class PercentileAssignment:
    record: PublicationRecord
    percentile: float
    at_or_below: int
    set_size: int
    top_flag: bool = False
    r6_class: R6 = R6.BOTTOM50


@dataclass(frozen=True)
class YearThreshold:
    year: int
    top_count: int
    min_citations_for_top: Optional[int]


def rousseau_percentiles(citations: Sequence[int]) -> list[tuple[int, float]]:
    """(<=-count, percentile) for each value, against the whole sequence."""
    ordered = sorted(citations)
    n = len(ordered)
    out = []
    for c in citations:
        le = bisect.bisect_right(ordered, c)
        out.append((le, 100 * le / n))
    return out


def r6_classify(percentile: float) -> R6:
    for bound, cls in R6_BANDS:
        if percentile > bound:
            return cls
    return R6.BOTTOM50


def assign_percentiles(
    records: Iterable[PublicationRecord],
    grouping: ReferenceGrouping = ReferenceGrouping(),
) -> list[PercentileAssignment]:
    """Percentile of every record within its reference set, in input order."""
    records = list(records)
    groups: dict[Hashable, list[int]] = defaultdict(list)
    for i, rec in enumerate(records):
        if rec.pub_year is None:
            raise ValueError(f"record {rec.accession_id!r} has no publication year")
        groups[grouping.key(rec)].append(i)

    result: list[Optional[PercentileAssignment]] = [None] * len(records)
    for idx in groups.values():
        ranks = rousseau_percentiles([records[i].times_cited for i in idx])
        for i, (le, pct) in zip(idx, ranks):
            result[i] = PercentileAssignment(records[i], pct, le, len(idx), r6_class=r6_classify(pct))
    return result  # type: ignore[return-value]


def _check_k(k: float) -> Fraction:
    kf = Fraction(str(k))
    if not 0 < kf < 100:
        raise ValueError(f"top percentage must lie in (0, 100), got {k}")
    return kf


def is_top(a: PercentileAssignment, k: float = 10) -> bool:
    # exact rational comparison: 100 * le / n > 100 - k
    kf = _check_k(k)
    return 100 * a.at_or_below > (100 - kf) * a.set_size


def flag_top(assignments: Iterable[PercentileAssignment], k: float = 10) -> list[PercentileAssignment]:
    _check_k(k)
    return [replace(a, top_flag=is_top(a, k)) for a in assignments]


def year_thresholds(assignments: Iterable[PercentileAssignment], k: Optional[float] = None) -> list[YearThreshold]:
    """Per publication year: number of top papers and the fewest citations among them.

    With ``k`` given the flags are recomputed at that level first.
    """
    if k is not None:
        assignments = flag_top(assignments, k)
    counts: dict[int, int] = defaultdict(int)
    minima: dict[int, Optional[int]] = {}
    for a in assignments:
        y = a.record.pub_year
        minima.setdefault(y, None)
        if a.top_flag:
            counts[y] += 1
            cur = minima[y]
            c = a.record.times_cited
            minima[y] = c if cur is None else min(cur, c)
    return [YearThreshold(y, counts[y], minima[y]) for y in sorted(minima)]


def write_py_txt(thresholds: Iterable[YearThreshold], path: str | Path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for t in thresholds:
            m = "" if t.min_citations_for_top is None else str(t.min_citations_for_top)
            fh.write(f"{t.year}\t{t.top_count}\t{m}\n")
