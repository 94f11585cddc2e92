"""Observed versus expected counts per city and their z tests.

Every z value compares a city against the rest of all city occurrences with
the pooled z test for two independent proportions.
"""

from __future__ import annotations

import logging
import math
from collections import Counter, defaultdict
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Sequence

from .cities import CityKey, CityTally
from .percentiles import PercentileAssignment

log = logging.getLogger(__name__)

Z05 = 1.96
Z01 = 2.5758
Z001 = 3.2905
MIN_EXPECTED = 5
MIN_CITY_SIZE = 5


class Sig(str, Enum):
    NOT_COMPUTED = "not_computed"
    NS = "ns"
    P05 = "p05"
    P01 = "p01"
    P001 = "p001"

    @property
    def stars(self) -> str:
        return {Sig.P05: "*", Sig.P01: "**", Sig.P001: "***"}.get(self, "")

    @property
    def significant(self) -> bool:
        return self in (Sig.P05, Sig.P01, Sig.P001)


@dataclass(frozen=True)
class CityTopKStats:
    city: CityKey
    n: int
    observed: int
    expected: float
    z: float
    sig: Sig


@dataclass(frozen=True)
class CityImpactStats:
    city: CityKey
    n: int
    observed_top: int
    i3_observed: float
    i3_expected: float
    ri3r_observed: float
    ri3r_expected: float
    z_i3: float
    z_ri3r: float
    sig_i3: Sig
    sig_ri3r: Sig


def two_proportion_z(s1: float, n1: float, s2: float, n2: float) -> float:
    """Pooled z statistic for H0: s1/n1 == s2/n2.

    Positive when the first proportion is larger.  Returns 0 when the pooled
    proportion is 0 or 1, where the variance vanishes.
    """
    if n1 <= 0 or n2 <= 0:
        raise ValueError("both samples need a positive number of trials")
    if not (0 <= s1 <= n1 and 0 <= s2 <= n2):
        raise ValueError("successes must lie between 0 and the number of trials")
    p1 = s1 / n1
    p2 = s2 / n2
    pooled = (s1 + s2) / (n1 + n2)
    var = pooled * (1 - pooled) * (1 / n1 + 1 / n2)
    if var <= 0:
        log.info("degenerate z test input (pooled proportion %s)", pooled)
        return 0.0
    return (p1 - p2) / math.sqrt(var)


def significance(z: float, expected_ok: bool = True) -> tuple[Sig, str]:
    if not expected_ok:
        return Sig.NOT_COMPUTED, ""
    a = abs(z)
    if a > Z001:
        sig = Sig.P001
    elif a > Z01:
        sig = Sig.P01
    elif a > Z05:
        sig = Sig.P05
    else:
        sig = Sig.NS
    return sig, sig.stars


def top_tally(paper_cities: Sequence[set[CityKey]], assignments: Sequence[PercentileAssignment]) -> CityTally:
    """Per-city count of top-flagged papers (integer counting)."""
    counts: Counter = Counter()
    for cities, a in zip(paper_cities, assignments, strict=True):
        if a.top_flag:
            counts.update(cities)
    return CityTally(counts)


def city_topk_stats(tally: CityTally, tops: CityTally, k: float = 10) -> list[CityTopKStats]:
    """Observed and expected top-k papers for each city, sorted by city key."""
    total_n = tally.total_occurrences
    total_top = tops.total_occurrences
    out = []
    for city in sorted(tally.counts):
        n = tally[city]
        obs = tops[city]
        expected = k * n / 100
        rest = total_n - n
        z = two_proportion_z(obs, n, total_top - obs, rest) if rest > 0 else 0.0
        sig, _ = significance(z, expected >= MIN_EXPECTED)
        out.append(CityTopKStats(city, n, obs, expected, z, sig))
    return out


def i3_of(values: Iterable[float]) -> float:
    """Integrated impact: the sum of the papers' percentile values."""
    return math.fsum(values)


def i3_by_city(paper_cities: Sequence[set[CityKey]], assignments: Sequence[PercentileAssignment]) -> dict[CityKey, float]:
    """Each paper adds its full percentile to every one of its cities."""
    parts: dict[CityKey, list[float]] = defaultdict(list)
    for cities, a in zip(paper_cities, assignments, strict=True):
        for c in cities:
            parts[c].append(a.percentile)
    return {c: i3_of(v) for c, v in parts.items()}


def city_impact_stats(
    tally: CityTally,
    i3: dict[CityKey, float],
    tops: CityTally | None = None,
    min_n: int = MIN_CITY_SIZE,
) -> list[CityImpactStats]:
    """I3 and impact-per-paper against their output-proportional expectations.

    Totals run over all city occurrences; cities below ``min_n`` papers are
    left out of the result only.
    """
    total_n = tally.total_occurrences
    if total_n == 0:
        return []
    total_i3 = math.fsum(i3.get(c, 0.0) for c in tally.counts)
    mean_i3 = total_i3 / total_n
    out = []
    for city in sorted(tally.counts):
        n = tally[city]
        if n < min_n:
            continue
        obs = i3.get(city, 0.0)
        expected = n / total_n * total_i3
        if total_i3 > 0:
            z_i3 = two_proportion_z(obs, total_i3, n, total_n)
        else:
            z_i3 = 0.0
        rest_n = total_n - n
        if rest_n > 0:
            rest_i3 = max(total_i3 - obs, 0.0)
            z_ri3r = two_proportion_z(obs / 100, n, rest_i3 / 100, rest_n)
        else:
            z_ri3r = 0.0
        ri3r_obs = obs / n
        sig_i3, _ = significance(z_i3, expected >= MIN_EXPECTED)
        sig_ri3r, _ = significance(z_ri3r, mean_i3 >= MIN_EXPECTED)
        out.append(
            CityImpactStats(
                city=city,
                n=n,
                observed_top=tops[city] if tops is not None else 0,
                i3_observed=obs,
                i3_expected=expected,
                ri3r_observed=ri3r_obs,
                ri3r_expected=mean_i3,
                z_i3=z_i3,
                z_ri3r=z_ri3r,
                sig_i3=sig_i3,
                sig_ri3r=sig_ri3r,
            )
        )
    return out
