"""City identities from WoS address strings, counted by integer counting."""

from __future__ import annotations

import csv
import logging
import re
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Optional

from .wos import Corpus, PublicationRecord

log = logging.getLogger(__name__)

US_STATE_TOKEN = re.compile(r"^([A-Z]{2})(?:\s+\d{5}(?:-\d{4})?)?$")
US_TAIL_TOKEN = re.compile(r"^(?:([A-Z]{2})\s+)?(?:\d{5}(?:-\d{4})?\s+)?USA$")
DUTCH_POSTCODE = re.compile(r"\b\d{4}\s?[A-Z]{2}\b")
REGION_CODE = re.compile(r"[A-Z]{2,3}")


@dataclass(frozen=True)
class CityKey:
    city: str
    country: str
    region: Optional[str] = None

    def __post_init__(self):
        if not self.city or not self.country:
            raise ValueError("city and country must be nonempty")

    def render(self) -> str:
        if self.region:
            return f"{self.city}, {self.region}, {self.country}"
        return f"{self.city}, {self.country}"

    def __str__(self) -> str:
        return self.render()

    def __lt__(self, other: "CityKey") -> bool:
        return self.render() < other.render()


def _clean(token: str) -> str:
    return " ".join(token.split()).strip(" .").upper()


def _strip_postal(token: str) -> str:
    token = DUTCH_POSTCODE.sub(" ", token)
    words = [w for w in token.split() if not any(ch.isdigit() for ch in w)]
    # country-prefixed codes such as "NL-" or "D-" lose their digits above
    return " ".join(w for w in words if not w.endswith("-"))


def _has_postal(token: str) -> bool:
    return any(ch.isdigit() for ch in token)


def _non_us_city(rest: list[str]) -> str:
    # "Montreal, PQ H3C 3J7": region code plus postcode after the city
    # "Wolverhampton WV1 1SB, W Midlands": county after the city
    last = rest[-1]
    if _has_postal(last):
        city = _strip_postal(last)
        if (not city or REGION_CODE.fullmatch(city)) and len(rest) >= 2:
            return _strip_postal(rest[-2])
        return city
    if len(rest) >= 2 and _has_postal(rest[-2]):
        city = _strip_postal(rest[-2])
        if city and not REGION_CODE.fullmatch(city):
            return city
    return _strip_postal(last)


def normalize_address(raw: str) -> Optional[CityKey]:
    """Map one C1 address segment to a CityKey, or None if it cannot be resolved.

    The last comma token is the country.  US addresses carry the state either
    in the same token as the country ("PA 19104 USA") or in the token before
    it; the state is kept as region.  Elsewhere a trailing region/postcode
    token (e.g. "PQ H3C 3J7" in Canada) is skipped and the region dropped.
    """
    tokens = [_clean(t) for t in raw.split(",")]
    tokens = [t for t in tokens if t]
    if len(tokens) < 2:
        return None

    last = tokens[-1]
    rest = tokens[:-1]
    region = None
    m = US_TAIL_TOKEN.match(last)
    if m:
        country = "USA"
        region = m.group(1)
        if region is None and len(rest) >= 2:
            sm = US_STATE_TOKEN.match(rest[-1])
            if sm:
                region = sm.group(1)
                rest = rest[:-1]
        city = _strip_postal(rest[-1])
    else:
        country = _strip_postal(last) or last
        city = _non_us_city(rest)
    if not city or not country:
        return None
    return CityKey(city=city, country=country, region=region)


def parse_key(rendered: str) -> CityKey:
    key = normalize_address(rendered)
    if key is None:
        raise ValueError(f"not a city key: {rendered!r}")
    return key


def load_aliases(path: str | Path) -> dict[str, CityKey]:
    """Read a ``variant,canonical`` CSV; both columns are rendered CityKeys."""
    aliases = {}
    with open(path, newline="", encoding="utf-8") as fh:
        for row in csv.DictReader(fh):
            variant = parse_key(row["variant"])
            aliases[variant.render()] = parse_key(row["canonical"])
    return aliases


@dataclass
class Extractor:
    aliases: dict[str, CityKey] = field(default_factory=dict)
    unresolvable: list[str] = field(default_factory=list)

    def key_for(self, raw: str) -> Optional[CityKey]:
        key = normalize_address(raw)
        if key is None:
            self.unresolvable.append(raw)
            log.debug("unresolvable address %r", raw)
            return None
        return self.aliases.get(key.render(), key)

    def record_cities(self, record: PublicationRecord) -> set[CityKey]:
        out = set()
        for addr in record.addresses:
            key = self.key_for(addr)
            if key is not None:
                out.add(key)
        return out


def record_cities(record: PublicationRecord, aliases: Optional[dict[str, CityKey]] = None) -> set[CityKey]:
    """Distinct cities on one paper; repeated addresses count once."""
    return Extractor(aliases or {}).record_cities(record)


@dataclass
class CityTally:
    counts: Counter = field(default_factory=Counter)

    @property
    def total_occurrences(self) -> int:
        return sum(self.counts.values())

    def __getitem__(self, key: CityKey) -> int:
        return self.counts[key]

    def __len__(self) -> int:
        return len(self.counts)

    def __add__(self, other: "CityTally") -> "CityTally":
        return CityTally(self.counts + other.counts)


def tally(paper_cities: Iterable[set[CityKey]]) -> CityTally:
    """Occurrence count per city over per-paper city sets."""
    counts: Counter = Counter()
    for cities in paper_cities:
        counts.update(cities)
    return CityTally(counts)


def tally_corpus(corpus: Corpus, extractor: Optional[Extractor] = None) -> CityTally:
    ex = extractor or Extractor()
    return tally(ex.record_cities(r) for r in corpus.records)
