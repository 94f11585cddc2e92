"""Synthetic WoS-style corpora for demos and tests.

Nothing here is real bibliographic data; addresses follow the WoS C1 style so
that the extractor and gazetteer resolve them.
"""

from __future__ import annotations

import random
from pathlib import Path
from typing import Optional, Sequence

from .wos import PublicationRecord, format_export

JOURNALS = (
    "JOURNAL OF THE AMERICAN SOCIETY FOR INFORMATION SCIENCE AND TECHNOLOGY",
    "INFORMATION PROCESSING & MANAGEMENT",
    "JOURNAL OF DOCUMENTATION",
    "JOURNAL OF INFORMATION SCIENCE",
    "INFORMATION RESEARCH-AN INTERNATIONAL ELECTRONIC JOURNAL",
    "JOURNAL OF INFORMETRICS",
    "ANNUAL REVIEW OF INFORMATION SCIENCE AND TECHNOLOGY",
)

# one C1-style address per city in the bundled gazetteer
ADDRESSES = {
    "BUDAPEST, HUNGARY": "Hungarian Acad Sci, Lib, Informat Sci & Scientometr Res Unit, H-1051 Budapest, Hungary",
    "ZURICH, SWITZERLAND": "ETH, Profess Social Psychol & Res Higher Educ, CH-8092 Zurich, Switzerland",
    "AMSTERDAM, NETHERLANDS": "Univ Amsterdam, Amsterdam Sch Commun Res, NL-1012 CX Amsterdam, Netherlands",
    "LEIDEN, NETHERLANDS": "Leiden Univ, Ctr Sci & Technol Studies, NL-2300 AX Leiden, Netherlands",
    "WOLVERHAMPTON, ENGLAND": "Univ Wolverhampton, Sch Technol, Wolverhampton WV1 1SB, W Midlands, England",
    "PHILADELPHIA, PA, USA": "Drexel Univ, Coll Informat Sci & Technol, Philadelphia, PA 19104 USA",
    "MONTREAL, CANADA": "Univ Montreal, EBSI, Montreal, PQ H3C 3J7, Canada",
    "COPENHAGEN, DENMARK": "Royal Sch Lib & Informat Sci, DK-2300 Copenhagen, Denmark",
    "BRIGHTON, ENGLAND": "Univ Sussex, SPRU, Brighton BN1 9QE, E Sussex, England",
    "PARIS, FRANCE": "Ecole Mines, Ctr Sociol Innovat, F-75272 Paris, France",
    "LONDON, ENGLAND": "City Univ London, Dept Informat Sci, London EC1V 0HB, England",
    "EDINBURGH, SCOTLAND": "Univ Edinburgh, Sch Informat, Edinburgh EH8 9AB, Midlothian, Scotland",
    "CAMBRIDGE, ENGLAND": "Univ Cambridge, Comp Lab, Cambridge CB3 0FD, England",
    "DALIAN, PEOPLES R CHINA": "Dalian Univ Technol, WISE Lab, Dalian 116024, Peoples R China",
    "TOKYO, JAPAN": "Univ Tokyo, Grad Sch Educ, Tokyo 1130033, Japan",
    "BLOOMINGTON, IN, USA": "Indiana Univ, Sch Lib & Informat Sci, Bloomington, IN 47405 USA",
    "BATON ROUGE, LA, USA": "Louisiana State Univ, Sch Lib & Informat Sci, Baton Rouge, LA 70803 USA",
    "STANFORD, CA, USA": "Stanford Univ, Dept Comp Sci, Stanford, CA 94305 USA",
    "LOS ANGELES, CA, USA": "Univ Calif Los Angeles, Dept Informat Studies, Los Angeles, CA 90095 USA",
    "ALBUQUERQUE, NM, USA": "Univ New Mexico, Dept Comp Sci, Albuquerque, NM 87131 USA",
    "LEUVEN, BELGIUM": "Katholieke Univ Leuven, Steunpunt O&O Stat, B-3000 Leuven, Belgium",
    "ANTWERP, BELGIUM": "Univ Antwerp, IBW, B-2000 Antwerp, Belgium",
    "MUNICH, GERMANY": "Max Planck Gesell, Adm Headquarters, D-80539 Munich, Germany",
    "BERLIN, GERMANY": "Humboldt Univ, Inst Bibliothekswissensch, D-10099 Berlin, Germany",
    "SHEFFIELD, ENGLAND": "Univ Sheffield, Dept Informat Studies, Sheffield S10 2TN, S Yorkshire, England",
    "MADRID, SPAIN": "CSIC, CINDOC, E-28006 Madrid, Spain",
    "GRANADA, SPAIN": "Univ Granada, Fac Biblioteconomia & Documentac, E-18071 Granada, Spain",
    "SEOUL, SOUTH KOREA": "Yonsei Univ, Dept Lib & Informat Sci, Seoul 120749, South Korea",
    "TAIPEI, TAIWAN": "Natl Taiwan Univ, Dept Lib & Informat Sci, Taipei 10617, Taiwan",
    "BEIJING, PEOPLES R CHINA": "Peking Univ, Dept Informat Management, Beijing 100871, Peoples R China",
    "PITTSBURGH, PA, USA": "Univ Pittsburgh, Sch Informat Sci, Pittsburgh, PA 15260 USA",
    "CHAPEL HILL, NC, USA": "Univ N Carolina, Sch Informat & Lib Sci, Chapel Hill, NC 27599 USA",
    "AUSTIN, TX, USA": "Univ Texas, Sch Informat, Austin, TX 78712 USA",
    "URBANA, IL, USA": "Univ Illinois, Grad Sch Lib & Informat Sci, Urbana, IL 61801 USA",
    "TORONTO, CANADA": "Univ Toronto, Fac Informat Studies, Toronto, ON M5S 3G6, Canada",
    "SYDNEY, AUSTRALIA": "Univ New S Wales, Sch Informat Syst, Sydney, NSW 2052, Australia",
    "BORAS, SWEDEN": "Univ Coll Boras, Swedish Sch Lib & Informat Sci, SE-50190 Boras, Sweden",
    "TAMPERE, FINLAND": "Univ Tampere, Dept Informat Studies, FIN-33014 Tampere, Finland",
}

# relative output volume and citation multiplier per city for the demo corpus
DEMO_PROFILE = {
    "BUDAPEST, HUNGARY": (18, 2.6),
    "ZURICH, SWITZERLAND": (6, 3.0),
    "AMSTERDAM, NETHERLANDS": (13, 2.2),
    "LEIDEN, NETHERLANDS": (11, 2.5),
    "WOLVERHAMPTON, ENGLAND": (9, 2.2),
    "PHILADELPHIA, PA, USA": (10, 2.1),
    "MONTREAL, CANADA": (9, 2.0),
    "COPENHAGEN, DENMARK": (8, 1.4),
    "BRIGHTON, ENGLAND": (5, 1.5),
    "PARIS, FRANCE": (6, 1.3),
    "LONDON, ENGLAND": (20, 0.7),
    "EDINBURGH, SCOTLAND": (6, 0.7),
    "CAMBRIDGE, ENGLAND": (5, 0.8),
    "DALIAN, PEOPLES R CHINA": (4, 1.8),
    "TOKYO, JAPAN": (7, 0.5),
    "BLOOMINGTON, IN, USA": (14, 1.6),
    "BATON ROUGE, LA, USA": (4, 1.4),
    "STANFORD, CA, USA": (5, 1.5),
    "LOS ANGELES, CA, USA": (8, 1.3),
    "ALBUQUERQUE, NM, USA": (2, 3.0),
    "LEUVEN, BELGIUM": (9, 1.9),
    "ANTWERP, BELGIUM": (7, 1.7),
    "MUNICH, GERMANY": (4, 1.2),
    "BERLIN, GERMANY": (6, 0.8),
    "SHEFFIELD, ENGLAND": (12, 1.0),
    "MADRID, SPAIN": (8, 0.8),
    "GRANADA, SPAIN": (9, 1.1),
    "SEOUL, SOUTH KOREA": (7, 0.6),
    "TAIPEI, TAIWAN": (9, 0.6),
    "BEIJING, PEOPLES R CHINA": (6, 0.7),
    "PITTSBURGH, PA, USA": (8, 1.0),
    "CHAPEL HILL, NC, USA": (9, 1.1),
    "AUSTIN, TX, USA": (6, 1.0),
    "URBANA, IL, USA": (10, 1.2),
    "TORONTO, CANADA": (8, 1.0),
    "SYDNEY, AUSTRALIA": (6, 0.9),
    "BORAS, SWEDEN": (5, 1.1),
    "TAMPERE, FINLAND": (8, 1.2),
}

AUTHORS = ("Smith, J", "Garcia, M", "Nagy, P", "Muller, K", "Chen, L", "Dubois, A", "Jansen, E", "Kim, S")


def _c1(rng: random.Random, city: str) -> str:
    address = ADDRESSES[city]
    if rng.random() < 0.3:
        a, b = rng.sample(AUTHORS, 2)
        return f"[{a}; {b}] {address}"
    return address


def demo_records(n: int = 3000, seed: int = 7, years: tuple[int, int] = (1989, 2009)) -> list[PublicationRecord]:
    """Random corpus with city-dependent citation levels.

    Citations are geometric with a city multiplier so some cities sit well
    above or below the 10% top share.  About 5% of records are Reviews.
    """
    rng = random.Random(seed)
    cities = sorted(DEMO_PROFILE)
    weights = [DEMO_PROFILE[c][0] for c in cities]
    records = []
    for i in range(n):
        k = rng.choices((1, 1, 1, 2, 2, 3))[0]
        chosen = rng.choices(cities, weights=weights, k=k)
        addresses = [_c1(rng, c) for c in chosen]
        if rng.random() < 0.1:
            addresses.append(addresses[0])  # co-author at the same address
        mult = max(DEMO_PROFILE[c][1] for c in chosen)
        year = rng.randint(*years)
        age = years[1] + 2 - year
        mean = 1.5 * mult * age
        cited = int(rng.expovariate(1 / mean))
        records.append(
            PublicationRecord(
                accession_id=f"WOS:SYN{seed:03d}{i:07d}",
                pub_year=year,
                journal=rng.choice(JOURNALS),
                doc_type="Review" if rng.random() < 0.05 else "Article",
                times_cited=cited,
                addresses=tuple(addresses),
                authors=tuple(rng.sample(AUTHORS, min(len(addresses), len(AUTHORS)))),
            )
        )
    return records


def engineered_records(
    targets: dict[str, tuple[int, int]],
    fillers: Sequence[str],
    total_papers: int,
    total_top: int,
    years: Sequence[int] = tuple(range(1989, 2010)),
    seed: int = 1,
) -> list[PublicationRecord]:
    """Single-city papers whose top-10% membership is fixed in advance.

    ``targets`` maps a rendered city to (papers, top papers).  The remaining
    papers and tops go round-robin to ``fillers``.  Within each year the
    citation counts are distinct and the top papers hold the highest values,
    so with ``total_papers == 10 * total_top`` and year sizes a multiple of
    ten every intended top paper lands above the 90th percentile.
    """
    if total_papers != 10 * total_top or total_papers % (10 * len(years)):
        raise ValueError("total_papers must be 10 * total_top and split evenly into years")
    rng = random.Random(seed)
    top_slots: list[str] = []
    rest_slots: list[str] = []
    for city, (n, top) in targets.items():
        top_slots += [city] * top
        rest_slots += [city] * (n - top)
    filler_top = total_top - len(top_slots)
    filler_rest = total_papers - total_top - len(rest_slots)
    if filler_top < 0 or filler_rest < 0:
        raise ValueError("targets exceed the requested totals")
    top_slots += [fillers[i % len(fillers)] for i in range(filler_top)]
    rest_slots += [fillers[i % len(fillers)] for i in range(filler_rest)]
    rng.shuffle(top_slots)
    rng.shuffle(rest_slots)

    per_year = total_papers // len(years)
    tops_per_year = per_year // 10
    records = []
    for yi, year in enumerate(years):
        tops = top_slots[yi * tops_per_year:(yi + 1) * tops_per_year]
        rest = rest_slots[yi * (per_year - tops_per_year):(yi + 1) * (per_year - tops_per_year)]
        low = list(range(len(rest)))
        rng.shuffle(low)
        for j, city in enumerate(rest + tops):
            cited = low[j] if j < len(rest) else len(rest) + (j - len(rest))
            records.append(
                PublicationRecord(
                    accession_id=f"WOS:ENG{year}{j:05d}",
                    pub_year=year,
                    journal=JOURNALS[j % 6],
                    doc_type="Article",
                    times_cited=cited,
                    addresses=(ADDRESSES.get(city, city),),
                )
            )
    return records


def write_packages(records: Sequence[PublicationRecord], directory: str | Path, size: int = 500, prefix: str = "savedrecs") -> list[Path]:
    """Write records as tagged export files of ``size`` records each."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    paths = []
    for start in range(0, len(records), size):
        p = directory / f"{prefix}{start // size + 1:02d}.txt"
        p.write_text(format_export(records[start:start + size]), encoding="utf-8")
        paths.append(p)
    return paths


def main(argv: Optional[Sequence[str]] = None) -> None:
    import argparse

    ap = argparse.ArgumentParser(description="write a synthetic tagged-format corpus")
    ap.add_argument("out")
    ap.add_argument("-n", type=int, default=3000)
    ap.add_argument("--seed", type=int, default=7)
    args = ap.parse_args(argv)
    for p in write_packages(demo_records(args.n, args.seed), args.out):
        print(p)


if __name__ == "__main__":
    main()
