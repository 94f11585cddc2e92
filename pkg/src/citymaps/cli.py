"""Command line entry point: tagged exports in, city maps and tables out."""

from __future__ import annotations

import argparse
import csv
import glob
import json
import logging
import sys
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Optional, Sequence

from . import __version__
from .cities import Extractor, load_aliases, tally
from .geocode import API_KEY_ENV, RemoteGeocoder, Resolver, Source, bundled_gazetteer, load_points, save_points
from .maps import Mode, emit_geojson, emit_html, emit_ucities, emit_ui3, emit_ztest, styled_impact, styled_topk
from .percentiles import GroupBy, ReferenceGrouping, Scope, assign_percentiles, flag_top, write_py_txt, year_thresholds
from .stats import city_impact_stats, city_topk_stats, i3_by_city, top_tally
from .synthetic import demo_records, write_packages
from .wos import Corpus, DEFAULT_YEARS, filter_corpus, merge_exports, read_export, write_corpus_csv

log = logging.getLogger("citymaps")

EXIT_INPUT = 2
EXIT_EMPTY = 1


class InputError(Exception):
    pass


@dataclass
class RunConfig:
    inputs: list[str]
    out: str = "out"
    doc_types: list[str] = field(default_factory=lambda: ["Article"])
    years: tuple[int, int] = DEFAULT_YEARS
    top_percent: float = 10
    min_city_size: int = 5
    min_top: int = 0
    mode: Mode = Mode.TOPK
    group_by: Optional[GroupBy] = None
    scope: Scope = Scope.FIELD
    gazetteer: Optional[str] = None
    geocode_cache: Optional[str] = None
    remote_geocode: bool = False
    geocode_url: Optional[str] = None
    geocode_interval: float = 1.0
    aliases: Optional[str] = None
    dump_corpus: bool = False

    def grouping(self) -> ReferenceGrouping:
        group_by = self.group_by
        if group_by is None:
            # top-k tests ignore document types; I3 normalises by year and type
            group_by = GroupBy.YEAR if self.mode is Mode.TOPK else GroupBy.YEAR_DOCTYPE
        return ReferenceGrouping(group_by, self.scope)

    def manifest(self) -> dict:
        d = asdict(self)
        d.pop("out")
        d["mode"] = self.mode.value
        d["group_by"] = self.grouping().group_by.value
        d["scope"] = self.scope.value
        d["years"] = list(self.years)
        return d


def expand_inputs(patterns: Sequence[str]) -> list[Path]:
    files: list[Path] = []
    for pat in patterns:
        matches = sorted(glob.glob(pat))
        if not matches:
            raise InputError(f"no input matches {pat!r}")
        files += [Path(m) for m in matches]
    for f in files:
        if not f.is_file():
            raise InputError(f"not a readable file: {f}")
    return files


class Diagnostics:
    def __init__(self):
        self.rows: list[tuple[str, str, str]] = []

    def add(self, kind: str, item: str, detail: str = "") -> None:
        self.rows.append((kind, item, detail))

    def count(self, kind: str) -> int:
        return sum(1 for r in self.rows if r[0] == kind)

    def write(self, path: Path) -> None:
        with open(path, "w", newline="", encoding="utf-8") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["kind", "item", "detail"])
            w.writerows(self.rows)


def _write_lines(path: Path, lines: Sequence[str]) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for line in lines:
            fh.write(line + "\n")


def load_corpus(files: Sequence[Path], diag: Diagnostics) -> Corpus:
    parsed = []
    for f in files:
        try:
            result = read_export(f)
        except OSError as exc:
            raise InputError(f"cannot read {f}: {exc}") from exc
        for d in result.diagnostics:
            diag.add("skipped_block", f"{d.source}:{d.line}", d.message)
        parsed.append(result.records)
    return merge_exports(parsed, [str(f) for f in files])


def build_resolver(cfg: RunConfig) -> Resolver:
    gazetteer = load_points(cfg.gazetteer, Source.GAZETTEER) if cfg.gazetteer else bundled_gazetteer()
    cache = {}
    if cfg.geocode_cache and Path(cfg.geocode_cache).exists():
        cache = load_points(cfg.geocode_cache, Source.CACHE)
    remote = None
    if cfg.remote_geocode:
        if not cfg.geocode_url:
            raise InputError("--remote-geocode needs --geocode-url")
        remote = RemoteGeocoder(cfg.geocode_url, min_interval=cfg.geocode_interval)
    return Resolver(gazetteer, cache, remote)


def run(cfg: RunConfig) -> int:
    """Execute the whole pipeline; returns a process exit status."""
    try:
        files = expand_inputs(cfg.inputs)
        diag = Diagnostics()
        corpus = load_corpus(files, diag)
        resolver = build_resolver(cfg)
        aliases = load_aliases(cfg.aliases) if cfg.aliases else {}
    except (InputError, OSError, ValueError, KeyError) as exc:
        log.error("%s", exc)
        return EXIT_INPUT

    invalid = [r for r in corpus.records if not r.valid]
    for r in invalid:
        missing = "PY" if r.pub_year is None else "TC"
        diag.add("missing_field", r.accession_id or "", f"no {missing}")
    valid = Corpus([r for r in corpus.records if r.valid], corpus.source_files, corpus.duplicates)
    analysed = filter_corpus(valid, cfg.doc_types, cfg.years)
    if not analysed.records:
        log.error("no records left to analyse")
        return EXIT_EMPTY

    extractor = Extractor(aliases)
    paper_cities = [extractor.record_cities(r) for r in analysed.records]
    for raw in extractor.unresolvable:
        diag.add("unresolvable_address", raw)
    city_tally = tally(paper_cities)

    k = cfg.top_percent
    assignments = flag_top(assign_percentiles(analysed.records, cfg.grouping()), k)
    tops = top_tally(paper_cities, assignments)

    if cfg.mode is Mode.TOPK:
        all_stats = city_topk_stats(city_tally, tops, k)
        kept = []
        for s in all_stats:
            if s.n < cfg.min_city_size:
                diag.add("below_min_city_size", s.city.render(), f"n={s.n}")
            elif s.observed < cfg.min_top:
                diag.add("below_min_top", s.city.render(), f"top={s.observed}")
            else:
                kept.append(s)
        styled = styled_topk(kept)
    else:
        i3 = i3_by_city(paper_cities, assignments)
        all_impact = city_impact_stats(city_tally, i3, tops, min_n=1)
        kept_impact = []
        for s in all_impact:
            if s.n < cfg.min_city_size:
                diag.add("below_min_city_size", s.city.render(), f"n={s.n}")
            elif s.observed_top < cfg.min_top:
                diag.add("below_min_top", s.city.render(), f"top={s.observed_top}")
            else:
                kept_impact.append(s)
        styled = styled_impact(kept_impact, cfg.mode)

    points = {}
    for c in styled:
        p = resolver.resolve(c.city)
        if p is None:
            diag.add("ungeocoded", c.name)
        else:
            points[c.name] = p

    out = Path(cfg.out)
    out.mkdir(parents=True, exist_ok=True)
    write_py_txt(year_thresholds(assignments), out / "py.txt")
    emit_ztest(styled, points, out / "ztest.txt")
    if cfg.mode is Mode.TOPK:
        emit_ucities(styled, points, out / "ucities.csv")
    else:
        emit_ui3(kept_impact, cfg.mode, points, out / "ui3.csv")
    emit_geojson(styled, points, out / "map.geojson")
    emit_html(styled, points, out / "map.html", title=f"Cities ({cfg.mode.value})")
    diag.write(out / "diagnostics.csv")
    _write_lines(out / "unresolved_addresses.txt", extractor.unresolvable)
    _write_lines(out / "geocode_errors.txt", resolver.unresolved)
    if cfg.dump_corpus:
        write_corpus_csv(analysed, out / "corpus.csv")
    if cfg.geocode_cache and resolver.cache_dirty:
        save_points(resolver.cache, cfg.geocode_cache)

    counts = {
        "files": len(files),
        "parsed": len(corpus),
        "skipped_blocks": diag.count("skipped_block"),
        "duplicates": corpus.duplicates,
        "invalid": len(invalid),
        "filtered_out": len(valid) - len(analysed),
        "analysed": len(analysed),
        "city_occurrences": city_tally.total_occurrences,
        "cities": len(city_tally),
        "cities_mapped": len(styled),
        "cities_below_min_city_size": diag.count("below_min_city_size"),
        "cities_below_min_top": diag.count("below_min_top"),
        "unresolvable_addresses": len(extractor.unresolvable),
        "ungeocoded": len(resolver.unresolved),
    }
    manifest = {"version": __version__, "config": cfg.manifest(), "inputs": [str(f) for f in files], "counts": counts}
    with open(out / "manifest.json", "w", encoding="utf-8", newline="\n") as fh:
        json.dump(manifest, fh, indent=2, sort_keys=True)
        fh.write("\n")
    if resolver.unresolved:
        log.warning("%d cities without coordinates (see geocode_errors.txt)", len(resolver.unresolved))
    log.info("%d papers, %d cities mapped, output in %s", len(analysed), len(styled), out)
    return 0


def _years(text: str) -> tuple[int, int]:
    try:
        lo, hi = (int(x) for x in text.split(":"))
    except ValueError:
        raise argparse.ArgumentTypeError("expected FIRST:LAST, e.g. 1989:2009")
    if lo > hi:
        raise argparse.ArgumentTypeError("first year after last year")
    return lo, hi


def _percent(text: str) -> float:
    v = float(text)
    if not 0 < v < 100:
        raise argparse.ArgumentTypeError("must lie strictly between 0 and 100")
    return v


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="citymaps", description=__doc__)
    ap.add_argument("--version", action="version", version=__version__)
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True)

    r = sub.add_parser("run", help="parse exports, test cities, write maps and tables")
    r.add_argument("--input", action="append", required=True, metavar="GLOB", help="tagged export file(s); repeatable")
    r.add_argument("--doc-type", action="append", dest="doc_types", metavar="TYPE", help="document type to keep (default Article)")
    r.add_argument("--years", type=_years, default=DEFAULT_YEARS, metavar="FIRST:LAST")
    r.add_argument("--top-percent", type=_percent, default=10)
    r.add_argument("--min-city-size", type=int, default=5)
    r.add_argument("--min-top", type=int, default=0)
    r.add_argument("--mode", type=Mode, choices=list(Mode), default=Mode.TOPK)
    r.add_argument("--group-by", type=GroupBy, choices=list(GroupBy), default=None)
    r.add_argument("--scope", type=Scope, choices=list(Scope), default=Scope.FIELD)
    r.add_argument("--gazetteer", help="city_key,lat,lon CSV (default: bundled)")
    r.add_argument("--geocode-cache", help="city_key,lat,lon CSV, read and extended")
    r.add_argument("--remote-geocode", action="store_true", help=f"query --geocode-url for unknown cities (key from ${API_KEY_ENV})")
    r.add_argument("--geocode-url", help="URL template with {city} {region} {country} {query} {key}")
    r.add_argument("--geocode-interval", type=float, default=1.0, help="minimum seconds between remote requests")
    r.add_argument("--aliases", help="variant,canonical CSV of city spellings")
    r.add_argument("--dump-corpus", action="store_true", help="also write corpus.csv")
    r.add_argument("--out", default="out")

    s = sub.add_parser("sample", help="write a synthetic tagged-format corpus")
    s.add_argument("out")
    s.add_argument("-n", type=int, default=3000)
    s.add_argument("--seed", type=int, default=7)
    return ap


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.INFO, format="%(levelname)s %(name)s: %(message)s")
    if args.command == "sample":
        for p in write_packages(demo_records(args.n, args.seed), args.out):
            print(p)
        return 0
    cfg = RunConfig(
        inputs=args.input,
        out=args.out,
        doc_types=args.doc_types or ["Article"],
        years=args.years,
        top_percent=args.top_percent,
        min_city_size=args.min_city_size,
        min_top=args.min_top,
        mode=args.mode,
        group_by=args.group_by,
        scope=args.scope,
        gazetteer=args.gazetteer,
        geocode_cache=args.geocode_cache,
        remote_geocode=args.remote_geocode,
        geocode_url=args.geocode_url,
        geocode_interval=args.geocode_interval,
        aliases=args.aliases,
        dump_corpus=args.dump_corpus,
    )
    return run(cfg)


if __name__ == "__main__":
    sys.exit(main())
