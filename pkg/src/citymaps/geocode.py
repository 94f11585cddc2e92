"""Coordinates for city keys: bundled gazetteer, CSV cache, optional web geocoder."""

from __future__ import annotations

import csv
import json
import logging
import os
import time
import urllib.error
import urllib.parse
import urllib.request
from dataclasses import dataclass, field
from enum import Enum
from importlib import resources
from pathlib import Path
from typing import Callable, Optional

from .cities import CityKey, parse_key

log = logging.getLogger(__name__)

API_KEY_ENV = "CITYMAPS_GEOCODER_KEY"


class Source(str, Enum):
    GAZETTEER = "gazetteer"
    CACHE = "cache"
    REMOTE = "remote"
    MANUAL = "manual"


@dataclass(frozen=True)
class GeoPoint:
    lat: float
    lon: float
    source: Source = Source.MANUAL

    def __post_init__(self):
        if not -90.0 <= self.lat <= 90.0:
            raise CoordinateRangeError(f"latitude {self.lat} out of range")
        if not -180.0 <= self.lon <= 180.0:
            raise CoordinateRangeError(f"longitude {self.lon} out of range")


class GeocodingError(Exception):
    """Base class for remote geocoding failures."""


class CoordinateRangeError(GeocodingError, ValueError):
    pass


class RateLimitError(GeocodingError):
    pass


class RemoteStatusError(GeocodingError):
    def __init__(self, status: int, message: str = ""):
        super().__init__(f"HTTP {status} {message}".strip())
        self.status = status


class MalformedResponseError(GeocodingError):
    pass


def load_points(path: str | Path, source: Source) -> dict[str, GeoPoint]:
    """Read a ``city_key,lat,lon`` CSV.  Keys are re-rendered to canonical form."""
    points = {}
    with open(path, newline="", encoding="utf-8") as fh:
        for row in csv.DictReader(fh):
            key = parse_key(row["city_key"]).render()
            points[key] = GeoPoint(float(row["lat"]), float(row["lon"]), source)
    return points


def save_points(points: dict[str, GeoPoint], path: str | Path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["city_key", "lat", "lon"])
        for key in sorted(points):
            p = points[key]
            w.writerow([key, repr(p.lat), repr(p.lon)])


def bundled_gazetteer() -> dict[str, GeoPoint]:
    with resources.as_file(resources.files("citymaps") / "data" / "gazetteer.csv") as path:
        return load_points(path, Source.GAZETTEER)


def _pick(body: dict, *names: str):
    for n in names:
        if n in body:
            return body[n]
    raise MalformedResponseError(f"response lacks any of {names}")


class RemoteGeocoder:
    """Endpoint-agnostic JSON geocoding client.

    ``url_template`` may use ``{city}``, ``{region}``, ``{country}``, ``{query}``
    and ``{key}``; values are URL-quoted.  Requests are spaced at least
    ``min_interval`` seconds apart.
    """

    def __init__(
        self,
        url_template: str,
        api_key: Optional[str] = None,
        min_interval: float = 1.0,
        timeout: float = 10.0,
        clock: Callable[[], float] = time.monotonic,
        sleep: Callable[[float], None] = time.sleep,
    ):
        self.url_template = url_template
        self.api_key = api_key if api_key is not None else os.environ.get(API_KEY_ENV, "")
        self.min_interval = min_interval
        self.timeout = timeout
        self._clock = clock
        self._sleep = sleep
        self._last: Optional[float] = None

    def url_for(self, key: CityKey) -> str:
        q = urllib.parse.quote
        return self.url_template.format(
            city=q(key.city),
            region=q(key.region or ""),
            country=q(key.country),
            query=q(key.render()),
            key=q(self.api_key),
        )

    def _throttle(self) -> None:
        if self._last is not None:
            wait = self.min_interval - (self._clock() - self._last)
            if wait > 0:
                self._sleep(wait)
        self._last = self._clock()

    def fetch(self, key: CityKey) -> GeoPoint:
        self._throttle()
        url = self.url_for(key)
        try:
            with urllib.request.urlopen(url, timeout=self.timeout) as resp:
                body = resp.read()
        except urllib.error.HTTPError as exc:
            if exc.code == 429:
                raise RateLimitError(f"rate limited by {self.url_template}") from exc
            raise RemoteStatusError(exc.code, str(exc.reason)) from exc
        try:
            data = json.loads(body)
        except ValueError as exc:
            raise MalformedResponseError("response is not JSON") from exc
        if isinstance(data, list):
            if not data:
                raise MalformedResponseError("empty result list")
            data = data[0]
        if not isinstance(data, dict):
            raise MalformedResponseError("response is not a JSON object")
        try:
            lat = float(_pick(data, "lat", "latitude"))
            lon = float(_pick(data, "lon", "lng", "longitude"))
        except (TypeError, ValueError) as exc:
            raise MalformedResponseError("non-numeric coordinates") from exc
        return GeoPoint(lat, lon, Source.REMOTE)


def fetch_remote(key: CityKey, client: RemoteGeocoder) -> GeoPoint:
    return client.fetch(key)


@dataclass
class Resolver:
    """Looks keys up in gazetteer, then cache, then (optionally) the remote client."""

    gazetteer: dict[str, GeoPoint]
    cache: dict[str, GeoPoint] = field(default_factory=dict)
    remote: Optional[RemoteGeocoder] = None
    unresolved: list[str] = field(default_factory=list)
    cache_dirty: bool = False

    def resolve(self, key: CityKey) -> Optional[GeoPoint]:
        name = key.render()
        if name in self.gazetteer:
            return self.gazetteer[name]
        if name in self.cache:
            return self.cache[name]
        if self.remote is not None:
            try:
                point = self.remote.fetch(key)
            except (GeocodingError, OSError) as exc:
                log.warning("geocoding %s failed: %s", name, exc)
            else:
                self.cache[name] = point
                self.cache_dirty = True
                return point
        self.unresolved.append(name)
        return None


def resolve(
    key: CityKey,
    gazetteer: dict[str, GeoPoint],
    cache: dict[str, GeoPoint],
    remote: Optional[RemoteGeocoder] = None,
) -> Optional[GeoPoint]:
    return Resolver(gazetteer, cache, remote).resolve(key)
