"""Node styling and the map/table files built from city statistics."""

from __future__ import annotations

import csv
import html
import json
import logging
import math
from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from typing import Iterable, Optional, Sequence

from .cities import CityKey
from .geocode import GeoPoint
from .stats import MIN_EXPECTED, CityImpactStats, CityTopKStats, Sig

log = logging.getLogger(__name__)


class Color(str, Enum):
    DARK_GREEN = "darkgreen"
    GREEN = "green"
    LIME_GREEN = "limegreen"
    RED = "red"
    ORANGE_RED = "orangered"
    ORANGE = "orange"
    GREY = "gray"


class Mode(str, Enum):
    TOPK = "topk"
    I3 = "i3"
    RI3R = "ri3r"


@dataclass(frozen=True)
class NodeStyle:
    color: Color
    radius: float
    label: str


@dataclass(frozen=True)
class StyledCity:
    """A city row ready for output; values already in display units."""

    city: CityKey
    n: int
    observed: float
    expected: float
    z: float
    sig: Sig
    style: NodeStyle

    @property
    def name(self) -> str:
        return self.city.render()


def node_color(observed: float, expected: float, sig: Sig) -> Color:
    if observed == expected:
        return Color.GREY
    legit = expected >= MIN_EXPECTED
    if observed > expected:
        if not legit:
            return Color.LIME_GREEN
        return Color.DARK_GREEN if sig.significant else Color.GREEN
    if not legit:
        return Color.ORANGE
    return Color.RED if sig.significant else Color.ORANGE_RED


def _fmt_observed(value: float, mode: Mode) -> str:
    if mode is Mode.TOPK:
        return str(int(value))
    return f"{value:.1f}"


def label(observed: float, expected: float, z: float, sig: Sig, mode: Mode = Mode.TOPK) -> str:
    return f"observed: {_fmt_observed(observed, mode)}; expected: {expected:.1f}; z = {z:.2f}{sig.stars}"


def style_topk(stats: CityTopKStats) -> NodeStyle:
    return NodeStyle(
        color=node_color(stats.observed, stats.expected, stats.sig),
        radius=abs(stats.observed - stats.expected) + 1,
        label=label(stats.observed, stats.expected, stats.z, stats.sig),
    )


def impact_size(n: int) -> float:
    """Node size ln(n + 1); keeps single-paper nodes visible."""
    return math.log(n + 1)


def impact_values(stats: CityImpactStats, mode: Mode) -> tuple[float, float, float, Sig]:
    if mode is Mode.I3:
        return stats.i3_observed, stats.i3_expected, stats.z_i3, stats.sig_i3
    if mode is Mode.RI3R:
        return stats.ri3r_observed, stats.ri3r_expected, stats.z_ri3r, stats.sig_ri3r
    raise ValueError(f"not an impact mode: {mode}")


def style_impact(stats: CityImpactStats, mode: Mode = Mode.I3) -> NodeStyle:
    obs, exp, z, sig = impact_values(stats, mode)
    return NodeStyle(node_color(obs, exp, sig), impact_size(stats.n), label(obs, exp, z, sig, mode))


def styled_topk(stats: Iterable[CityTopKStats]) -> list[StyledCity]:
    return [StyledCity(s.city, s.n, s.observed, s.expected, s.z, s.sig, style_topk(s)) for s in stats]


def styled_impact(stats: Iterable[CityImpactStats], mode: Mode) -> list[StyledCity]:
    out = []
    for s in stats:
        obs, exp, z, sig = impact_values(s, mode)
        out.append(StyledCity(s.city, s.n, obs, exp, z, sig, style_impact(s, mode)))
    return out


def _ordered(cities: Iterable[StyledCity]) -> list[StyledCity]:
    return sorted(cities, key=lambda c: (-c.n, c.name))


def _located(cities: Iterable[StyledCity], points: dict[str, GeoPoint]) -> list[tuple[StyledCity, GeoPoint]]:
    rows = []
    for c in _ordered(cities):
        p = points.get(c.name)
        if p is None:
            log.warning("no coordinates for %s; left off the map", c.name)
            continue
        rows.append((c, p))
    return rows


def _coord(x: float) -> str:
    return f"{x:.4f}"


def emit_ztest(cities: Iterable[StyledCity], points: dict[str, GeoPoint], path: str | Path) -> None:
    """GPS Visualizer waypoint CSV: name, label, position, colour and size field ``n``."""
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["name", "desc", "latitude", "longitude", "color", "n"])
        for c, p in _located(cities, points):
            w.writerow([c.name, c.style.label, _coord(p.lat), _coord(p.lon), c.style.color.value, f"{c.style.radius:.2f}"])


def _r(x: float, nd: int = 4) -> float:
    return round(x, nd) + 0.0


def _row_values(c: StyledCity, p: Optional[GeoPoint]) -> dict:
    return {
        "name": c.name,
        "lat": _r(p.lat) if p else None,
        "lon": _r(p.lon) if p else None,
        "n": c.n,
        "observed": _r(c.observed),
        "expected": _r(c.expected),
        "z": _r(c.z),
        "sig": c.sig.value,
        "stars": c.sig.stars,
        "color": c.style.color.value,
        "size": _r(c.style.radius),
    }


def _cell(v) -> str:
    if v is None:
        return ""
    if isinstance(v, float):
        return repr(v)
    return str(v)


def emit_ucities(cities: Iterable[StyledCity], points: dict[str, GeoPoint], path: str | Path) -> None:
    """Statistics table for top-k mode; cities without coordinates keep empty lat/lon."""
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["city", "lat", "lon", "n", "observed", "expected", "z", "sig", "color", "radius"])
        for c in _ordered(cities):
            v = _row_values(c, points.get(c.name))
            w.writerow([_cell(v[k]) for k in ("name", "lat", "lon", "n", "observed", "expected", "z", "sig", "color", "size")])


UI3_HEADER = [
    "city", "lat", "lon", "n", "top",
    "i3_observed", "i3_expected", "z_i3", "sig_i3",
    "ri3r_observed", "ri3r_expected", "z_ri3r", "sig_ri3r",
    "color", "size",
]


def emit_ui3(stats: Sequence[CityImpactStats], mode: Mode, points: dict[str, GeoPoint], path: str | Path) -> None:
    """Statistics table for the impact modes; colour and size follow ``mode``."""
    ordered = sorted(stats, key=lambda s: (-s.n, s.city.render()))
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(UI3_HEADER)
        for s in ordered:
            p = points.get(s.city.render())
            st = style_impact(s, mode)
            w.writerow([
                s.city.render(), _cell(_r(p.lat) if p else None), _cell(_r(p.lon) if p else None), s.n, s.observed_top,
                _cell(_r(s.i3_observed)), _cell(_r(s.i3_expected)), _cell(_r(s.z_i3)), s.sig_i3.value,
                _cell(_r(s.ri3r_observed)), _cell(_r(s.ri3r_expected)), _cell(_r(s.z_ri3r)), s.sig_ri3r.value,
                st.color.value, _cell(_r(st.radius)),
            ])


def feature_collection(cities: Iterable[StyledCity], points: dict[str, GeoPoint]) -> dict:
    features = []
    for c, p in _located(cities, points):
        props = _row_values(c, p)
        props.pop("lat")
        props.pop("lon")
        props["label"] = c.style.label
        features.append({
            "type": "Feature",
            "geometry": {"type": "Point", "coordinates": [_r(p.lon, 6), _r(p.lat, 6)]},
            "properties": props,
        })
    return {"type": "FeatureCollection", "features": features}


def emit_geojson(cities: Iterable[StyledCity], points: dict[str, GeoPoint], path: str | Path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(feature_collection(cities, points), fh, indent=1, sort_keys=True)
        fh.write("\n")


HTML_TEMPLATE = """<!DOCTYPE html>
<html>
<head>
<meta charset="utf-8">
<title>{title}</title>
<link rel="stylesheet" href="https://unpkg.com/leaflet@1.9.4/dist/leaflet.css">
<script src="https://unpkg.com/leaflet@1.9.4/dist/leaflet.js"></script>
<style>html, body, #map {{ height: 100%; margin: 0; }}</style>
</head>
<body>
<div id="map"></div>
<script>
var data = {data};
var map = L.map('map').setView([30, 0], 2);
L.tileLayer('https://{{s}}.tile.openstreetmap.org/{{z}}/{{x}}/{{y}}.png', {{
  maxZoom: 18, attribution: '&copy; OpenStreetMap contributors'
}}).addTo(map);
var maxSize = Math.max.apply(null, data.features.map(function (f) {{ return f.properties.size; }}).concat([1]));
L.geoJSON(data, {{
  pointToLayer: function (f, latlng) {{
    var p = f.properties;
    return L.circleMarker(latlng, {{
      radius: 3 + 27 * p.size / maxSize, color: p.color, fillColor: p.color,
      fillOpacity: 0.6, weight: 1
    }});
  }},
  onEachFeature: function (f, layer) {{
    var p = f.properties;
    var div = document.createElement('div');
    var b = document.createElement('b');
    b.textContent = p.name;
    div.appendChild(b);
    div.appendChild(document.createElement('br'));
    div.appendChild(document.createTextNode(p.label + ' (n = ' + p.n + ')'));
    layer.bindPopup(div);
  }}
}}).addTo(map);
</script>
</body>
</html>
"""


def emit_html(cities: Iterable[StyledCity], points: dict[str, GeoPoint], path: str | Path, title: str = "City map") -> None:
    """Single page with the features inlined over a Leaflet slippy map; click a node for its label."""
    data = json.dumps(feature_collection(cities, points), sort_keys=True).replace("</", "<\\/")
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(HTML_TEMPLATE.format(title=html.escape(title), data=data))
