"""Spatial preprocessing: area containment events and vessel proximity."""

from __future__ import annotations

import json
import math
from collections import defaultdict
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, NamedTuple, Sequence

import numpy as np

from .engine import FluentAssertion, FluentId, InputEvent
from .intervals import Interval

EARTH_RADIUS_M = 6_371_000.0
AREA_TYPES = ("fishing", "natura", "anchorage", "nearPorts", "nearCoast")
METERS_PER_DEGREE = EARTH_RADIUS_M * math.pi / 180.0


class GeoPoint(NamedTuple):
    lon: float
    lat: float

    def validate(self) -> "GeoPoint":
        if not (-180.0 <= self.lon <= 180.0 and -90.0 <= self.lat <= 90.0):
            raise ValueError(f"coordinates out of range: {self}")
        return self


class AreaError(ValueError):
    pass


@dataclass(frozen=True)
class Area:
    """A typed polygon; ``rings`` holds the outer ring(s) and holes alike,
    containment is even-odd over all of them."""

    area_id: str
    area_type: str
    rings: tuple[tuple[tuple[float, float], ...], ...]
    bbox: tuple[float, float, float, float] = field(init=False, repr=False)

    def __post_init__(self) -> None:
        if self.area_type not in AREA_TYPES:
            raise AreaError(f"area {self.area_id}: unknown type {self.area_type!r}")
        if not self.rings:
            raise AreaError(f"area {self.area_id}: no rings")
        for ring in self.rings:
            if len(ring) < 4:
                raise AreaError(f"area {self.area_id}: ring needs at least 4 vertices")
            if tuple(ring[0]) != tuple(ring[-1]):
                raise AreaError(f"area {self.area_id}: ring is not closed")
            for lon, lat in ring:
                if not (-180 <= lon <= 180 and -90 <= lat <= 90):
                    raise AreaError(f"area {self.area_id}: vertex out of range")
        xs = [p[0] for r in self.rings for p in r]
        ys = [p[1] for r in self.rings for p in r]
        object.__setattr__(self, "bbox", (min(xs), min(ys), max(xs), max(ys)))

    @classmethod
    def from_rings(cls, area_id: str, area_type: str, rings: Iterable[Iterable[Sequence[float]]]) -> "Area":
        return cls(area_id, area_type, tuple(tuple((float(x), float(y)) for x, y in r) for r in rings))


def _on_segment(px, py, ax, ay, bx, by) -> bool:
    cross = (bx - ax) * (py - ay) - (by - ay) * (px - ax)
    if cross != 0:
        return False
    return min(ax, bx) <= px <= max(ax, bx) and min(ay, by) <= py <= max(ay, by)


def point_in_area(p: GeoPoint, area: Area) -> bool:
    """Even-odd containment; points on an edge count as inside."""
    x, y = p
    x0, y0, x1, y1 = area.bbox
    if x < x0 or x > x1 or y < y0 or y > y1:
        return False
    inside = False
    for ring in area.rings:
        for (ax, ay), (bx, by) in zip(ring, ring[1:]):
            if _on_segment(x, y, ax, ay, bx, by):
                return True
            if (ay > y) != (by > y):
                xi = ax + (y - ay) * (bx - ax) / (by - ay)
                if x < xi:
                    inside = not inside
    return inside


def points_in_area(lons: np.ndarray, lats: np.ndarray, area: Area) -> np.ndarray:
    """Vectorised :func:`point_in_area` over coordinate arrays."""
    x = np.asarray(lons, dtype=float)
    y = np.asarray(lats, dtype=float)
    x0, y0, x1, y1 = area.bbox
    result = np.zeros(x.shape, dtype=bool)
    idx = np.flatnonzero((x >= x0) & (x <= x1) & (y >= y0) & (y <= y1))
    if idx.size == 0:
        return result
    px, py = x[idx], y[idx]
    inside = np.zeros(idx.size, dtype=bool)
    boundary = np.zeros(idx.size, dtype=bool)
    for ring in area.rings:
        r = np.asarray(ring, dtype=float)
        ax, ay, bx, by = r[:-1, 0], r[:-1, 1], r[1:, 0], r[1:, 1]
        for k in range(len(ax)):
            cross = (bx[k] - ax[k]) * (py - ay[k]) - (by[k] - ay[k]) * (px - ax[k])
            boundary |= (
                (cross == 0)
                & (px >= min(ax[k], bx[k])) & (px <= max(ax[k], bx[k]))
                & (py >= min(ay[k], by[k])) & (py <= max(ay[k], by[k]))
            )
            straddles = (ay[k] > py) != (by[k] > py)
            if not straddles.any():
                continue
            with np.errstate(divide="ignore", invalid="ignore"):
                xi = ax[k] + (py - ay[k]) * (bx[k] - ax[k]) / (by[k] - ay[k])
            inside ^= straddles & (px < xi)
    result[idx] = inside | boundary
    return result


def haversine_m(a: GeoPoint, b: GeoPoint) -> float:
    lon1, lat1, lon2, lat2 = map(math.radians, (a[0], a[1], b[0], b[1]))
    h = math.sin((lat2 - lat1) / 2) ** 2 + math.cos(lat1) * math.cos(lat2) * math.sin((lon2 - lon1) / 2) ** 2
    return 2 * EARTH_RADIUS_M * math.asin(min(1.0, math.sqrt(h)))


# -- area registry ----------------------------------------------------------


def load_areas(path: str | Path) -> list[Area]:
    """Read a GeoJSON FeatureCollection of typed (Multi)Polygons."""
    with open(path) as f:
        doc = json.load(f)
    areas = []
    for i, feat in enumerate(doc.get("features", [])):
        props = feat.get("properties") or {}
        fid = props.get("area_id", f"#{i}")
        geom = feat.get("geometry") or {}
        try:
            if geom.get("type") == "Polygon":
                rings = geom["coordinates"]
            elif geom.get("type") == "MultiPolygon":
                rings = [r for poly in geom["coordinates"] for r in poly]
            else:
                raise AreaError(f"unsupported geometry {geom.get('type')!r}")
            areas.append(Area.from_rings(str(fid), props.get("area_type"), rings))
        except (AreaError, KeyError, TypeError, ValueError) as exc:
            raise AreaError(f"invalid area feature {fid}: {exc}") from None
    return areas


def areas_to_geojson(areas: Iterable[Area]) -> dict:
    return {
        "type": "FeatureCollection",
        "features": [
            {
                "type": "Feature",
                "properties": {"area_id": a.area_id, "area_type": a.area_type},
                "geometry": {"type": "Polygon", "coordinates": [[list(p) for p in r] for r in a.rings]},
            }
            for a in areas
        ],
    }


# -- spatial events ---------------------------------------------------------

Position = tuple  # (vessel, GeoPoint, t)


def _by_vessel(positions: Iterable[Position]) -> dict[str, list[tuple[int, float, float]]]:
    tracks: dict[str, list] = defaultdict(list)
    for vessel, p, t in positions:
        tracks[vessel].append((t, p[0], p[1]))
    for track in tracks.values():
        track.sort(key=lambda r: r[0])
    return tracks


def derive_area_events(positions: Iterable[Position], areas: Sequence[Area]) -> list[InputEvent]:
    """``entersArea``/``leavesArea`` events from consecutive positions of each vessel."""
    tracks = _by_vessel(positions)
    if not tracks or not areas:
        return []
    vessels = sorted(tracks)
    owner = np.concatenate([np.full(len(tracks[v]), i) for i, v in enumerate(vessels)])
    ts = np.concatenate([np.array([r[0] for r in tracks[v]], dtype=np.int64) for v in vessels])
    lons = np.concatenate([np.array([r[1] for r in tracks[v]]) for v in vessels])
    lats = np.concatenate([np.array([r[2] for r in tracks[v]]) for v in vessels])
    first = np.ones(len(owner), dtype=bool)
    first[1:] = owner[1:] != owner[:-1]
    events = []
    for area in areas:
        inside = points_in_area(lons, lats, area)
        if not inside.any():
            continue
        prev = np.zeros_like(inside)
        prev[1:] = inside[:-1]
        prev[first] = False
        for i in np.flatnonzero(inside != prev):
            name = "entersArea" if inside[i] else "leavesArea"
            events.append(InputEvent(name, (vessels[owner[i]], area.area_id), int(ts[i])))
    events.sort(key=lambda e: (e.t, e.args, e.name))
    return events


@dataclass(frozen=True)
class ProximityConfig:
    threshold_m: float = 100.0
    staleness_s: int = 1800

    def __post_init__(self) -> None:
        if self.threshold_m <= 0:
            raise ValueError("proximity threshold must be positive")


def _pair(a: str, b: str) -> tuple[str, str]:
    return (a, b) if a < b else (b, a)


def derive_proximity(positions: Iterable[Position], cfg: ProximityConfig = ProximityConfig()) -> list[FluentAssertion]:
    """Maximal intervals during which two vessels are closer than the threshold.

    The relation is re-evaluated whenever either vessel reports, using the
    latest known positions; a position older than ``staleness_s`` cannot
    witness proximity.  A close spell observed at instants ``t_i..t_k``
    lasts until the next instant at which the pair is not close, but at most
    ``staleness_s`` past ``t_k``; a spell still running at the end of the
    data ends one second after its last instant.
    """
    reports = sorted(((t, v, p[0], p[1]) for v, p, t in positions), key=lambda r: (r[0], r[1]))
    thr, stale = cfg.threshold_m, cfg.staleness_s
    cell = thr / METERS_PER_DEGREE
    latest: dict[str, tuple[int, float, float]] = {}
    cell_of: dict[str, tuple[int, int]] = {}
    grid: dict[tuple[int, int], set[str]] = defaultdict(set)
    # pair -> [spell start, last instant it was found close]
    spells: dict[tuple[str, str], list[int]] = {}
    close_to: dict[str, set[str]] = defaultdict(set)
    out: dict[tuple[str, str], list[Interval]] = defaultdict(list)

    def finish(pair, end):
        start, _ = spells.pop(pair)
        a, b = pair
        close_to[a].discard(b)
        close_to[b].discard(a)
        if end <= start:
            return
        lst = out[pair]
        if lst and lst[-1].end >= start:
            lst[-1] = Interval(lst[-1].start, max(end, lst[-1].end))
        else:
            lst.append(Interval(start, end))

    for t, v, lon, lat in reports:
        old = cell_of.get(v)
        c = (math.floor(lon / cell), math.floor(lat / cell))
        if old != c:
            if old is not None:
                grid[old].discard(v)
            grid[c].add(v)
            cell_of[v] = c
        latest[v] = (t, lon, lat)
        reach = int(math.ceil(1.0 / max(math.cos(math.radians(abs(lat) + cell)), 1e-6))) + 1
        now_close = set()
        for dx in range(-reach, reach + 1):
            for dy in (-2, -1, 0, 1, 2):
                for u in grid.get((c[0] + dx, c[1] + dy), ()):
                    if u == v:
                        continue
                    tu, ulon, ulat = latest[u]
                    if t - tu > stale:
                        continue
                    if haversine_m(GeoPoint(lon, lat), GeoPoint(ulon, ulat)) < thr:
                        now_close.add(u)
        for u in list(close_to[v]):
            if u not in now_close:
                pair = _pair(u, v)
                finish(pair, min(t, spells[pair][1] + stale))
        for u in now_close:
            pair = _pair(u, v)
            spell = spells.get(pair)
            if spell is None:
                spells[pair] = [t, t]
                close_to[u].add(v)
                close_to[v].add(u)
            elif t > spell[1] + stale:
                finish(pair, spell[1] + stale)
                spells[pair] = [t, t]
                close_to[u].add(v)
                close_to[v].add(u)
            else:
                spell[1] = t
    for pair in list(spells):
        finish(pair, spells[pair][1] + 1)
    return [
        FluentAssertion(FluentId("proximity", pair, True), tuple(lst))
        for pair, lst in sorted(out.items())
    ]
