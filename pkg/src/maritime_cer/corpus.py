"""Synthetic AIS corpora.

Everything is laid out in a local metric frame (x east, y north, metres)
and converted to lon/lat at the end.  The coast runs along ``y = 0`` with
land to the south.

* :func:`golden_scenario`: ten hand-scripted vessels whose activities are
  known in closed form (see the golden tests).
* :func:`generate_corpus`: seeded random mix of scripted activity groups
  (stops, trawl zigzags, tug escorts, pilot meets, rendez-vous, SAR sweeps,
  drifts, coastal speeding) and a smooth-cruise background fleet.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .geo import METERS_PER_DEGREE, Area, GeoPoint
from .patterns import ThresholdTable, VesselInfo, VesselRegistry
from .synopsis import AisMessage

LON0, LAT0 = -6.0, 47.0
T0 = 1_443_657_600  # 2015-10-01T00:00:00Z, a multiple of 2 h


def to_geo(x: float, y: float) -> GeoPoint:
    lat = LAT0 + y / METERS_PER_DEGREE
    lon = LON0 + x / (METERS_PER_DEGREE * math.cos(math.radians(lat)))
    return GeoPoint(lon, lat)


def rect_area(area_id: str, area_type: str, x0: float, y0: float, x1: float, y1: float) -> Area:
    corners = [(x0, y0), (x1, y0), (x1, y1), (x0, y1), (x0, y0)]
    return Area.from_rings(area_id, area_type, [[tuple(to_geo(x, y)) for x, y in corners]])


KNOT = 1852.0 / 3600.0  # metres per second


@dataclass
class Scenario:
    messages: list[AisMessage]
    areas: list[Area]
    registry: VesselRegistry
    start: int
    end: int


@dataclass
class _Point:
    t: int
    x: float
    y: float
    speed: float
    cog: float
    heading: float | None


@dataclass
class Track:
    """Dead-reckoning track builder: each call emits messages at the current
    position and then advances along the course over ground."""

    vessel: str
    x: float
    y: float
    t: int
    cadence: int = 60
    rng: np.random.Generator | None = None
    speed_noise: float = 0.0
    heading_noise: float = 0.0
    points: list[_Point] = field(default_factory=list)

    def _noisy(self, speed: float, heading: float | None) -> tuple[float, float | None]:
        if self.rng is None:
            return speed, heading
        if speed > 0 and self.speed_noise:
            speed *= 1.0 + self.rng.uniform(-self.speed_noise, self.speed_noise)
        if heading is not None and self.heading_noise:
            heading = (heading + self.rng.uniform(-self.heading_noise, self.heading_noise)) % 360.0
        return speed, heading

    def emit(self, speed: float, cog: float, heading: float | None = None, *, advance: bool = True) -> None:
        rep_speed, rep_heading = self._noisy(speed, cog if heading is None else heading)
        self.points.append(_Point(self.t, self.x, self.y, round(rep_speed, 2), cog % 360.0,
                                  None if rep_heading is None else round(rep_heading, 1)))
        if advance:
            d = speed * KNOT * self.cadence
            self.x += d * math.sin(math.radians(cog))
            self.y += d * math.cos(math.radians(cog))
        self.t += self.cadence

    def sail(self, n: int, speed: float, cog: float, heading: Callable[[int], float] | float | None = None) -> "Track":
        for i in range(n):
            h = heading(i) if callable(heading) else heading
            self.emit(speed, cog, h)
        return self

    def ramp(self, target: float, cog: Callable[[int], float] | float, step: float = 0.15) -> "Track":
        """Change speed gradually (by ``step`` of the current speed per report,
        at least 0.3 kn) until ``target`` is reached."""
        speed = self.points[-1].speed if self.points else 0.0
        i = 0
        while abs(speed - target) > 1e-9:
            delta = max(0.3, speed * step)
            speed = min(target, speed + delta) if target > speed else max(target, speed - delta)
            self.emit(speed, cog(i) if callable(cog) else cog)
            i += 1
        return self

    def stay(self, n: int) -> "Track":
        for _ in range(n):
            self.emit(0.0, self.points[-1].cog if self.points else 0.0, advance=False)
        return self

    def silent(self, seconds: int) -> "Track":
        self.t += seconds
        return self

    def follow(self, leader: "Track", t_from: int, t_to: int, dx: float, dy: float,
               speed: float | None = None) -> "Track":
        """Report alongside ``leader`` (offset ``dx, dy``) at its report times in ``[t_from, t_to)``."""
        for p in leader.points:
            if t_from <= p.t < t_to:
                s = p.speed if speed is None else speed
                s, h = self._noisy(s, p.cog)
                self.points.append(_Point(p.t, p.x + dx, p.y + dy, round(s, 2), p.cog, h))
                self.x, self.y, self.t = p.x + dx, p.y + dy, p.t + self.cadence
        return self

    def position_at(self, t: int) -> tuple[float, float]:
        for p in self.points:
            if p.t == t:
                return p.x, p.y
        raise KeyError(t)

    def messages(self) -> list[AisMessage]:
        return [
            AisMessage(self.vessel, p.t, to_geo(p.x, p.y), p.speed, p.cog, p.heading)
            for p in self.points
        ]


def _collect(tracks: list[Track]) -> list[AisMessage]:
    msgs = [m for tr in tracks for m in tr.messages()]
    msgs.sort(key=lambda m: (m.t, m.vessel))
    return msgs


# -- the hand-scripted golden scenario ---------------------------------------

GOLDEN_VESSELS = {
    "227000001": "sar",  # leaves port at speed along the coast, then sweeps
    "227000002": "cargo",  # anchored two hours
    "227000003": "other",  # drifts for an hour in open sea
    "227000004": "fishing",  # trawls in a fishing area
    "227000005": "tug",
    "227000006": "cargo",  # towed by 227000005
    "227000007": "pilot",
    "227000008": "tanker",  # boarded by 227000007
    "227000009": "cargo",  # rendez-vous with 227000010
    "227000010": "cargo",
}
GOLDEN_MINUTES = 240


def golden_areas() -> list[Area]:
    return [
        rect_area("coast-1", "nearCoast", -1000, -2000, 60000, 300),
        rect_area("port-1", "nearPorts", 0, -2000, 4000, 2000),
        rect_area("anch-1", "anchorage", 5000, 2000, 8000, 5000),
        rect_area("fish-1", "fishing", 20000, 10000, 30000, 20000),
        rect_area("natura-1", "natura", 32000, 10000, 38000, 14000),
    ]


def golden_scenario() -> Scenario:
    """Ten vessels reporting every minute for four hours from :data:`T0`.

    Positions are scripted exactly (no noise) so that every area crossing
    and every proximity spell happens at a known minute.
    """
    M = GOLDEN_MINUTES
    tracks = []

    def scripted(vessel: str, rows: Callable[[int], tuple]) -> Track:
        tr = Track(vessel, 0, 0, T0)
        for m in range(M + 1):
            x, y, speed, cog, heading = rows(m)
            tr.points.append(_Point(T0 + 60 * m, x, y, speed, cog, heading))
        tracks.append(tr)
        return tr

    # 227000001 (sar): stopped in port (m 0-9), 12 kn east along the coast
    # (m 10-29), turns north out of the coastal strip (m 30), zigzags at
    # 10 kn with heading 20/340 in five-minute blocks (m 31-130), then
    # heads north at 10 kn.
    sar_pos = [(2000.0, 100.0)]
    for m in range(1, M + 1):
        x, y = sar_pos[-1]
        if m <= 9:
            pass
        elif m <= 29:
            x += 370
        elif m == 30:
            y += 370
        elif m <= 130:
            x += 105 if ((m - 31) // 5) % 2 == 0 else -105
            y += 289
        else:
            y += 308
        sar_pos.append((x, y))

    def sar_row(m):
        x, y = sar_pos[m]
        if m <= 9:
            return x, y, 0.0, 90.0, 90.0
        if m <= 29:
            return x, y, 12.0, 90.0, 90.0
        if m == 30:
            return x, y, 12.0, 0.0, 0.0
        if m <= 130:
            h = 20.0 if ((m - 31) // 5) % 2 == 0 else 340.0
            return x, y, 10.0, h, h
        return x, y, 10.0, 0.0, 0.0

    scripted("227000001", sar_row)

    # 227000002 (cargo): stopped in the anchorage until m 120, then 8 kn east.
    def anchored_row(m):
        if m <= 120:
            return 6600.0, 3500.0, 0.0, 90.0, 90.0
        return 6600.0 + 250 * (m - 120), 3500.0, 8.0, 90.0, 90.0

    scripted("227000002", anchored_row)

    # 227000003 (other): 6 kn east (m 0-59), drifting south at 1.5 kn with
    # the bow swinging between 100 and 120 degrees (m 60-119), 6 kn east again.
    def drifter_pos(m):
        if m <= 59:
            return 40000.0 + 185 * m, 5000.0
        if m <= 119:
            return 40000.0 + 185 * 59, 5000.0 - 46 * (m - 59)
        return 40000.0 + 185 * 59 + 185 * (m - 119), 5000.0 - 46 * 60

    def drifter_row(m):
        x, y = drifter_pos(m)
        if 60 <= m <= 119:
            return x, y, 1.5, 180.0, 100.0 if m % 2 == 0 else 120.0
        return x, y, 6.0, 90.0, 90.0

    scripted("227000003", drifter_row)

    # 227000004 (fishing): 10 kn east, enters the fishing area at m 17;
    # trawls at 5 kn with heading 20/160 in five-minute blocks (m 20-159);
    # 10 kn east from m 160, leaving the area at m 167.
    trawl_pos = [(15000.0, 15000.0)]
    for m in range(1, M + 1):
        x, y = trawl_pos[-1]
        if m <= 19 or m >= 160:
            x += 300
        else:
            x += 50
            y += 145 if ((m - 20) // 5) % 2 == 0 else -145
        trawl_pos.append((x, y))

    def trawl_row(m):
        x, y = trawl_pos[m]
        if 20 <= m <= 159:
            h = 20.0 if ((m - 20) // 5) % 2 == 0 else 160.0
            return x, y, 5.0, h, h
        return x, y, 10.0, 90.0, 90.0

    scripted("227000004", trawl_row)

    # 227000006 (cargo): 12 kn west (m 0-29), 6 kn under tow (m 30-119), 12 kn west.
    def towed_x(m):
        if m <= 29:
            return 60000.0 - 370 * m
        if m <= 119:
            return 49270.0 - 185 * (m - 29)
        return 32620.0 - 370 * (m - 119)

    def towed_row(m):
        return towed_x(m), 25000.0, 6.0 if 30 <= m <= 119 else 12.0, 270.0, 270.0

    scripted("227000006", towed_row)

    # 227000005 (tug): comes south at 6 kn, waits stopped 50 m north of the
    # tow's m-29 position (m 10-29), escorts it at 6 kn (m 30-119), then
    # leaves east at 10 kn.
    def tug_row(m):
        if m <= 9:
            return 49270.0, 25050.0 + 185 * (10 - m), 6.0, 180.0, 180.0
        if m <= 29:
            return 49270.0, 25050.0, 0.0, 180.0, 180.0
        if m <= 119:
            return towed_x(m), 25050.0, 6.0, 270.0, 270.0
        return 32620.0 + 308 * (m - 119), 25050.0, 10.0, 90.0, 90.0

    scripted("227000005", tug_row)

    # 227000008 (tanker): 12 kn east, 3 kn while the pilot boards (m 40-69), 12 kn.
    def tanker_x(m):
        if m <= 39:
            return 40000.0 + 370 * m
        if m <= 69:
            return 54430.0 + 93 * (m - 39)
        return 57220.0 + 370 * (m - 69)

    def tanker_row(m):
        return tanker_x(m), 40000.0, 3.0 if 40 <= m <= 69 else 12.0, 90.0, 90.0

    scripted("227000008", tanker_row)

    # 227000007 (pilot): 10 kn north, alongside the tanker 60 m south of it
    # at 3 kn (m 40-69), then 15 kn north.
    def pilot_row(m):
        if m <= 39:
            return 54523.0, 39940.0 - 308 * (40 - m), 10.0, 0.0, 0.0
        if m <= 69:
            return tanker_x(m), 39940.0, 3.0, 90.0, 90.0
        return 57220.0, 39940.0 + 463 * (m - 69), 15.0, 0.0, 0.0

    scripted("227000007", pilot_row)

    # 227000009 / 227000010 (cargo): approach head-on at 10 kn, stop 50 m
    # apart in open sea (m 60-119), leave in opposite directions.
    def rv_row(base, sign):
        def row(m):
            if m <= 59:
                return base - sign * 308 * (59 - m), 55000.0, 10.0, 90.0 if sign > 0 else 270.0, None
            if m <= 119:
                return base, 55000.0, 0.0, 90.0 if sign > 0 else 270.0, None
            return base + sign * 308 * (m - 119), 55000.0, 10.0, 90.0 if sign > 0 else 270.0, None

        def with_heading(m):
            x, y, s, c, _ = row(m)
            return x, y, s, c, c

        return with_heading

    scripted("227000009", rv_row(24700.0, 1))
    scripted("227000010", rv_row(24750.0, -1))

    registry = VesselRegistry({v: VesselInfo.of_type(t) for v, t in GOLDEN_VESSELS.items()})
    return Scenario(_collect(tracks), golden_areas(), registry, T0, T0 + 60 * M)


# -- randomized corpora -------------------------------------------------------

PORT_XS = (0.0, 60000.0, 120000.0, 180000.0)
FISHING_BOXES = ((20000.0, 20000.0, 60000.0, 40000.0), (100000.0, 20000.0, 140000.0, 40000.0))


def world_areas(near_coast_buffer: float = ThresholdTable.near_coast_buffer) -> list[Area]:
    """Coastline along ``y = 0``; the nearCoast strip reaches ``near_coast_buffer``
    metres out to sea."""
    areas = [rect_area("coast", "nearCoast", -100000, -3000, 300000, near_coast_buffer)]
    for i, px in enumerate(PORT_XS):
        areas.append(rect_area(f"port-{i}", "nearPorts", px - 2000, -3000, px + 2000, 2500))
        areas.append(rect_area(f"anch-{i}", "anchorage", px + 3000, 3000, px + 7000, 6000))
    for i, box in enumerate(FISHING_BOXES):
        areas.append(rect_area(f"fish-{i}", "fishing", *box))
    areas.append(rect_area("natura-0", "natura", 70000, 20000, 90000, 30000))
    return areas


class _Builder:
    def __init__(self, rng: np.random.Generator, start: int, duration: int, cadence: int, noise: bool):
        self.rng = rng
        self.start = start
        self.duration = duration
        self.cadence = cadence
        self.noise = noise
        self.tracks: list[Track] = []
        self.types: dict[str, str] = {}
        self._next_id = 0
        self._lane = 0

    def vessel(self, vessel_type: str, x: float, y: float, t: int) -> Track:
        self._next_id += 1
        mmsi = str(228000000 + self._next_id)
        self.types[mmsi] = vessel_type
        tr = Track(mmsi, x, y, t, self.cadence, self.rng,
                   0.03 if self.noise else 0.0, 3.0 if self.noise else 0.0)
        self.tracks.append(tr)
        return tr

    def steps(self, seconds: float) -> int:
        return max(1, int(seconds // self.cadence))

    def lane(self) -> tuple[float, float]:
        """Start of a fresh open-sea lane; lanes are 25 km x 400 km apart so
        that vessels of different groups never meet."""
        col, row = divmod(self._lane, 40)
        self._lane += 1
        return 400000.0 * col + self.uniform(-50000, 50000), 60000.0 + 25000.0 * row

    def t_in(self, lo_frac: float, hi_frac: float) -> int:
        lo = self.start + int(self.duration * lo_frac)
        hi = self.start + int(self.duration * hi_frac)
        t = int(self.rng.integers(lo, max(lo + 1, hi)))
        return self.start + (t - self.start) // self.cadence * self.cadence

    def until_end(self, tr: Track) -> int:
        return max(0, (self.start + self.duration - tr.t) // self.cadence + 1)

    def uniform(self, lo: float, hi: float) -> float:
        return float(self.rng.uniform(lo, hi))


def _speeder(b: _Builder) -> None:
    port = float(b.rng.choice(PORT_XS))
    x = port + b.uniform(5000, 40000)
    tr = b.vessel("other", x, 150.0, b.t_in(0.0, 0.3))
    tr.stay(b.steps(b.uniform(600, 1800)))
    course = float(b.rng.choice([90.0, 270.0]))
    tr.sail(b.steps(b.uniform(900, 2400)), b.uniform(7, 14), course)
    if b.rng.random() < 0.5:
        tr.sail(b.steps(b.uniform(300, 900)), b.uniform(2, 4), course)
        tr.stay(b.steps(b.uniform(600, 1200)))
    else:
        tr.sail(b.until_end(tr), b.uniform(8, 12), 0.0)


def _coastal_transit(b: _Builder) -> None:
    """Comes in from sea at speed, turns to run along the coast inside the
    coastal strip and eventually heads back out."""
    tr = b.vessel(str(b.rng.choice(["other", "cargo"])), b.uniform(-95000, -40000), 3500.0, b.t_in(0.0, 0.5))
    speed = b.uniform(8, 13)
    # reach the strip, then keep the southbound course for a few more reports
    tr.sail(math.ceil(3200.0 / (speed * KNOT * b.cadence)) + int(b.rng.integers(1, 4)), speed, 180.0)
    tr.sail(b.steps(b.uniform(1800, 5400)), speed, 90.0)
    tr.sail(b.until_end(tr), speed, 0.0)


def _anchored(b: _Builder) -> None:
    port = float(b.rng.choice(PORT_XS))
    tr = b.vessel(str(b.rng.choice(["cargo", "tanker"])), port + 5000, 10000.0, b.t_in(0.0, 0.3))
    # 10 kn south until the middle of the anchorage box
    tr.sail(math.ceil(5500.0 / (10.0 * KNOT * b.cadence)), 10.0, 180.0)
    tr.stay(b.steps(b.uniform(2400, 3 * 3600)))
    tr.sail(b.until_end(tr), 10.0, 0.0)


def _moored(b: _Builder) -> None:
    port = float(b.rng.choice(PORT_XS))
    tr = b.vessel(str(b.rng.choice(["cargo", "tanker", "fishing"])), port + b.uniform(-1500, 1500),
                  2400.0, b.t_in(0.0, 0.4))
    # berth from a short approach so the stop starts inside the port
    tr.sail(4, 6.0, 180.0)
    tr.stay(b.steps(b.uniform(1200, 4 * 3600)))
    tr.sail(b.until_end(tr), 10.0, 0.0)


def _drifter(b: _Builder) -> None:
    x, y = b.lane()
    tr = b.vessel(str(b.rng.choice(["cargo", "other", "fishing"])), x, y, b.t_in(0.0, 0.3))
    tr.stay(b.steps(b.uniform(300, 900)))
    tr.sail(b.steps(b.uniform(900, 2400)), b.uniform(8, 12), 90.0)
    cog = b.uniform(0, 360)
    offset = b.uniform(50, 100) * float(b.rng.choice([-1, 1]))
    tr.sail(b.steps(b.uniform(1200, 5400)), b.uniform(0.9, 2.4), cog,
            lambda i: cog + offset + (12.0 if i % 2 else -12.0))
    tr.sail(b.until_end(tr), b.uniform(8, 12), 90.0)


def _trawler(b: _Builder) -> None:
    x0, y0, x1, y1 = FISHING_BOXES[int(b.rng.integers(len(FISHING_BOXES)))]
    tr = b.vessel("fishing", x0 - 3000, b.uniform(y0 + 5000, y1 - 5000), b.t_in(0.0, 0.25))
    tr.sail(b.steps(b.uniform(1200, 1800)), 10.0, 90.0)
    speed = float(b.rng.choice([b.uniform(3.0, 4.4), b.uniform(5.6, 8.0)]))
    pause = b.rng.random() < 0.3  # a straight stretch longer than the movement deadline
    n = b.steps(b.uniform(2.5 * 3600 if pause else 3600, 3 * 3600))
    base = b.uniform(0, 360)
    block = int(b.rng.integers(3, 9))
    for i in range(n):
        if pause and n // 2 <= i < n // 2 + b.steps(900):
            tr.sail(1, speed, base)
            continue
        h = (base + (50.0 if (i // block) % 2 else -50.0)) % 360
        tr.sail(1, speed, h)
        # stay inside the box: bounce back towards its centre
        if not (x0 + 500 < tr.x < x1 - 500 and y0 + 500 < tr.y < y1 - 500):
            base = math.degrees(math.atan2((x0 + x1) / 2 - tr.x, (y0 + y1) / 2 - tr.y))
    # speeds back up while still hauling the gear in zigzags
    tr.ramp(12.0, lambda i: (base + (50.0 if ((n + i) // block) % 2 else -50.0)) % 360)
    tr.sail(b.until_end(tr), 12.0, 0.0)


def _pair_meet(b: _Builder, lead_type: str, other_type: str, meet_speed: float, lead_speed: float,
               other_speed: float, min_s: float, max_s: float, gap: float, settle: bool = False) -> None:
    """Two vessels meet in open sea and travel ``gap`` metres apart; with
    ``settle`` the pair slows down gradually to a halt before parting."""
    x, y = b.lane()
    lead = b.vessel(lead_type, x, y, b.t_in(0.0, 0.3))
    lead.stay(b.steps(b.uniform(300, 1200)))
    lead.sail(b.steps(b.uniform(600, 1800)), lead_speed, 90.0)
    t_meet = lead.t
    n_meet = b.steps(b.uniform(min_s, max_s))
    if meet_speed > 0:
        lead.sail(n_meet, meet_speed, 90.0)
    else:
        lead.stay(n_meet)
    if settle:
        lead.ramp(0.0, 90.0)
        lead.stay(b.steps(b.uniform(300, 900)))
    t_part = lead.t
    lead.sail(b.until_end(lead), lead_speed, 90.0)

    mx, my = lead.position_at(t_meet)
    k = b.steps(b.uniform(900, 1800))
    d = other_speed * KNOT * b.cadence * k
    wait = b.steps(b.uniform(300, 1200))
    other = b.vessel(other_type, mx, my + gap - d, t_meet - (k + wait) * b.cadence)
    other.stay(wait)
    other.sail(k, other_speed, 0.0)
    other.follow(lead, t_meet, t_part, 0.0, gap, speed=None if settle else meet_speed)
    other.sail(b.until_end(other), other_speed, 0.0)


def _tug_escort(b: _Builder) -> None:
    _pair_meet(b, str(b.rng.choice(["cargo", "tanker"])), "tug", b.uniform(5.5, 8.0), b.uniform(11, 13),
               b.uniform(9, 11), 900, 5400, b.uniform(30, 70), settle=b.rng.random() < 0.4)


def _pilot_meet(b: _Builder) -> None:
    meet = float(b.rng.choice([0.0, b.uniform(2.0, 4.0)]))
    _pair_meet(b, str(b.rng.choice(["cargo", "tanker"])), "pilot", meet, b.uniform(11, 13),
               b.uniform(12, 16), 900, 2400, b.uniform(30, 70))


def _rendezvous(b: _Builder) -> None:
    kinds = ["cargo", "tanker", "fishing", "other"]
    meet = float(b.rng.choice([0.0, b.uniform(1.0, 3.0)]))
    _pair_meet(b, str(b.rng.choice(kinds)), str(b.rng.choice(kinds)), meet, b.uniform(9, 12),
               b.uniform(9, 12), 900, 5400, b.uniform(20, 80))


def _mixed_meet(b: _Builder) -> None:
    kinds = ["tug", "pilot", "cargo", "sar", "fishing"]
    meet = float(b.rng.choice([0.0, b.uniform(1.5, 4.0), b.uniform(5.5, 8.0)]))
    _pair_meet(b, str(b.rng.choice(kinds)), str(b.rng.choice(kinds)), meet, b.uniform(9, 12),
               b.uniform(9, 12), 900, 3600, b.uniform(20, 80))


def _sar_sweep(b: _Builder) -> None:
    port = float(b.rng.choice(PORT_XS))
    tr = b.vessel("sar", port, 1500.0, b.t_in(0.0, 0.3))
    tr.stay(b.steps(b.uniform(300, 1200)))
    tr.sail(b.steps(b.uniform(1800, 2400)), b.uniform(12, 15), 0.0)
    speed = b.uniform(6, 14)
    heading = 0.0
    n = b.steps(b.uniform(3600, 3 * 3600))
    i = 0
    while i < n:
        leg = b.steps(b.uniform(240, 2400 if b.rng.random() < 0.15 else 720))
        heading = (heading + float(b.rng.choice([-1, 1])) * b.uniform(40, 120)) % 360
        if tr.y < 15000.0:  # keep the search offshore
            heading = b.uniform(-60, 60) % 360
        if b.rng.random() < 0.3:
            speed = float(np.clip(speed * b.uniform(0.6, 1.5), 4.0, 16.0))
        tr.sail(min(leg, n - i), speed, heading)
        i += leg
    if b.rng.random() < 0.5:
        tr.ramp(0.0, heading, step=0.25)
    tr.stay(b.until_end(tr))


def _cruiser(b: _Builder, lane_y: float) -> None:
    kind = str(b.rng.choice(["cargo", "tanker", "other", "fishing", "cargo"]))
    east = b.rng.random() < 0.5
    tr = b.vessel(kind, b.uniform(-50000, 250000), lane_y, b.start + int(b.rng.integers(0, b.cadence)))
    speed = b.uniform(9.5, 14.5)
    course = 90.0 if east else 270.0
    base = course
    while tr.t <= b.start + b.duration:
        n = b.steps(b.uniform(2400, 5400))
        tr.sail(n, speed, course + b.uniform(-8, 8))
        r = b.rng.random()
        if course != base:
            course = base
        elif r < 0.25:
            course = (base + float(b.rng.choice([-1, 1])) * b.uniform(20, 45)) % 360
        elif r < 0.4:
            speed = float(np.clip(speed * b.uniform(0.7, 1.3), 9.5, 16.0))
        elif r < 0.45:
            tr.silent(int(b.uniform(1900, 3600)) // b.cadence * b.cadence)


GROUPS = (
    (_speeder, 1),
    (_coastal_transit, 1),
    (_anchored, 1),
    (_moored, 1),
    (_drifter, 1),
    (_trawler, 1),
    (_tug_escort, 2),
    (_pilot_meet, 2),
    (_rendezvous, 2),
    (_mixed_meet, 2),
    (_sar_sweep, 1),
)


def generate_corpus(
    seed: int,
    n_vessels: int = 40,
    *,
    duration: int = 8 * 3600,
    cadence: int = 60,
    activity_share: float = 0.5,
    noise: bool = True,
) -> Scenario:
    """Seeded synthetic corpus.

    About ``activity_share`` of the vessels take part in scripted activity
    groups (every group kind appears at least once when the budget allows);
    the rest cruise in offshore lanes.
    """
    if n_vessels < 1 or duration <= 0 or cadence <= 0:
        raise ValueError("need a positive vessel count, duration and cadence")
    rng = np.random.default_rng(seed)
    b = _Builder(rng, T0, duration, cadence, noise)
    budget = int(round(n_vessels * activity_share))
    i = 0
    while True:
        make, size = GROUPS[i % len(GROUPS)] if i < len(GROUPS) else GROUPS[int(rng.integers(len(GROUPS)))]
        if len(b.types) + size > budget:
            break
        make(b)
        i += 1
    n_cruise = n_vessels - len(b.types)
    for k in range(n_cruise):
        _cruiser(b, 1_200_000.0 + 2500.0 * (k % 100))
    end = T0 + duration
    msgs = [m for m in _collect(b.tracks) if T0 <= m.t <= end]
    registry = VesselRegistry({v: VesselInfo.of_type(t) for v, t in b.types.items()})
    return Scenario(msgs, world_areas(), registry, T0, end)


def smooth_cruise_fleet(seed: int, n_vessels: int = 50, duration: int = 6 * 3600, cadence: int = 60) -> Scenario:
    """Only offshore cruisers: straight legs, occasional turns and speed changes."""
    return generate_corpus(seed, n_vessels, duration=duration, cadence=cadence, activity_share=0.0)
