"""Critical-point labelling of AIS position streams.

Each vessel runs a small state machine over its messages and emits the
critical events (gaps, stops, slow motion, speed and heading changes).  The
messages that triggered at least one event form the compressed stream.
"""

from __future__ import annotations

import csv
import logging
from collections import defaultdict
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Iterator, TextIO

from .engine import InputEvent
from .geo import GeoPoint

log = logging.getLogger(__name__)

HEADING_UNAVAILABLE = 511

AIS_COLUMNS = (
    "sourcemmsi",
    "navigationalstatus",
    "rateofturn",
    "speedoverground",
    "courseoverground",
    "trueheading",
    "lon",
    "lat",
    "t",
)


@dataclass(frozen=True, slots=True)
class AisMessage:
    vessel: str
    t: int
    pos: GeoPoint
    speed: float
    cog: float
    heading: float | None = None  # None when the transponder reports 511
    nav_status: int = 15
    rate_of_turn: float = -128.0

    def __post_init__(self) -> None:
        if self.speed < 0:
            raise ValueError(f"negative speed in message of {self.vessel} at {self.t}")

    @property
    def direction(self) -> float:
        """True heading, falling back to course over ground."""
        return self.cog if self.heading is None else self.heading


@dataclass(frozen=True)
class SynopsisConfig:
    gap_s: int = 1800
    stop_max_kn: float = 0.5
    slow_max_kn: float = 5.0
    speed_change_ratio: float = 0.25
    heading_change_deg: float = 15.0

    def __post_init__(self) -> None:
        if not 0 < self.stop_max_kn < self.slow_max_kn:
            raise ValueError("need 0 < stop ceiling < slow ceiling")
        if min(self.gap_s, self.speed_change_ratio, self.heading_change_deg) <= 0:
            raise ValueError("synopsis thresholds must be positive")


def angle_diff(a: float, b: float) -> float:
    """Absolute minimal difference between two bearings, in [0, 180]."""
    d = abs(a - b) % 360.0
    return 360.0 - d if d > 180.0 else d


@dataclass
class SynopsisResult:
    events: list[InputEvent]
    compressed: list[AisMessage]
    dropped: int = 0
    total: int = 0
    accepted: list[AisMessage] = field(default_factory=list, repr=False)

    @property
    def ratio(self) -> float:
        return compression_ratio(self.total, len(self.compressed))


def compression_ratio(raw: int, compressed: int) -> float:
    """Fraction of messages discarded by compression."""
    if raw <= 0:
        raise ValueError("compression ratio undefined for an empty stream")
    if not 0 <= compressed <= raw:
        raise ValueError("compressed count must lie in [0, raw]")
    return 1.0 - compressed / raw


@dataclass
class _Track:
    last: AisMessage | None = None
    last_idx: int = -1
    band: str | None = None
    changing: bool = False
    calm: int = 0


def _band(speed: float, cfg: SynopsisConfig) -> str:
    if speed < cfg.stop_max_kn:
        return "stop"
    if speed < cfg.slow_max_kn:
        return "slow_motion"
    return "moving"


def label_stream(messages: Iterable[AisMessage], cfg: SynopsisConfig = SynopsisConfig()) -> SynopsisResult:
    """Label messages (each vessel in timestamp order) with critical events.

    Messages that are older than, or as old as, the previous message of the
    same vessel are dropped and counted.
    """
    tracks: dict[str, _Track] = defaultdict(_Track)
    kept: list[AisMessage] = []
    critical: list[bool] = []
    events: list[InputEvent] = []
    dropped = 0
    for msg in messages:
        tr = tracks[msg.vessel]
        prev = tr.last
        if prev is not None and msg.t <= prev.t:
            dropped += 1
            continue
        idx = len(kept)
        kept.append(msg)
        critical.append(False)
        v, t = msg.vessel, msg.t
        out: list[str] = []

        if prev is not None and t - prev.t >= cfg.gap_s:
            events.append(InputEvent("gap_start", (v,), prev.t))
            critical[tr.last_idx] = True
            out.append("gap_end")

        band = _band(msg.speed, cfg)
        if band != tr.band:
            if tr.band in ("stop", "slow_motion"):
                out.append(f"{tr.band}_end")
            if band in ("stop", "slow_motion"):
                out.append(f"{band}_start")
            tr.band = band

        if prev is not None:
            ratio = abs(msg.speed - prev.speed) / max(prev.speed, 1.0)
            if not tr.changing:
                if ratio > cfg.speed_change_ratio:
                    tr.changing, tr.calm = True, 0
                    out.append("change_in_speed_start")
            elif ratio > cfg.speed_change_ratio:
                tr.calm = 0
            else:
                tr.calm += 1
                if tr.calm == 2:
                    tr.changing = False
                    out.append("change_in_speed_end")
            if angle_diff(msg.direction, prev.direction) > cfg.heading_change_deg:
                out.append("change_in_heading")

        if out:
            critical[idx] = True
            events.extend(InputEvent(name, (v,), t) for name in out)
        tr.last, tr.last_idx = msg, idx

    if dropped:
        log.info("dropped %d out-of-order or duplicate messages", dropped)
    events.sort(key=lambda e: (e.t, e.args, e.name))
    compressed = [m for m, c in zip(kept, critical) if c]
    return SynopsisResult(events, compressed, dropped, len(kept), kept)


def velocity_events(messages: Iterable[AisMessage]) -> list[InputEvent]:
    """One ``velocity(vessel)`` event per message, carrying speed, CoG, heading."""
    return [InputEvent("velocity", (m.vessel,), m.t, (m.speed, m.cog, m.heading)) for m in messages]


# -- CSV --------------------------------------------------------------------


@dataclass
class ParseStats:
    rows: int = 0
    skipped: int = 0
    errors: list[str] = field(default_factory=list)


def read_ais_csv(path: str | Path, stats: ParseStats | None = None) -> list[AisMessage]:
    """Read Brest-style AIS CSV; unparsable rows are skipped and counted."""
    stats = stats if stats is not None else ParseStats()
    out = []
    with open(path, newline="") as f:
        reader = csv.DictReader(f)
        missing = set(AIS_COLUMNS) - set(reader.fieldnames or ())
        if missing:
            raise ValueError(f"{path}: missing columns {sorted(missing)}")
        for lineno, row in enumerate(reader, start=2):
            stats.rows += 1
            try:
                heading = float(row["trueheading"])
                out.append(
                    AisMessage(
                        vessel=row["sourcemmsi"].strip(),
                        t=int(float(row["t"])),
                        pos=GeoPoint(float(row["lon"]), float(row["lat"])).validate(),
                        speed=float(row["speedoverground"]),
                        cog=float(row["courseoverground"]) % 360.0,
                        heading=None if heading >= 360 else heading,
                        nav_status=int(float(row["navigationalstatus"] or 15)),
                        rate_of_turn=float(row["rateofturn"] or -128),
                    )
                )
            except (ValueError, TypeError, KeyError) as exc:
                stats.skipped += 1
                if len(stats.errors) < 20:
                    stats.errors.append(f"line {lineno}: {exc}")
    return out


def _ais_row(m: AisMessage) -> list:
    heading = HEADING_UNAVAILABLE if m.heading is None else _num(m.heading)
    return [m.vessel, m.nav_status, _num(m.rate_of_turn), _num(m.speed), _num(m.cog), heading,
            f"{m.pos.lon:.7f}", f"{m.pos.lat:.7f}", m.t]


def _num(x: float) -> str:
    return f"{x:.2f}".rstrip("0").rstrip(".") if x != int(x) else str(int(x))


def write_ais_csv(messages: Iterable[AisMessage], fh: TextIO) -> None:
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(AIS_COLUMNS)
    for m in messages:
        w.writerow(_ais_row(m))


def write_critical_csv(events: Iterable[InputEvent], fh: TextIO) -> None:
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(["t", "event", "vessel", "aux"])
    for e in events:
        w.writerow([e.t, e.name, e.args[0], "|".join(map(str, e.args[1:]))])


def iter_by_time(messages: Iterable[AisMessage]) -> Iterator[AisMessage]:
    return iter(sorted(messages, key=lambda m: (m.t, m.vessel)))
