"""Maritime activity patterns declared against the event-calculus engine.

Building blocks (area containment, communication gaps, speed bands) feed
nine composite activities: highSpeedNC, anchoredOrMoored, drifting,
trawling, tugging, pilotBoarding, rendezVous, loitering and sar.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field, fields
from pathlib import Path
from typing import Mapping

from .config import ConfigError, load_kv
from .engine import (
    ANY,
    EvalContext,
    EventDescription,
    InputEvent,
    InputFluent,
    Rule,
    SimpleFluent,
    StaticFluent,
    holds_for,
    intersect_all,
    longer_than,
    relative_complement_all,
    union_all,
)
from .geo import AREA_TYPES, Area
from .synopsis import angle_diff

ACTIVITIES = (
    "highSpeedNC",
    "anchoredOrMoored",
    "drifting",
    "trawling",
    "tugging",
    "pilotBoarding",
    "rendezVous",
    "loitering",
    "sar",
)
RELATIONAL = frozenset({"tugging", "pilotBoarding", "rendezVous"})

VESSEL_TYPES = ("fishing", "sar", "tug", "pilot", "cargo", "tanker", "other")

# Service speed bands (knots) per vessel type.
DEFAULT_SERVICE_BAND = (9.0, 15.0)
SERVICE_BANDS = {
    "fishing": (5.0, 12.0),
    "sar": (9.0, 25.0),
    "tug": (6.0, 12.0),
    "pilot": (9.0, 20.0),
    "cargo": (9.0, 15.0),
    "tanker": (9.0, 15.0),
    "other": DEFAULT_SERVICE_BAND,
}

INPUT_EVENTS = {
    "entersArea": 2,
    "leavesArea": 2,
    "gap_start": 1,
    "gap_end": 1,
    "stop_start": 1,
    "stop_end": 1,
    "slow_motion_start": 1,
    "slow_motion_end": 1,
    "change_in_speed_start": 1,
    "change_in_speed_end": 1,
    "change_in_heading": 1,
    "velocity": 1,
}


@dataclass(frozen=True)
class ThresholdTable:
    """Numerical thresholds of the patterns: seconds, knots, degrees, metres."""

    v_hs: float = 5.0
    v_aorm: int = 1800
    v_ad: float = 30.0
    trawling_deadline: int = 600
    v_trawl: int = 3600
    v_tug: int = 600
    v_pil: int = 600
    v_rv: int = 600
    v_ltr: int = 1800
    sar_deadline: int = 1800
    v_sar: int = 3600
    proximity: float = 100.0
    near_coast_buffer: float = 300.0
    moving_min: float = 0.5
    tug_min: float = 1.2
    tug_max: float = 15.0
    trawl_min: float = 1.0
    trawl_max: float = 9.0
    sar_min: float = 2.7

    def __post_init__(self) -> None:
        for f in fields(self):
            if not getattr(self, f.name) > 0:
                raise ConfigError(f"threshold {f.name} must be positive")
        if not self.tug_min < self.tug_max or not self.trawl_min < self.trawl_max:
            raise ConfigError("speed band minimum must be below its maximum")

    @classmethod
    def from_mapping(cls, values: Mapping[str, str], *, strict: bool = True) -> "ThresholdTable":
        types = {f.name: f.type for f in fields(cls)}
        kwargs = {}
        for key, raw in values.items():
            if key not in types:
                if strict:
                    raise ConfigError(f"unknown threshold {key!r}")
                continue
            try:
                kwargs[key] = int(raw) if types[key] == "int" else float(raw)
            except ValueError:
                raise ConfigError(f"threshold {key}: not a number: {raw!r}") from None
        return cls(**kwargs)

    @classmethod
    def load(cls, path: str | Path) -> "ThresholdTable":
        return cls.from_mapping(load_kv(path))

    def to_kv(self) -> str:
        return "".join(f"{f.name} = {getattr(self, f.name)}\n" for f in fields(self))


@dataclass(frozen=True)
class VesselInfo:
    vessel_type: str = "other"
    service_min: float = DEFAULT_SERVICE_BAND[0]
    service_max: float = DEFAULT_SERVICE_BAND[1]

    def __post_init__(self) -> None:
        if self.vessel_type not in VESSEL_TYPES:
            raise ValueError(f"unknown vessel type {self.vessel_type!r}")
        if not 0 < self.service_min < self.service_max:
            raise ValueError("service speed band needs 0 < min < max")

    @classmethod
    def of_type(cls, vessel_type: str) -> "VesselInfo":
        lo, hi = SERVICE_BANDS.get(vessel_type, DEFAULT_SERVICE_BAND)
        return cls(vessel_type, lo, hi)


UNKNOWN_VESSEL = VesselInfo()


@dataclass
class VesselRegistry:
    vessels: dict[str, VesselInfo] = field(default_factory=dict)

    def get(self, mmsi: str) -> VesselInfo:
        return self.vessels.get(mmsi, UNKNOWN_VESSEL)

    def type_of(self, mmsi: str) -> str | None:
        info = self.vessels.get(mmsi)
        return None if info is None else info.vessel_type

    def is_type(self, mmsi: str, vessel_type: str) -> bool:
        info = self.vessels.get(mmsi)
        return info is not None and info.vessel_type == vessel_type

    @classmethod
    def load(cls, path: str | Path) -> "VesselRegistry":
        """Read ``mmsi,type,service_min,service_max``; empty bands take the type default."""
        reg = cls()
        with open(path, newline="") as f:
            for lineno, row in enumerate(csv.DictReader(f), start=2):
                try:
                    mmsi = row["mmsi"].strip()
                    base = VesselInfo.of_type(row["type"].strip())
                    lo = row.get("service_min") or ""
                    hi = row.get("service_max") or ""
                    reg.vessels[mmsi] = VesselInfo(
                        base.vessel_type,
                        float(lo) if lo.strip() else base.service_min,
                        float(hi) if hi.strip() else base.service_max,
                    )
                except (KeyError, ValueError, AttributeError) as exc:
                    raise ConfigError(f"{path}:{lineno}: bad vessel row: {exc}") from None
        return reg

    def write(self, fh) -> None:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["mmsi", "type", "service_min", "service_max"])
        for mmsi in sorted(self.vessels):
            info = self.vessels[mmsi]
            w.writerow([mmsi, info.vessel_type, info.service_min, info.service_max])


@dataclass
class MaritimeFacts:
    """Atemporal knowledge the rules consult."""

    area_type: dict[str, str]
    vessels: VesselRegistry
    thresholds: ThresholdTable = field(default_factory=ThresholdTable)

    @classmethod
    def build(cls, areas: list[Area], vessels: VesselRegistry, thresholds: ThresholdTable | None = None):
        return cls({a.area_id: a.area_type for a in areas}, vessels, thresholds or ThresholdTable())

    def one_is(self, pair: tuple, vessel_type: str) -> bool:
        return any(self.vessels.is_type(v, vessel_type) for v in pair)


# -- rule effects -------------------------------------------------------------
# Each effect maps a triggering event to the (args, value) pairs it initiates
# or terminates.  ``data`` of a velocity event is (speed, cog, heading).


def _area_enter(ev: InputEvent, ctx: EvalContext):
    kind = ctx.facts.area_type.get(ev.args[1])
    return [((ev.args[0], kind), True)] if kind else ()


def _area_gap(ev: InputEvent, ctx: EvalContext):
    v = ev.args[0]
    return [((v, kind), True) for kind in AREA_TYPES]


def _near_ports_value(ev: InputEvent, ctx: EvalContext):
    near = ctx.holds_at("withinArea", (ev.args[0], "nearPorts"), True, ev.t)
    return [(ev.args, "nearPorts" if near else "farFromPorts")]


def _any_value(ev: InputEvent, ctx: EvalContext):
    return [(ev.args, ANY)]


def _true(ev: InputEvent, ctx: EvalContext):
    return [(ev.args, True)]


def _moving_init(ev: InputEvent, ctx: EvalContext):
    speed = ev.data[0]
    th = ctx.facts.thresholds
    if speed < th.moving_min:
        return ()
    info = ctx.facts.vessels.get(ev.args[0])
    if speed < info.service_min:
        value = "below"
    elif speed <= info.service_max:
        value = "normal"
    else:
        value = "above"
    return [(ev.args, value)]


def _moving_term(ev: InputEvent, ctx: EvalContext):
    return [(ev.args, ANY)] if ev.data[0] < ctx.facts.thresholds.moving_min else ()


def _band(lo_attr: str, hi_attr: str, inside: bool):
    """Effect for a closed speed band fluent; ``inside`` selects initiation."""

    def effect(ev: InputEvent, ctx: EvalContext):
        speed = ev.data[0]
        th = ctx.facts.thresholds
        ok = getattr(th, lo_attr) <= speed <= getattr(th, hi_attr)
        return [(ev.args, True)] if ok == inside else ()

    return effect


def _sar_band(inside: bool):
    def effect(ev: InputEvent, ctx: EvalContext):
        ok = ev.data[0] > ctx.facts.thresholds.sar_min
        return [(ev.args, True)] if ok == inside else ()

    return effect


def _is(vessel_type: str):
    """Rule precondition: the (first) vessel is of ``vessel_type``."""

    def applies(args: tuple, facts) -> bool:
        return facts.vessels.is_type(args[0], vessel_type)

    return applies


def _high_speed_init(ev: InputEvent, ctx: EvalContext):
    if ev.data[0] <= ctx.facts.thresholds.v_hs:
        return ()
    if not ctx.holds_at("withinArea", (ev.args[0], "nearCoast"), True, ev.t):
        return ()
    return [(ev.args, True)]


def _high_speed_term(ev: InputEvent, ctx: EvalContext):
    return [(ev.args, True)] if ev.data[0] <= ctx.facts.thresholds.v_hs else ()


def _end_of_area(kind: str):
    def effect(ev: InputEvent, ctx: EvalContext):
        return [((ev.args[0],), True)] if ev.args[1] == kind else ()

    return effect


def _drift_init(ev: InputEvent, ctx: EvalContext):
    _, cog, heading = ev.data
    if heading is None or angle_diff(cog, heading) <= ctx.facts.thresholds.v_ad:
        return ()
    if not ctx.holds_at("underWay", ev.args, True, ev.t):
        return ()
    return [(ev.args, True)]


def _drift_term(ev: InputEvent, ctx: EvalContext):
    _, cog, heading = ev.data
    if heading is None or angle_diff(cog, heading) > ctx.facts.thresholds.v_ad:
        return ()
    return [(ev.args, True)]


def _trawl_move_init(ev: InputEvent, ctx: EvalContext):
    if not ctx.holds_at("withinArea", (ev.args[0], "fishing"), True, ev.t):
        return ()
    return [(ev.args, True)]


# -- composite bodies ---------------------------------------------------------


def _underway_body(args, facts):
    (v,) = args
    return union_all(
        holds_for("movingSpeed", v, value="below"),
        holds_for("movingSpeed", v, value="normal"),
        holds_for("movingSpeed", v, value="above"),
    )


def _anchored_body(args, facts):
    (v,) = args
    return longer_than(
        union_all(
            intersect_all(
                holds_for("stopped", v, value="farFromPorts"),
                holds_for("withinArea", v, "anchorage"),
            ),
            holds_for("stopped", v, value="nearPorts"),
        ),
        facts.thresholds.v_aorm,
    )


def _trawling_body(args, facts):
    (v,) = args
    return longer_than(
        intersect_all(holds_for("trawlingMovement", v), holds_for("trawlingSpeed", v)),
        facts.thresholds.v_trawl,
    )


def _slow_or_stopped(v):
    return union_all(holds_for("lowSpeed", v), holds_for("stopped", v, value="farFromPorts"))


def _tugging_body(args, facts):
    v1, v2 = args
    return longer_than(
        intersect_all(
            holds_for("proximity", v1, v2),
            holds_for("tuggingSpeed", v1),
            holds_for("tuggingSpeed", v2),
        ),
        facts.thresholds.v_tug,
    )


def _pilot_body(args, facts):
    v1, v2 = args
    return longer_than(
        relative_complement_all(
            intersect_all(_slow_or_stopped(v1), _slow_or_stopped(v2), holds_for("proximity", v1, v2)),
            holds_for("withinArea", v1, "nearCoast"),
            holds_for("withinArea", v2, "nearCoast"),
        ),
        facts.thresholds.v_pil,
    )


def _rendezvous_body(args, facts):
    v1, v2 = args
    return longer_than(
        relative_complement_all(
            intersect_all(_slow_or_stopped(v1), _slow_or_stopped(v2), holds_for("proximity", v1, v2)),
            holds_for("withinArea", v1, "nearPorts"),
            holds_for("withinArea", v2, "nearPorts"),
            holds_for("withinArea", v1, "nearCoast"),
            holds_for("withinArea", v2, "nearCoast"),
        ),
        facts.thresholds.v_rv,
    )


def _loitering_body(args, facts):
    (v,) = args
    return longer_than(
        relative_complement_all(
            _slow_or_stopped(v),
            holds_for("anchoredOrMoored", v),
            holds_for("withinArea", v, "nearCoast"),
        ),
        facts.thresholds.v_ltr,
    )


def _sar_body(args, facts):
    (v,) = args
    return longer_than(
        intersect_all(holds_for("sarSpeed", v), holds_for("sarMovement", v)),
        facts.thresholds.v_sar,
    )


def _tug_guard(pair, facts):
    return facts.one_is(pair, "tug") and not facts.one_is(pair, "pilot")


def _pilot_guard(pair, facts):
    return facts.one_is(pair, "pilot") and not facts.one_is(pair, "tug")


def _rendezvous_guard(pair, facts):
    return not facts.one_is(pair, "tug") and not facts.one_is(pair, "pilot")


def build_description(thresholds: ThresholdTable | None = None) -> EventDescription:
    """The full pattern hierarchy.  Deadlines come from ``thresholds``; every
    other threshold is read from the facts at evaluation time."""
    th = thresholds or ThresholdTable()
    fluents = [
        InputFluent("proximity"),
        SimpleFluent(
            "withinArea",
            initiated=[Rule("entersArea", _area_enter)],
            terminated=[Rule("leavesArea", _area_enter), Rule("gap_start", _area_gap)],
        ),
        SimpleFluent(
            "gap",
            initiated=[Rule("gap_start", _near_ports_value)],
            terminated=[Rule("gap_end", _any_value)],
            values=("nearPorts", "farFromPorts"),
            depends_on=("withinArea",),
        ),
        SimpleFluent(
            "stopped",
            initiated=[Rule("stop_start", _near_ports_value)],
            terminated=[Rule("stop_end", _any_value)],
            values=("nearPorts", "farFromPorts"),
            depends_on=("withinArea",),
        ),
        SimpleFluent(
            "lowSpeed",
            initiated=[Rule("slow_motion_start", _true)],
            terminated=[Rule("slow_motion_end", _true)],
        ),
        SimpleFluent(
            "changingSpeed",
            initiated=[Rule("change_in_speed_start", _true)],
            terminated=[Rule("change_in_speed_end", _true)],
        ),
        SimpleFluent(
            "movingSpeed",
            initiated=[Rule("velocity", _moving_init)],
            terminated=[Rule("velocity", _moving_term)],
            values=("below", "normal", "above"),
        ),
        StaticFluent("underWay", _underway_body, ("movingSpeed",), ("movingSpeed",)),
        SimpleFluent(
            "tuggingSpeed",
            initiated=[Rule("velocity", _band("tug_min", "tug_max", True))],
            terminated=[Rule("velocity", _band("tug_min", "tug_max", False))],
        ),
        SimpleFluent(
            "trawlingSpeed",
            initiated=[Rule("velocity", _band("trawl_min", "trawl_max", True), _is("fishing"))],
            terminated=[Rule("velocity", _band("trawl_min", "trawl_max", False), _is("fishing"))],
        ),
        SimpleFluent(
            "sarSpeed",
            initiated=[Rule("velocity", _sar_band(True), _is("sar"))],
            terminated=[Rule("velocity", _sar_band(False), _is("sar"))],
        ),
        SimpleFluent(
            "highSpeedNC",
            initiated=[Rule("velocity", _high_speed_init)],
            terminated=[
                Rule("velocity", _high_speed_term),
                Rule(("end", "withinArea", True), _end_of_area("nearCoast")),
            ],
            depends_on=("withinArea",),
        ),
        StaticFluent("anchoredOrMoored", _anchored_body, ("stopped", "withinArea"), ("stopped",)),
        SimpleFluent(
            "drifting",
            initiated=[Rule("velocity", _drift_init)],
            terminated=[Rule("velocity", _drift_term), Rule(("end", "underWay", True), _true)],
            depends_on=("underWay",),
        ),
        SimpleFluent(
            "trawlingMovement",
            initiated=[Rule("change_in_heading", _trawl_move_init, _is("fishing"))],
            terminated=[Rule(("end", "withinArea", True), _end_of_area("fishing"))],
            deadline=th.trawling_deadline,
            depends_on=("withinArea",),
        ),
        StaticFluent(
            "trawling", _trawling_body, ("trawlingMovement", "trawlingSpeed"), ("trawlingMovement",)
        ),
        StaticFluent(
            "tugging", _tugging_body, ("proximity", "tuggingSpeed"), ("proximity",), guard=_tug_guard
        ),
        StaticFluent(
            "pilotBoarding",
            _pilot_body,
            ("proximity", "lowSpeed", "stopped", "withinArea"),
            ("proximity",),
            guard=_pilot_guard,
        ),
        StaticFluent(
            "rendezVous",
            _rendezvous_body,
            ("proximity", "lowSpeed", "stopped", "withinArea"),
            ("proximity",),
            guard=_rendezvous_guard,
        ),
        StaticFluent(
            "loitering",
            _loitering_body,
            ("lowSpeed", "stopped", "anchoredOrMoored", "withinArea"),
            ("lowSpeed", "stopped"),
        ),
        SimpleFluent(
            "sarMovement",
            initiated=[
                Rule("change_in_heading", _true, _is("sar")),
                Rule(("start", "changingSpeed", True), _true, _is("sar")),
            ],
            deadline=th.sar_deadline,
            depends_on=("changingSpeed",),
        ),
        StaticFluent("sar", _sar_body, ("sarSpeed", "sarMovement"), ("sarMovement",)),
    ]
    return EventDescription(INPUT_EVENTS, fluents, ACTIVITIES)
