"""Orchestration: AIS messages -> input events -> windowed recognition -> files.

Two input modes are supported.  ``enriched`` attaches a velocity event to
every message; ``critical`` only to the messages retained by the synopsis
generator.  Critical events, area events and proximity are identical in
both modes.
"""

from __future__ import annotations

import csv
import json
import logging
import statistics
import time
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

from . import intervals as ia
from .config import ConfigError, load_kv, parse_duration
from .engine import (
    ActivityCollector,
    Engine,
    FluentAssertion,
    FluentId,
    InputEvent,
    Window,
    WindowStats,
    run_windows,
    window_schedule,
)
from .geo import Area, ProximityConfig, derive_area_events, derive_proximity, load_areas
from .intervals import OPEN, Interval, IntervalList
from .patterns import ACTIVITIES, RELATIONAL, MaritimeFacts, ThresholdTable, VesselRegistry, build_description
from .synopsis import (
    AisMessage,
    ParseStats,
    SynopsisConfig,
    SynopsisResult,
    label_stream,
    read_ais_csv,
    velocity_events,
)

log = logging.getLogger(__name__)

MODES = ("enriched", "critical")
ACTIVITY_HEADER = ["activity", "vessels", "start", "end", "open"]


class DataError(ValueError):
    """Input data that cannot be processed (missing or malformed files)."""


@dataclass
class RunConfig:
    window: int = 4 * 3600
    slide: int = 2 * 3600
    mode: str = "enriched"
    ais: Path | None = None
    areas: Path | None = None
    vessels: Path | None = None
    thresholds: Path | None = None
    output: Path = Path("out")
    threshold_overrides: dict[str, str] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if not self.window >= self.slide > 0:
            raise ConfigError(f"need window >= slide > 0, got {self.window}/{self.slide}")
        if self.mode not in MODES:
            raise ConfigError(f"mode must be one of {MODES}, got {self.mode!r}")

    @classmethod
    def load(cls, path: str | Path) -> "RunConfig":
        """Read a flat config file; paths are relative to the file, and any
        threshold names override the thresholds file."""
        path = Path(path)
        kv = load_kv(path)
        base = path.parent
        known = {"window", "slide", "mode", "ais", "areas", "vessels", "thresholds", "output"}
        threshold_keys = set(ThresholdTable.__dataclass_fields__)
        unknown = set(kv) - known - threshold_keys
        if unknown:
            raise ConfigError(f"{path}: unknown keys {sorted(unknown)}")

        def p(key):
            return (base / kv[key]) if key in kv else None

        return cls(
            window=parse_duration(kv.get("window", "4h")),
            slide=parse_duration(kv.get("slide", "2h")),
            mode=kv.get("mode", "enriched"),
            ais=p("ais"),
            areas=p("areas"),
            vessels=p("vessels"),
            thresholds=p("thresholds"),
            output=p("output") or base / "out",
            threshold_overrides={k: v for k, v in kv.items() if k in threshold_keys},
        )

    def threshold_table(self) -> ThresholdTable:
        values = load_kv(self.thresholds) if self.thresholds else {}
        values.update(self.threshold_overrides)
        return ThresholdTable.from_mapping(values)


@dataclass
class PreparedInput:
    events: list[InputEvent]
    proximity: list[FluentAssertion]
    synopsis: SynopsisResult

    @property
    def inputs(self) -> dict[FluentId, IntervalList]:
        return {a.fluent: list(a.intervals) for a in self.proximity}


def prepare(
    messages: Sequence[AisMessage],
    areas: Sequence[Area],
    thresholds: ThresholdTable,
    mode: str = "enriched",
    synopsis_cfg: SynopsisConfig | None = None,
) -> PreparedInput:
    if mode not in MODES:
        raise ValueError(f"unknown mode {mode!r}")
    ordered = sorted(messages, key=lambda m: (m.t, m.vessel))
    syn = label_stream(ordered, synopsis_cfg or SynopsisConfig(slow_max_kn=5.0))
    kept = syn.accepted
    positions = [(m.vessel, m.pos, m.t) for m in kept]
    events = list(syn.events)
    events.extend(velocity_events(kept if mode == "enriched" else syn.compressed))
    events.extend(derive_area_events(positions, areas))
    events.sort(key=lambda e: e.t)
    prox = derive_proximity(positions, ProximityConfig(thresholds.proximity))
    return PreparedInput(events, prox, syn)


@dataclass
class Recognition:
    activities: dict[FluentId, IntervalList]
    stats: list[WindowStats]
    first: int
    last: int
    close_time: int  # query time of the final window
    n_events: int
    synopsis: SynopsisResult | None = None


def recognise(
    prepared: PreparedInput,
    facts: MaritimeFacts,
    *,
    window: int,
    slide: int,
    first: int | None = None,
    last: int | None = None,
    batch: bool = False,
) -> Recognition:
    """Windowed recognition; with ``batch`` a single window spanning the whole
    stream and closing at the same time as the windowed run's last window."""
    desc = build_description(facts.thresholds)
    times = [e.t for e in prepared.events]
    first = min(times, default=0) if first is None else first
    last = max(times, default=first) if last is None else last
    if batch:
        close = window_schedule(first, last, slide)[-1]
        engine = Engine(desc, Window(close - first + 1, slide, close), facts)
        for fid, lst in prepared.inputs.items():
            engine.assert_intervals(fid, lst)
        engine.assert_events(prepared.events)
        collector = ActivityCollector()
        collector.add(engine.evaluate_window(), close)
        result = collector.result()
    else:
        result, engine = run_windows(
            desc, prepared.events, prepared.inputs, size=window, slide=slide, facts=facts,
            first=first, last=last,
        )
        close = engine.stats[-1].query_time if engine.stats else last
    return Recognition(result, engine.stats, first, last, close, len(prepared.events), prepared.synopsis)


def run_scenario(scenario, mode: str = "enriched", *, window: int = 4 * 3600, slide: int = 2 * 3600,
                 thresholds: ThresholdTable | None = None, batch: bool = False) -> Recognition:
    """Recognise activities over an in-memory :class:`~maritime_cer.corpus.Scenario`."""
    th = thresholds or ThresholdTable()
    prepared = prepare(scenario.messages, scenario.areas, th, mode)
    facts = MaritimeFacts.build(scenario.areas, scenario.registry, th)
    return recognise(prepared, facts, window=window, slide=slide, first=scenario.start, last=scenario.end, batch=batch)


# -- activity files ------------------------------------------------------------


@dataclass(frozen=True)
class ActivityRecord:
    activity: str
    vessels: tuple[str, ...]
    start: int
    end: int
    open: bool


def activity_records(rec: Recognition) -> list[ActivityRecord]:
    out = []
    for fid, items in rec.activities.items():
        if fid.name not in ACTIVITIES:
            continue
        for s, e in items:
            is_open = e == OPEN
            out.append(ActivityRecord(fid.name, tuple(fid.args), int(s), rec.close_time if is_open else int(e), is_open))
    out.sort(key=lambda r: (r.activity, r.vessels, r.start))
    return out


def write_activity_files(records: Iterable[ActivityRecord], out_dir: Path) -> None:
    by_activity: dict[str, list[ActivityRecord]] = {a: [] for a in ACTIVITIES}
    for r in records:
        by_activity[r.activity].append(r)
    for activity, rows in by_activity.items():
        with open(out_dir / f"{activity}.csv", "w", newline="") as f:
            w = csv.writer(f, lineterminator="\n")
            w.writerow(ACTIVITY_HEADER)
            for r in rows:
                w.writerow([r.activity, ";".join(r.vessels), r.start, r.end, int(r.open)])


def read_activity_files(run_dir: str | Path) -> dict[str, dict[tuple, IntervalList]]:
    run_dir = Path(run_dir)
    out: dict[str, dict[tuple, IntervalList]] = {}
    for activity in ACTIVITIES:
        path = run_dir / f"{activity}.csv"
        if not path.exists():
            raise DataError(f"missing activity file {path}")
        pairs: dict[tuple, list] = {}
        with open(path, newline="") as f:
            for row in csv.DictReader(f):
                key = tuple(row["vessels"].split(";"))
                pairs.setdefault(key, []).append((int(row["start"]), int(row["end"])))
        out[activity] = {k: ia.normalize(v) for k, v in pairs.items()}
    return out


# -- run_pipeline ----------------------------------------------------------------


@dataclass
class RunResult:
    out_dir: Path
    records: list[ActivityRecord]
    meta: dict


def _require(path: Path | None, what: str) -> Path:
    if path is None:
        raise ConfigError(f"no {what} file configured")
    if not Path(path).exists():
        raise DataError(f"{what} file not found: {path}")
    return Path(path)


def run_pipeline(cfg: RunConfig) -> RunResult:
    thresholds = cfg.threshold_table()
    stats = ParseStats()
    ais_path = _require(cfg.ais, "AIS")
    try:
        messages = read_ais_csv(ais_path, stats)
    except ValueError as exc:
        raise DataError(str(exc)) from None
    if stats.skipped:
        log.warning("skipped %d unparsable AIS rows", stats.skipped)
    try:
        areas = load_areas(_require(cfg.areas, "areas"))
    except ValueError as exc:
        raise DataError(str(exc)) from None
    try:
        registry = VesselRegistry.load(_require(cfg.vessels, "vessel registry"))
    except ConfigError as exc:
        raise DataError(str(exc)) from None

    cfg.output.mkdir(parents=True, exist_ok=True)
    facts = MaritimeFacts.build(areas, registry, thresholds)
    t0 = time.perf_counter()
    if messages:
        prepared = prepare(messages, areas, thresholds, cfg.mode)
        span = (min(m.t for m in messages), max(m.t for m in messages))
        rec = recognise(prepared, facts, window=cfg.window, slide=cfg.slide, first=span[0], last=span[1])
        records = activity_records(rec)
        window_stats = rec.stats
        syn = prepared.synopsis
        synopsis_meta = {"messages": syn.total, "dropped": syn.dropped, "critical": len(syn.compressed),
                         "compression_ratio": syn.ratio}
        n_events = rec.n_events
    else:
        span, records, window_stats, n_events = None, [], [], 0
        synopsis_meta = {"messages": 0, "dropped": 0, "critical": 0, "compression_ratio": None}

    write_activity_files(records, cfg.output)
    with open(cfg.output / "timing.csv", "w", newline="") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(["query_time", "window_start", "input_events", "seconds"])
        for s in window_stats:
            w.writerow([s.query_time, s.window_start, s.input_events, f"{s.seconds:.6f}"])
    meta = {
        "mode": cfg.mode,
        "window": cfg.window,
        "slide": cfg.slide,
        "span": list(span) if span else None,
        "input_events": n_events,
        "skipped_rows": stats.skipped,
        "synopsis": synopsis_meta,
        "windows": len(window_stats),
        "thresholds": asdict(thresholds),
    }
    with open(cfg.output / "run_meta.json", "w") as f:
        json.dump(meta, f, indent=2, sort_keys=True)
        f.write("\n")
    log.info("run finished in %.2f s: %d activity intervals", time.perf_counter() - t0, len(records))
    return RunResult(cfg.output, records, meta)


# -- evaluation ----------------------------------------------------------------


@dataclass
class ActivityScore:
    tp: int = 0
    fp: int = 0
    fn: int = 0

    @property
    def precision(self) -> float | None:
        return self.tp / (self.tp + self.fp) if self.tp + self.fp else None

    @property
    def recall(self) -> float | None:
        return self.tp / (self.tp + self.fn) if self.tp + self.fn else None

    @property
    def f1(self) -> float | None:
        # 2TP / (2TP + FP + FN); undefined only when neither run recognises anything
        n = 2 * self.tp + self.fp + self.fn
        return 2 * self.tp / n if n else None


SCORING_NOTE = (
    "per-second scoring; intervals still open at the end of a run are "
    "counted up to the close time of the final window"
)


@dataclass
class EvalReport:
    scores: dict[str, ActivityScore]
    timing: dict[str, dict[str, float]] = field(default_factory=dict)
    note: str = SCORING_NOTE

    def rows(self) -> list[list[str]]:
        def fmt(x):
            return "n/a" if x is None else f"{x:.3f}"

        rows = []
        for a in ACTIVITIES:
            s = self.scores.get(a, ActivityScore())
            rows.append([a, str(s.tp), str(s.fp), str(s.fn), fmt(s.precision), fmt(s.recall), fmt(s.f1)])
        return rows

    def format(self) -> str:
        header = ["activity", "TP", "FP", "FN", "precision", "recall", "F1"]
        table = [header, *self.rows()]
        widths = [max(len(r[i]) for r in table) for i in range(len(header))]
        lines = ["  ".join(c.ljust(w) for c, w in zip(r, widths)) for r in table]
        for name, t in self.timing.items():
            lines.append(
                f"{name}: {t['windows']:.0f} windows, mean {t['mean_events']:.0f} events/window, "
                f"mean {t['mean_seconds']:.4f} s, max {t['max_seconds']:.4f} s"
            )
        lines.append(f"note: {self.note}")
        return "\n".join(lines)


def score_activities(
    reference: dict[str, dict[tuple, IntervalList]], candidate: dict[str, dict[tuple, IntervalList]]
) -> dict[str, ActivityScore]:
    """Per-second TP/FP/FN per activity, summed over vessels (pairs)."""
    scores = {}
    for activity in ACTIVITIES:
        ref = reference.get(activity, {})
        cand = candidate.get(activity, {})
        s = ActivityScore()
        for key in set(ref) | set(cand):
            r = ref.get(key, [])
            c = cand.get(key, [])
            both = ia.total_duration(ia.intersect_all([r, c])) if r and c else 0
            s.tp += int(both)
            s.fp += int(ia.total_duration(c) - both)
            s.fn += int(ia.total_duration(r) - both)
        scores[activity] = s
    return scores


def by_activity(rec: Recognition) -> dict[str, dict[tuple, IntervalList]]:
    """Recognition output closed at the final window, keyed like the activity files."""
    out: dict[str, dict[tuple, IntervalList]] = {a: {} for a in ACTIVITIES}
    for fid, items in rec.activities.items():
        if fid.name in ACTIVITIES:
            out[fid.name][tuple(fid.args)] = ia.close_open(items, rec.close_time)
    return out


def _timing(stats: Sequence[WindowStats]) -> dict[str, float]:
    if not stats:
        return {"windows": 0, "mean_events": 0.0, "mean_seconds": 0.0, "max_seconds": 0.0}
    return {
        "windows": len(stats),
        "mean_events": statistics.fmean(s.input_events for s in stats),
        "mean_seconds": statistics.fmean(s.seconds for s in stats),
        "max_seconds": max(s.seconds for s in stats),
    }


def _read_timing(run_dir: Path) -> list[WindowStats]:
    path = run_dir / "timing.csv"
    if not path.exists():
        return []
    with open(path, newline="") as f:
        return [
            WindowStats(int(r["query_time"]), int(r["window_start"]), int(r["input_events"]), float(r["seconds"]))
            for r in csv.DictReader(f)
        ]


def compare_runs(ref_dir: str | Path, cand_dir: str | Path) -> EvalReport:
    ref_dir, cand_dir = Path(ref_dir), Path(cand_dir)
    metas = []
    for d in (ref_dir, cand_dir):
        try:
            metas.append(json.loads((d / "run_meta.json").read_text()))
        except FileNotFoundError:
            raise DataError(f"{d} is not a run directory (no run_meta.json)") from None
    if metas[0].get("span") != metas[1].get("span"):
        raise DataError(f"runs cover different spans: {metas[0].get('span')} vs {metas[1].get('span')}")
    scores = score_activities(read_activity_files(ref_dir), read_activity_files(cand_dir))
    timing = {
        f"reference ({metas[0].get('mode')})": _timing(_read_timing(ref_dir)),
        f"candidate ({metas[1].get('mode')})": _timing(_read_timing(cand_dir)),
    }
    return EvalReport(scores, timing)


def compare_recognitions(reference: Recognition, candidate: Recognition) -> EvalReport:
    if (reference.first, reference.last) != (candidate.first, candidate.last):
        raise DataError("recognitions cover different spans")
    scores = score_activities(by_activity(reference), by_activity(candidate))
    return EvalReport(scores, {"reference": _timing(reference.stats), "candidate": _timing(candidate.stats)})


# -- benchmark -------------------------------------------------------------------


@dataclass
class BenchRow:
    mode: str
    window: int
    windows: int
    mean_events: float
    mean_seconds: float
    max_seconds: float


def benchmark(
    messages: Sequence[AisMessage],
    areas: Sequence[Area],
    registry: VesselRegistry,
    windows: Sequence[int],
    slide: int,
    thresholds: ThresholdTable | None = None,
    modes: Sequence[str] = MODES,
) -> list[BenchRow]:
    th = thresholds or ThresholdTable()
    facts = MaritimeFacts.build(list(areas), registry, th)
    rows = []
    span = (min((m.t for m in messages), default=0), max((m.t for m in messages), default=0))
    for mode in modes:
        prepared = prepare(messages, areas, th, mode)
        for w in windows:
            if w < slide:
                raise ConfigError(f"window {w} s is shorter than the slide {slide} s")
            rec = recognise(prepared, facts, window=w, slide=slide, first=span[0], last=span[1])
            t = _timing(rec.stats)
            rows.append(BenchRow(mode, w, int(t["windows"]), t["mean_events"], t["mean_seconds"], t["max_seconds"]))
    return rows


def activity_intervals(rec: Recognition, activity: str) -> dict[tuple, list[Interval]]:
    if activity not in ACTIVITIES:
        raise KeyError(activity)
    return {k: v for k, v in by_activity(rec)[activity].items() if v}


__all__ = [
    "ActivityRecord",
    "ActivityScore",
    "BenchRow",
    "DataError",
    "EvalReport",
    "MODES",
    "PreparedInput",
    "RELATIONAL",
    "Recognition",
    "RunConfig",
    "RunResult",
    "activity_intervals",
    "activity_records",
    "benchmark",
    "by_activity",
    "compare_recognitions",
    "compare_runs",
    "prepare",
    "read_activity_files",
    "recognise",
    "run_pipeline",
    "run_scenario",
    "score_activities",
    "write_activity_files",
]
