"""Command line: ``run``, ``compare``, ``bench`` and ``gen-corpus``.

Exit codes: 0 success, 2 configuration error, 3 data error.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from dataclasses import replace
from pathlib import Path

from .config import ConfigError, parse_duration
from .corpus import generate_corpus
from .geo import areas_to_geojson, load_areas
from .patterns import ThresholdTable, VesselRegistry
from .pipeline import MODES, DataError, RunConfig, benchmark, compare_runs, run_pipeline
from .synopsis import ParseStats, read_ais_csv, write_ais_csv

log = logging.getLogger("maritime_cer")

EXIT_OK, EXIT_CONFIG, EXIT_DATA = 0, 2, 3


def _durations(text: str) -> list[int]:
    try:
        return [parse_duration(x) for x in text.split(",") if x.strip()]
    except ConfigError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _duration(text: str) -> int:
    try:
        return parse_duration(text)
    except ConfigError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def cmd_run(args) -> int:
    cfg = RunConfig.load(args.config)
    if args.mode:
        cfg = replace(cfg, mode=args.mode)
    if args.output:
        cfg.output = Path(args.output)
    res = run_pipeline(cfg)
    counts: dict[str, int] = {}
    for r in res.records:
        counts[r.activity] = counts.get(r.activity, 0) + 1
    print(f"wrote {len(res.records)} activity intervals to {res.out_dir}")
    for activity, n in sorted(counts.items()):
        print(f"  {activity:<18}{n}")
    return EXIT_OK


def cmd_compare(args) -> int:
    report = compare_runs(args.ref, args.cand)
    print(report.format())
    if args.json:
        doc = {
            a: {"tp": s.tp, "fp": s.fp, "fn": s.fn, "precision": s.precision, "recall": s.recall, "f1": s.f1}
            for a, s in report.scores.items()
        }
        Path(args.json).write_text(json.dumps(doc, indent=2) + "\n")
    return EXIT_OK


def cmd_bench(args) -> int:
    if args.config:
        cfg = RunConfig.load(args.config)
        th = cfg.threshold_table()
        try:
            messages = read_ais_csv(cfg.ais, ParseStats()) if cfg.ais else []
            areas = load_areas(cfg.areas) if cfg.areas else []
            registry = VesselRegistry.load(cfg.vessels) if cfg.vessels else VesselRegistry()
        except (OSError, ValueError) as exc:
            raise DataError(str(exc)) from None
    else:
        th = ThresholdTable()
        sc = generate_corpus(args.seed, args.vessels, duration=args.duration)
        messages, areas, registry = sc.messages, sc.areas, sc.registry
    rows = benchmark(messages, areas, registry, args.windows, args.slide, th)
    print(f"{'mode':<10}{'window':>8}{'windows':>9}{'events/window':>15}{'mean s':>10}{'max s':>10}")
    for r in rows:
        print(f"{r.mode:<10}{r.window // 3600:>7}h{r.windows:>9}{r.mean_events:>15.0f}"
              f"{r.mean_seconds:>10.4f}{r.max_seconds:>10.4f}")
    return EXIT_OK


def cmd_gen_corpus(args) -> int:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    sc = generate_corpus(args.seed, args.vessels, duration=args.duration)
    with open(out / "ais.csv", "w", newline="") as f:
        write_ais_csv(sc.messages, f)
    (out / "areas.geojson").write_text(json.dumps(areas_to_geojson(sc.areas), indent=1) + "\n")
    with open(out / "vessels.csv", "w", newline="") as f:
        sc.registry.write(f)
    (out / "thresholds.conf").write_text(ThresholdTable().to_kv())
    (out / "run.conf").write_text(
        "# generated by gen-corpus\n"
        "ais = ais.csv\nareas = areas.geojson\nvessels = vessels.csv\nthresholds = thresholds.conf\n"
        "window = 4h\nslide = 2h\nmode = enriched\noutput = out-enriched\n"
    )
    print(f"{len(sc.messages)} messages from {len(sc.registry.vessels)} vessels written to {out}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="maritime-cer", description="Composite maritime event recognition")
    parser.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("run", help="recognise activities over an AIS file")
    p.add_argument("--config", required=True, help="key = value run configuration")
    p.add_argument("--mode", choices=MODES, help="override the input mode")
    p.add_argument("--output", help="override the output directory")
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("compare", help="score a candidate run against a reference run")
    p.add_argument("--ref", required=True, help="reference run directory")
    p.add_argument("--cand", required=True, help="candidate run directory")
    p.add_argument("--json", help="also write the scores as JSON")
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("bench", help="time recognition across window sizes, both input modes")
    p.add_argument("--windows", type=_durations, default=_durations("2h,4h,8h,16h"))
    p.add_argument("--slide", type=_duration, default=2 * 3600)
    p.add_argument("--config", help="benchmark this run configuration's inputs")
    p.add_argument("--seed", type=int, default=0, help="synthetic corpus seed (without --config)")
    p.add_argument("--vessels", type=int, default=200)
    p.add_argument("--duration", type=_duration, default=24 * 3600)
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("gen-corpus", help="write a synthetic corpus and a run configuration")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--vessels", type=int, required=True)
    p.add_argument("--duration", type=_duration, default=8 * 3600)
    p.add_argument("--out", default="corpus")
    p.set_defaults(func=cmd_gen_corpus)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (DataError, ValueError) as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
