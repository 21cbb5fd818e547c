"""
Command-line entry point.

Every subcommand reads an optional flat INI config (``--config``, keys in a
``[hnilm]`` section or at top level); any key can be overridden with
``--key value``. ``HNILM_SEED`` overrides the configured seed.

Exit codes: 0 success, 2 config/spec error, 3 unknown node, 4 too many
state combinations, 5 analysis degeneracy.
"""

from __future__ import annotations

import argparse
import configparser
import json
import os
import sys
from dataclasses import dataclass, fields, replace
from pathlib import Path

from . import analysis, events, metrics, simgen
from .core import MeterHierarchy, PowerSeries, resample
from .disagg import (
    ApplianceModel,
    co_disaggregate,
    hart_disaggregate,
    read_disagg_result,
    split_halves,
    train_states,
)
from .errors import (
    HnilmError,
    InvalidHierarchy,
    InvalidSpec,
    TooManyCombinations,
)
from .io import atomic_write_text, csv_text, fmt_num, load_hierarchy, save_hierarchy

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_UNKNOWN_NODE = 3
EXIT_CAPACITY = 4
EXIT_DEGENERATE = 5


class ConfigError(Exception):
    pass


class UnknownNode(Exception):
    pass


def _floats(text) -> tuple[float, ...]:
    if isinstance(text, (list, tuple)):
        return tuple(float(t) for t in text)
    return tuple(float(t) for t in str(text).replace(",", " ").split())


@dataclass
class RunConfig:
    hierarchy: str | None = None
    out_dir: str = "hnilm_out"
    period: float | None = None
    utc_offset: float = 0.0
    thresholds: tuple[float, ...] = (100.0, 200.0, 500.0, 1000.0, 2000.0, 5000.0)
    co_cap: int = 10**6
    on_threshold: float = metrics.DEFAULT_ON_THRESHOLD
    entropy_k: int = 3
    num_states: int = 2
    train_on_threshold: float = 10.0
    split: str = "halves"
    resample_period: float | None = None
    hart_threshold: float = 100.0
    hart_tolerance: float = 0.1
    hart_max_on: float = 12 * 3600
    seed: int = 0

    _CASTS = {
        "period": float,
        "utc_offset": float,
        "thresholds": _floats,
        "co_cap": int,
        "on_threshold": float,
        "entropy_k": int,
        "num_states": int,
        "train_on_threshold": float,
        "resample_period": float,
        "hart_threshold": float,
        "hart_tolerance": float,
        "hart_max_on": float,
        "seed": int,
    }

    @classmethod
    def keys(cls) -> list[str]:
        return [f.name for f in fields(cls)]

    def set(self, key: str, raw) -> None:
        cast = self._CASTS.get(key, str)
        try:
            setattr(self, key, cast(raw))
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"bad value for {key}: {raw!r}") from exc

    def validate(self) -> None:
        if self.hierarchy is not None and not Path(self.hierarchy).is_file():
            raise ConfigError(f"hierarchy file not found: {self.hierarchy}")
        if self.split not in ("halves", "none"):
            raise ConfigError("split must be 'halves' or 'none'")
        if any(t <= 0 for t in self.thresholds) or not self.thresholds:
            raise ConfigError("thresholds must be positive")
        if self.co_cap < 1 or self.entropy_k < 1 or self.num_states < 2:
            raise ConfigError("co_cap >= 1, entropy_k >= 1 and num_states >= 2 required")
        if self.on_threshold <= 0 or not 0 < self.hart_tolerance < 1:
            raise ConfigError("on_threshold must be > 0 and hart_tolerance in (0, 1)")


def build_config(args: argparse.Namespace) -> RunConfig:
    cfg = RunConfig()
    if args.config:
        path = Path(args.config)
        if not path.is_file():
            raise ConfigError(f"config file not found: {path}")
        text = path.read_text(encoding="utf-8")
        parser = configparser.ConfigParser()
        try:
            parser.read_string(text if text.lstrip().startswith("[") else "[hnilm]\n" + text)
        except configparser.Error as exc:
            raise ConfigError(str(exc)) from exc
        section = parser["hnilm"] if parser.has_section("hnilm") else parser[parser.sections()[0]]
        for key, raw in section.items():
            if key not in RunConfig.keys():
                raise ConfigError(f"unknown config key {key!r}")
            if key == "hierarchy":
                raw = str((path.parent / raw).resolve()) if not Path(raw).is_absolute() else raw
            cfg.set(key, raw.strip().strip('"'))
    if os.environ.get("HNILM_SEED"):
        cfg.set("seed", os.environ["HNILM_SEED"])
    for key in RunConfig.keys():
        value = getattr(args, f"cfg_{key}", None)
        if value is not None:
            cfg.set(key, value)
    cfg.validate()
    return cfg


def _hierarchy(cfg: RunConfig) -> MeterHierarchy:
    if cfg.hierarchy is None:
        raise ConfigError("no hierarchy configured (set 'hierarchy' or --hierarchy)")
    return load_hierarchy(cfg.hierarchy, cfg.period)


def _series(h: MeterHierarchy, node_id: str, cfg: RunConfig) -> PowerSeries:
    if node_id not in h:
        raise UnknownNode(node_id)
    s = h.series(node_id)
    if cfg.resample_period:
        s = resample(s, cfg.resample_period)
    return s


def _out(cfg: RunConfig, *parts) -> Path:
    return Path(cfg.out_dir).joinpath(*parts)


# ---------------------------------------------------------------------------
# Subcommands
# ---------------------------------------------------------------------------
def cmd_simulate(args, cfg: RunConfig) -> int:
    paths = list(args.paths)
    if args.preset:
        spec = simgen.PRESETS[args.preset]()
    elif paths:
        spec = simgen.load_building_spec(paths.pop(0))
    else:
        raise InvalidSpec("give a spec path or --preset")
    if len(paths) > 1:
        raise ConfigError("too many positional arguments")
    seed_override = getattr(args, "cfg_seed", None) or os.environ.get("HNILM_SEED")
    if seed_override is not None:
        spec = replace(spec, seed=int(seed_override))
    out_dir = Path(paths[0] if paths else cfg.out_dir)
    h = simgen.simulate_building(spec)
    save_hierarchy(h, out_dir)
    doc = simgen.building_spec_to_dict(spec)
    atomic_write_text(out_dir / "spec.json", json.dumps(doc, indent=2) + "\n")
    print(out_dir / "hierarchy.json")
    return EXIT_OK


def cmd_events(args, cfg: RunConfig) -> int:
    h = _hierarchy(cfg)
    thresholds = cfg.thresholds
    for node in args.node:
        s = _series(h, node, cfg)
        stats = events.daily_event_stats(s, thresholds[0], cfg.utc_offset)
        sweep = events.threshold_sweep(s, thresholds, cfg.utc_offset)
        atomic_write_text(_out(cfg, "events", f"{node}_daily.csv"), stats.to_csv())
        rows = [(fmt_num(t), fmt_num(m)) for t, m in sweep.items()]
        atomic_write_text(
            _out(cfg, "events", f"{node}_sweep.csv"),
            csv_text(("threshold_watts", "median_events_per_day"), rows),
        )
        atomic_write_text(
            _out(cfg, "events", f"{node}_events.csv"),
            events.events_to_csv(events.detect_events(s, thresholds[0])),
        )
    return EXIT_OK


def _training_part(s: PowerSeries, cfg: RunConfig) -> PowerSeries:
    return split_halves(s)[0] if cfg.split == "halves" else s


def _testing_part(s: PowerSeries, cfg: RunConfig) -> PowerSeries:
    return split_halves(s)[1] if cfg.split == "halves" else s


def cmd_train(args, cfg: RunConfig) -> int:
    h = _hierarchy(cfg)
    for node in args.node:
        s = _training_part(_series(h, node, cfg), cfg)
        model = train_states(s, cfg.num_states, cfg.train_on_threshold, name=node, seed=cfg.seed)
        path = _out(cfg, "models", f"{node}.json")
        model.save(path)
        print(path)
    return EXIT_OK


def _truth(h: MeterHierarchy, names, cfg: RunConfig) -> dict[str, PowerSeries] | None:
    if not all(n in h and h[n].series is not None for n in names):
        return None
    return {n: _testing_part(_series(h, n, cfg), cfg) for n in names}


def cmd_disagg(args, cfg: RunConfig) -> int:
    h = _hierarchy(cfg)
    comparison = []
    for node in args.aggregate:
        agg = _testing_part(_series(h, node, cfg), cfg)
        out_dir = _out(cfg, "disagg", node)
        if args.algorithm == "hart":
            res = hart_disaggregate(agg, cfg.hart_threshold, cfg.hart_tolerance, cfg.hart_max_on)
            atomic_write_text(out_dir / "hart_activations.csv", res.activations_csv())
            atomic_write_text(out_dir / "hart_unmatched.csv", res.unmatched_csv())
            continue
        if not args.models:
            raise ConfigError("CO needs at least one --models path")
        try:
            models = [ApplianceModel.load(p) for p in args.models]
        except (OSError, ValueError, KeyError) as exc:
            raise ConfigError(f"cannot load model: {exc}") from exc
        result = co_disaggregate(agg, models, cfg.co_cap)
        result.write_csv(out_dir)
        truth = _truth(h, result.appliances, cfg)
        if truth is not None:
            report = metrics.evaluate(truth, result, cfg.on_threshold)
            atomic_write_text(out_dir / "metrics.csv", report.to_csv())
            atomic_write_text(out_dir / "metrics.json", report.to_json())
            comparison += [
                (node, s.appliance, fmt_num(s.f_score), fmt_num(s.nep)) for s in report.scores.values()
            ]
    if len(args.aggregate) > 1 and comparison:
        atomic_write_text(
            _out(cfg, "disagg", "comparison.csv"),
            csv_text(("aggregate", "appliance", "f_score", "nep"), comparison),
        )
    return EXIT_OK


def cmd_evaluate(args, cfg: RunConfig) -> int:
    h = _hierarchy(cfg)
    result = read_disagg_result(args.result_dir)
    for name in result.appliances:
        if name not in h:
            raise UnknownNode(name)
    truth = {n: _testing_part(_series(h, n, cfg), cfg) for n in result.appliances}
    report = metrics.evaluate(truth, result, cfg.on_threshold, mode=args.mode)
    out_dir = Path(args.out or args.result_dir)
    atomic_write_text(out_dir / "metrics.csv", report.to_csv())
    atomic_write_text(out_dir / "metrics.json", report.to_json())
    return EXIT_OK


def cmd_analyze(args, cfg: RunConfig) -> int:
    h = _hierarchy(cfg)
    nodes = args.node or [n for n in h.walk() if h[n].series is not None]
    feeds = {n: _series(h, n, cfg) for n in nodes}
    if args.mode == "corr":
        atomic_write_text(_out(cfg, "analysis", "correlation.csv"), analysis.correlation_matrix(feeds).to_csv())
    elif args.mode == "entropy":
        ent = {n: analysis.knn_entropy(s, cfg.entropy_k, seed=analysis.node_seed(n)) for n, s in feeds.items()}
        atomic_write_text(_out(cfg, "analysis", "entropy.csv"), analysis.entropy_csv(ent))
    else:
        for n, s in feeds.items():
            m = analysis.hourwise_matrix(s, cfg.utc_offset)
            atomic_write_text(_out(cfg, "analysis", f"heatmap_{n}.csv"), m.to_csv())
    return EXIT_OK


# ---------------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------------
def _config_flags() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--config", help="flat INI-style config file")
    for key in RunConfig.keys():
        nargs = "+" if key == "thresholds" else None
        p.add_argument(
            f"--{key.replace('_', '-')}", dest=f"cfg_{key}", default=None, metavar="VALUE", nargs=nargs
        )
    return p


def build_parser() -> argparse.ArgumentParser:
    common = _config_flags()
    parser = argparse.ArgumentParser(prog="hnilm", description=__doc__.split("\n\n")[0].strip())
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", parents=[common], help="generate a synthetic corpus")
    p.add_argument("paths", nargs="*", metavar="[SPEC] OUT_DIR", help="building spec JSON (omit with --preset) and output directory")
    p.add_argument("--preset", choices=sorted(simgen.PRESETS))
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("events", parents=[common], help="event statistics and threshold sweep")
    p.add_argument("--node", nargs="+", required=True)
    p.set_defaults(func=cmd_events)

    p = sub.add_parser("train", parents=[common], help="train state models from sub-metered nodes")
    p.add_argument("--node", nargs="+", required=True)
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("disagg", parents=[common], help="disaggregate aggregate feeds")
    p.add_argument("--aggregate", nargs="+", required=True)
    p.add_argument("--models", nargs="*", default=[])
    p.add_argument("--algorithm", choices=("co", "hart"), default="co")
    p.set_defaults(func=cmd_disagg)

    p = sub.add_parser("evaluate", parents=[common], help="score a written disaggregation result")
    p.add_argument("--result-dir", required=True)
    p.add_argument("--mode", choices=("power", "state"), default="power")
    p.add_argument("--out")
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("analyze", parents=[common], help="correlation, entropy or hour-of-week heatmap")
    p.add_argument("--mode", choices=("corr", "entropy", "heatmap"), required=True)
    p.add_argument("--node", nargs="*")
    p.set_defaults(func=cmd_analyze)
    return parser


def _fail(code: int, name: str, message) -> int:
    print(f"{name}: {message}", file=sys.stderr)
    return code


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = build_config(args)
        return args.func(args, cfg)
    except (ConfigError, InvalidSpec, InvalidHierarchy) as exc:
        return _fail(EXIT_CONFIG, type(exc).__name__, exc)
    except UnknownNode as exc:
        return _fail(EXIT_UNKNOWN_NODE, "UnknownNode", f"no node {exc.args[0]!r} in the hierarchy")
    except TooManyCombinations as exc:
        return _fail(
            EXIT_CAPACITY,
            "TooManyCombinations",
            f"{exc}; prune appliance states or disaggregate a deeper metering level",
        )
    except HnilmError as exc:
        return _fail(EXIT_DEGENERATE, type(exc).__name__, exc)


if __name__ == "__main__":
    sys.exit(main())
