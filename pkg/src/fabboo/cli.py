"""Command-line front end: execute runs, parameter sweeps and stream exports.

Exit codes: 0 success, 1 runtime failure, 2 invalid configuration,
3 data error.
"""

from __future__ import annotations

import argparse
import statistics
import sys
from dataclasses import replace
from pathlib import Path

from .boosting import BoostedEnsemble, method_params
from .config import (ConfigError, ExperimentConfig, config_to_text,
                     parse_config_file, parse_notion)
from .data import DataError, load_csv, save_csv, shuffled, replay
from .fairness import Notion
from .generators import generate, preset, with_overrides
from .prequential import EvalConfig, Summary, run_prequential, write_trace

EXIT_OK = 0
EXIT_RUNTIME = 1
EXIT_CONFIG = 2
EXIT_DATA = 3

_AGGREGATED = ("bal_acc", "gmean", "recall", "kappa",
               "cum_sp", "cum_eqop", "cum_peq", "wall_s")

_SWEEP_PARAMS = {
    "learners": "learners", "n": "learners",
    "lambda": "decay",
    "window": "window", "m": "window",
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fabboo",
        description="Stream classification with online fairness- and "
                    "class-imbalance-aware boosting.")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p):
        p.add_argument("--config", help="experiment config file")
        p.add_argument("--dataset", help="CSV dataset path (needs schema keys "
                                         "from a config file)")
        p.add_argument("--preset", dest="preset_name",
                       help="named synthetic stream")
        p.add_argument("--length", type=int, help="stream length override")
        p.add_argument("--order", choices=("shuffled", "stored"))
        p.add_argument("--method", choices=("fabboo", "osboost", "ofib",
                                            "cfbb", "imbalance_only"))
        p.add_argument("--fairness", help="sp | eqop | peq | none")
        p.add_argument("--learners", type=int, help="ensemble size N")
        p.add_argument("--gamma", type=float, help="boosting edge parameter")
        p.add_argument("--lambda", dest="lam", type=float,
                       help="imbalance-monitor decay")
        p.add_argument("--window", type=int, help="boundary window capacity M")
        p.add_argument("--epsilon", type=float, help="discrimination tolerance")
        p.add_argument("--smoothing", type=float,
                       help="fairness denominator correction l")
        p.add_argument("--chunk", type=int, help="chunk size (cfbb)")
        p.add_argument("--shuffles", type=int)
        p.add_argument("--seed", type=int)
        p.add_argument("--stride", type=int, help="trace row stride")
        p.add_argument("--out", help="output directory")

    run_p = sub.add_parser("run", help="execute one experiment (all shuffles)")
    add_common(run_p)

    sweep_p = sub.add_parser("sweep", help="repeat an experiment over a "
                                           "hyperparameter grid")
    add_common(sweep_p)
    sweep_p.add_argument("--param", required=True,
                         choices=sorted(_SWEEP_PARAMS),
                         help="parameter to sweep (N=learners, M=window)")
    sweep_p.add_argument("--values", required=True,
                         help="comma-separated parameter values")

    export_p = sub.add_parser("export", help="write a synthetic stream as CSV")
    export_p.add_argument("--preset", dest="preset_name", required=True)
    export_p.add_argument("--length", type=int)
    export_p.add_argument("--seed", type=int, default=1)
    export_p.add_argument("--out", required=True, help="destination CSV path")
    return parser


def apply_flags(cfg: ExperimentConfig, args) -> ExperimentConfig:
    updates = {}
    if args.dataset:
        updates["source_kind"] = "csv"
        updates["csv_path"] = args.dataset
    if args.preset_name:
        updates["source_kind"] = "preset"
        updates["preset_name"] = args.preset_name
    if args.length is not None:
        updates["length"] = args.length
    if args.order:
        updates["order"] = args.order
    if args.method:
        updates["method"] = args.method
    if args.fairness is not None:
        updates["notion"] = parse_notion(args.fairness)
    for flag, attr in (("learners", "learners"), ("gamma", "gamma"),
                       ("lam", "decay"), ("window", "window"),
                       ("epsilon", "epsilon"), ("smoothing", "smoothing"),
                       ("chunk", "chunk"), ("shuffles", "shuffles"),
                       ("seed", "seed"), ("stride", "stride")):
        value = getattr(args, flag)
        if value is not None:
            updates[attr] = value
    if args.out:
        updates["out_dir"] = args.out
    return replace(cfg, **updates)


def build_model(cfg: ExperimentConfig, kinds) -> BoostedEnsemble:
    params = method_params(
        cfg.method, cfg.notion, learners=cfg.learners, gamma=cfg.gamma,
        decay=cfg.decay, window=cfg.window, epsilon=cfg.epsilon,
        smoothing=cfg.smoothing, chunk_size=cfg.chunk)
    return BoostedEnsemble(params, kinds)


def build_sources(cfg: ExperimentConfig):
    """Yield (shuffle_index, kinds, instance iterable) per shuffle.

    Shuffle i uses seed = base seed + i regardless of method, so paired
    method comparisons see identical instance orders.
    """
    if cfg.source_kind == "csv":
        dataset = load_csv(cfg.csv_path, cfg.schema)
        kinds = cfg.schema.kinds()
        for i in range(cfg.shuffles):
            if cfg.order == "stored":
                yield i, kinds, replay(dataset)
            else:
                yield i, kinds, shuffled(dataset, cfg.seed + i)
        return
    gen = preset(cfg.preset_name) if cfg.source_kind == "preset" else cfg.generator
    if cfg.length is not None:
        gen = with_overrides(gen, length=cfg.length)
    kinds = gen.schema().kinds()
    for i in range(cfg.shuffles):
        yield i, kinds, generate(with_overrides(gen, seed=cfg.seed + i))


def aggregate_text(summaries: list[Summary]) -> str:
    lines = [f"shuffles = {len(summaries)}"]
    for key in _AGGREGATED:
        values = [getattr(s, key) for s in summaries]
        mean = statistics.fmean(values)
        std = statistics.stdev(values) if len(values) > 1 else 0.0
        lines.append(f"{key} = {mean:.6f} ± {std:.6f}")
    return "\n".join(lines) + "\n"


def execute_run(cfg: ExperimentConfig) -> list[Summary]:
    """Run every shuffle, writing one trace + summary per shuffle and the
    aggregate summary; returns the per-shuffle summaries."""
    cfg.validate()
    out_root = Path(cfg.out_dir)
    eval_cfg = EvalConfig(stride=cfg.stride,
                          trace_notion=cfg.notion or Notion.SP,
                          decay=cfg.decay, smoothing=cfg.smoothing)
    summaries = []
    for i, kinds, source in build_sources(cfg):
        model = build_model(cfg, kinds)
        trace, summary = run_prequential(model, source, eval_cfg)
        run_dir = out_root / f"shuffle-{i:02d}"
        run_dir.mkdir(parents=True, exist_ok=True)
        write_trace(run_dir / "trace.csv", trace)
        (run_dir / "summary.txt").write_text(summary.to_text(), encoding="utf-8")
        summaries.append(summary)
    out_root.mkdir(parents=True, exist_ok=True)
    (out_root / "aggregate.txt").write_text(aggregate_text(summaries),
                                            encoding="utf-8")
    (out_root / "config.cfg").write_text(config_to_text(cfg), encoding="utf-8")
    return summaries


def execute_sweep(cfg: ExperimentConfig, param: str, values: list[str]) -> str:
    """Run the experiment once per parameter value; returns the wide table."""
    if not values:
        raise ConfigError("sweep needs a non-empty value list")
    attr = _SWEEP_PARAMS[param]
    conv = float if attr in ("decay",) else int
    rows = []
    out_root = Path(cfg.out_dir)
    for raw in values:
        try:
            value = conv(raw)
        except ValueError:
            raise ConfigError(f"bad sweep value {raw!r}")
        sub_cfg = replace(cfg, **{attr: value,
                                  "out_dir": str(out_root / f"{param}={raw}")})
        summaries = execute_run(sub_cfg)
        cells = [f"{raw}"]
        for key in _AGGREGATED:
            vals = [getattr(s, key) for s in summaries]
            mean = statistics.fmean(vals)
            std = statistics.stdev(vals) if len(vals) > 1 else 0.0
            cells.append(f"{mean:.4f}±{std:.4f}")
        rows.append(cells)
    header = [param] + list(_AGGREGATED)
    widths = [max(len(header[c]), *(len(r[c]) for r in rows))
              for c in range(len(header))]
    fmt = "  ".join(f"{{:<{w}}}" for w in widths)
    table = "\n".join([fmt.format(*header)] + [fmt.format(*r) for r in rows]) + "\n"
    out_root.mkdir(parents=True, exist_ok=True)
    (out_root / f"sweep_{param}.txt").write_text(table, encoding="utf-8")
    return table


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "export":
            gen = preset(args.preset_name)
            if args.length is not None:
                gen = with_overrides(gen, length=args.length)
            gen = with_overrides(gen, seed=args.seed)
            save_csv(args.out, gen.schema(), generate(gen))
            print(f"wrote {gen.length} instances to {args.out}")
            return EXIT_OK

        cfg = parse_config_file(args.config) if args.config else ExperimentConfig()
        cfg = apply_flags(cfg, args)
        if args.command == "run":
            execute_run(cfg)
            print((Path(cfg.out_dir) / "aggregate.txt").read_text(
                encoding="utf-8"), end="")
            return EXIT_OK
        if args.command == "sweep":
            values = [v.strip() for v in args.values.split(",") if v.strip()]
            table = execute_sweep(cfg, args.param, values)
            print(table, end="")
            return EXIT_OK
    except ConfigError as e:
        print(f"config error: {e}", file=sys.stderr)
        return EXIT_CONFIG
    except (DataError, FileNotFoundError) as e:
        print(f"data error: {e}", file=sys.stderr)
        return EXIT_DATA
    except ValueError as e:
        print(f"config error: {e}", file=sys.stderr)
        return EXIT_CONFIG
    except Exception as e:  # runtime failure
        print(f"error: {e}", file=sys.stderr)
        return EXIT_RUNTIME
    return EXIT_CONFIG


def entry() -> None:
    sys.exit(main())
