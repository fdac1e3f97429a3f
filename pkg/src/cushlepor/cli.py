"""Command-line entry point: score, tune, report, presets.

Option precedence is flags > config file (--config, flat key=value with the
same syntax as preset files) > built-in defaults. Exit codes: 0 success,
1 usage error, 2 data error, 3 runtime error; every failure prints one
machine-parsable `error[kind]: message` line on stderr.
"""

from __future__ import annotations

import argparse
import json
import logging
import secrets
import sys
from pathlib import Path

from . import __version__
from .corpus import ingest, split_corpus
from .errors import CushleporError, DataError, PresetLookupError
from .figures import rmse_comparison_figure
from .params import (
    HLeporParams,
    available_presets,
    load_params_file,
    parse_kv_text,
    preset,
    preset_count,
)
from .report import render_report_figures, write_report, write_report_csv, write_report_json
from .scoring import score_corpus
from .stats import GoldScale, KNOWN_SCALES, UNIT_SCALE
from .tokenizer import split_pretokenized, tokenize
from .tuning import (
    SearchSpace,
    TpeConfig,
    TuningObjective,
    export_params,
    tune_random,
    tune_tpe,
    write_trial_log,
)

logger = logging.getLogger(__name__)

PARAM_FLAGS = ("alpha", "beta", "n", "weight_elp", "weight_pos", "weight_pr")

# every config-file-settable option and its type
_OPTION_TYPES: dict[str, type] = {
    "input": str, "format": str, "columns": str, "out": str,
    "preset": str, "params_file": str,
    "alpha": float, "beta": float, "n": int,
    "weight_elp": float, "weight_pos": float, "weight_pr": float,
    "gold": str, "gold_scale": str,
    "tuner": str, "budget": int, "seed": int, "gamma": float,
    "n_startup": int, "n_candidates": int, "prior_weight": float,
    "split_holdout": bool, "baseline_preset": str,
    "strict": bool, "pretokenized": bool,
    "report_format": str, "figures": bool,
}

_DEFAULTS: dict[str, object] = {
    "format": None,  # auto-detect from extension, falling back to tsv
    # gold_scale default: inferred from the column name (psqm -> 0..6), else unit
    "tuner": "tpe",
    "budget": 300,
    "gamma": 0.25,
    "n_startup": 20,
    "n_candidates": 24,
    "prior_weight": 1.0,
    "split_holdout": False,
    "baseline_preset": "en-cs:default",
    "strict": False,
    "pretokenized": False,
    # report_format defaults per subcommand: score -> json, report -> csv
    "figures": True,
}


class UsageError(CushleporError):
    """Bad flags or flag combinations (exit code 1)."""


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse would exit(2); we own the exit codes
        raise UsageError(message)


def _add_common(parser: _Parser) -> None:
    parser.add_argument("--config", help="flat key=value config file; flags take precedence")
    verbosity = parser.add_mutually_exclusive_group()
    verbosity.add_argument("--quiet", action="store_true", help="only errors")
    verbosity.add_argument("--verbose", action="store_true", help="debug logging")


def _add_corpus_opts(parser: _Parser) -> None:
    parser.add_argument("--input", help="corpus file (TSV or JSONL)")
    parser.add_argument("--format", choices=["tsv", "jsonl"],
                        help="corpus format (default: by file extension, else tsv)")
    parser.add_argument("--columns",
                        help="column map, e.g. 'seg_id=sid,hypothesis=mt'")
    parser.add_argument("--strict", action="store_true", default=None,
                        help="abort on any invalid row instead of skip-and-log")
    parser.add_argument("--pretokenized", action="store_true", default=None,
                        help="split on whitespace only, bypassing the tokenizer")


def build_parser() -> _Parser:
    parser = _Parser(prog="cushlepor", description=__doc__)
    parser.add_argument("--version", action="version", version=f"cushlepor {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("score",
                       help="score a corpus and write a report")
    _add_corpus_opts(p)
    p.add_argument("--preset", help="built-in preset, 'pair' or 'pair:flavor'")
    p.add_argument("--params-file", help="parameter file written by tune/export")
    for flag in PARAM_FLAGS:
        p.add_argument(f"--{flag.replace('_', '-')}",
                       type=int if flag == "n" else float, help=f"inline {flag}")
    p.add_argument("--gold", help="gold column to report agreement against")
    p.add_argument("--gold-scale", help="gold scale: name (psqm, unit) or min:max")
    p.add_argument("--out", help="output directory")
    p.add_argument("--report-format", choices=["json", "csv"])
    p.add_argument("--seed", type=int, help="recorded in report metadata")
    p.add_argument("--no-figures", dest="figures", action="store_false", default=None,
                   help="skip figure rendering")
    _add_common(p)

    p = sub.add_parser("tune",
                       help="tune parameters against a gold column")
    _add_corpus_opts(p)
    p.add_argument("--gold", help="gold column to tune against (required)")
    p.add_argument("--gold-scale", help="gold scale: name (psqm, unit) or min:max")
    p.add_argument("--tuner", choices=["tpe", "random"])
    p.add_argument("--budget", type=int, help="number of trials")
    p.add_argument("--seed", type=int, help="RNG seed; generated and printed if omitted")
    p.add_argument("--gamma", type=float, help="good-quantile fraction")
    p.add_argument("--n-startup", type=int, help="uniform warmup trials")
    p.add_argument("--n-candidates", type=int, help="candidate draws per iteration")
    p.add_argument("--prior-weight", type=float, help="uniform prior weight")
    p.add_argument("--split-holdout", action="store_true", default=None,
                   help="hold out 20%% of seg_ids and report held-out RMSE")
    p.add_argument("--baseline-preset",
                   help="preset named in the before/after summary (default en-cs:default)")
    p.add_argument("--out", help="output directory")
    p.add_argument("--no-figures", dest="figures", action="store_false", default=None,
                   help="skip figure rendering")
    _add_common(p)

    p = sub.add_parser("report",
                       help="re-render an existing report.json as CSV/figures")
    p.add_argument("--input", help="report.json produced by score")
    p.add_argument("--out", help="output directory")
    p.add_argument("--report-format", choices=["json", "csv"])
    p.add_argument("--no-figures", dest="figures", action="store_false", default=None,
                   help="skip figure rendering")
    _add_common(p)

    p = sub.add_parser("presets",
                       help="list built-in presets")
    _add_common(p)

    return parser


def _coerce(key: str, raw: str):
    target = _OPTION_TYPES[key]
    if target is bool:
        lowered = raw.lower()
        if lowered in ("1", "true", "yes", "on"):
            return True
        if lowered in ("0", "false", "no", "off"):
            return False
        raise UsageError(f"config key {key!r}: expected a boolean, got {raw!r}")
    try:
        return target(raw)
    except ValueError as exc:
        raise UsageError(f"config key {key!r}: {exc}") from exc


def _resolve_options(args: argparse.Namespace) -> argparse.Namespace:
    """Fill unset flags from the config file, then from built-in defaults."""
    config: dict[str, str] = {}
    if getattr(args, "config", None):
        path = Path(args.config)
        if not path.exists():
            raise UsageError(f"config file not found: {path}")
        try:
            entries = parse_kv_text(path.read_text(encoding="utf-8"))
        except ValueError as exc:
            raise UsageError(f"config file {path}: {exc}") from exc
        config = {k.replace("-", "_"): v for k, v in entries.items()}

    for key in vars(args):
        if key not in _OPTION_TYPES or getattr(args, key) is not None:
            continue
        if key in config:
            setattr(args, key, _coerce(key, config[key]))
        elif key in _DEFAULTS:
            setattr(args, key, _DEFAULTS[key])
    unknown = set(config) - set(_OPTION_TYPES)
    if unknown:
        logger.debug("config keys not used by this subcommand: %s", sorted(unknown))
    return args


def _require(args: argparse.Namespace, *names: str) -> None:
    for name in names:
        if getattr(args, name, None) is None:
            raise UsageError(f"--{name.replace('_', '-')} is required")


def _parse_columns(spec: str | None) -> dict[str, str] | None:
    if not spec:
        return None
    mapping = {}
    for item in spec.split(","):
        if "=" not in item:
            raise UsageError(f"--columns entries must look like field=column, got {item!r}")
        field, column = item.split("=", 1)
        mapping[field.strip()] = column.strip()
    return mapping


def _resolve_scale(args: argparse.Namespace) -> GoldScale:
    if args.gold_scale:
        return _parse_scale(args.gold_scale)
    return KNOWN_SCALES.get(args.gold, UNIT_SCALE)


def _parse_scale(spec: str) -> GoldScale:
    if spec in KNOWN_SCALES:
        return KNOWN_SCALES[spec]
    parts = spec.split(":")
    try:
        if len(parts) == 2:
            return GoldScale(spec, float(parts[0]), float(parts[1]))
        if len(parts) == 3:
            return GoldScale(parts[0], float(parts[1]), float(parts[2]))
    except ValueError as exc:
        raise UsageError(f"bad --gold-scale {spec!r}: {exc}") from exc
    raise UsageError(
        f"bad --gold-scale {spec!r}: expected a known name "
        f"({', '.join(sorted(KNOWN_SCALES))}) or min:max"
    )


def _detect_format(args: argparse.Namespace) -> str:
    if args.format:
        return args.format
    if str(args.input).endswith(".jsonl"):
        return "jsonl"
    return "tsv"


def _parse_preset_name(name: str) -> HLeporParams:
    pair, _, flavor = name.partition(":")
    return preset(pair, flavor or "default")


def _resolve_params(args: argparse.Namespace) -> tuple[HLeporParams, str]:
    inline = [getattr(args, flag) for flag in PARAM_FLAGS]
    sources = [args.preset is not None, args.params_file is not None,
               any(v is not None for v in inline)]
    if sum(sources) != 1:
        raise UsageError(
            "exactly one parameter source required: --preset, --params-file, "
            "or all six of --alpha/--beta/--n/--weight-elp/--weight-pos/--weight-pr"
        )
    if args.preset is not None:
        return _parse_preset_name(args.preset), f"preset {args.preset}"
    if args.params_file is not None:
        path = Path(args.params_file)
        if not path.exists():
            raise DataError(f"params file not found: {path}")
        return load_params_file(path), f"file {path}"
    if any(v is None for v in inline):
        missing = [f"--{flag.replace('_', '-')}" for flag, v in zip(PARAM_FLAGS, inline)
                   if v is None]
        raise UsageError(f"inline parameters incomplete; missing {', '.join(missing)}")
    return HLeporParams(*inline), "inline"


def _resolve_seed(args: argparse.Namespace) -> int:
    if args.seed is not None:
        return args.seed
    seed = secrets.randbits(31)
    print(f"seed: {seed}")
    return seed


def _tokenizer(args: argparse.Namespace):
    if args.pretokenized:
        return split_pretokenized, "pretokenized"
    return tokenize, "default"


def _outdir(args: argparse.Namespace) -> Path:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    return out


def cmd_score(args: argparse.Namespace) -> int:
    _require(args, "input", "out")
    params, source = _resolve_params(args)
    tokenizer, tokenizer_name = _tokenizer(args)
    corpus = ingest(args.input, format=_detect_format(args),
                    column_map=_parse_columns(args.columns), strict=args.strict)
    if len(corpus) == 0:
        raise DataError(f"{args.input}: no valid segments to score")
    scales = {}
    if args.gold is not None:
        if args.gold not in corpus.gold_columns:
            raise DataError(f"gold column {args.gold!r} not present in {args.input}")
        scales[args.gold] = _resolve_scale(args)
    scores = score_corpus(corpus, params, scales, tokenizer)
    written = write_report(scores, _outdir(args), format=args.report_format or "json",
                           seed=args.seed, tokenizer_name=tokenizer_name,
                           figures=args.figures)
    logger.info("scored %d segments from %d system(s) with %s",
                len(corpus), len(corpus.system_ids), source)
    mean = sum(scores.scores) / len(scores.scores)
    print(f"segments: {len(corpus)}  systems: {len(corpus.system_ids)}  "
          f"mean score: {mean:.6f}")
    for column, a in sorted(scores.agreement.items()):
        pearson_text = "n/a" if a.pearson is None else f"{a.pearson:.6f}"
        print(f"agreement[{column}]: rmse={a.rmse:.6f} pearson={pearson_text} "
              f"n={a.n_segments}")
    for path in written:
        print(f"wrote {path}")
    return 0


def cmd_tune(args: argparse.Namespace) -> int:
    _require(args, "input", "out", "gold")
    if args.budget < 1:
        raise UsageError(f"--budget must be >= 1, got {args.budget}")
    tokenizer, tokenizer_name = _tokenizer(args)
    corpus = ingest(args.input, format=_detect_format(args),
                    column_map=_parse_columns(args.columns), strict=args.strict)
    scale = _resolve_scale(args)
    seed = _resolve_seed(args)

    heldout = None
    train = corpus
    if args.split_holdout:
        train, heldout = split_corpus(corpus, 0.2)
        if len(train) == 0 or len(heldout) == 0:
            raise DataError(
                f"holdout split left an empty side (train={len(train)}, "
                f"heldout={len(heldout)}); corpus too small"
            )
        logger.info("holdout split: %d train / %d held-out segments",
                    len(train), len(heldout))

    objective = TuningObjective(train, args.gold, scale, tokenizer)
    space = SearchSpace()
    if args.tuner == "tpe":
        config = TpeConfig(budget=args.budget, n_startup=args.n_startup,
                           gamma=args.gamma, n_candidates=args.n_candidates,
                           seed=seed, prior_weight=args.prior_weight)
        result = tune_tpe(objective, space, config)
    else:
        result = tune_random(objective, space, args.budget, seed)

    baseline_params = _parse_preset_name(args.baseline_preset)
    baseline_rmse = objective(baseline_params)

    outdir = _outdir(args)
    params_path = outdir / "best_params.txt"
    export_params(result.best, params_path, seed=seed, budget=args.budget,
                  gold_column=args.gold, corpus_sha256=train.fingerprint())
    log_path = outdir / "trials.jsonl"
    write_trial_log(result.trials, log_path)

    summary = {
        "tuner": args.tuner,
        "budget": args.budget,
        "seed": seed,
        "gold_column": args.gold,
        "scale": {"name": scale.name, "min": scale.min, "max": scale.max},
        "corpus_sha256": train.fingerprint(),
        "baseline": {"preset": args.baseline_preset,
                     "params": baseline_params.as_dict(),
                     "rmse": baseline_rmse},
        "tuned": {"params": result.best.params.as_dict(),
                  "rmse": result.best.objective,
                  "trial_index": result.best.index},
        "version": __version__,
    }
    labels = [f"baseline\n{args.baseline_preset}", "tuned"]
    values = [baseline_rmse, result.best.objective]
    if heldout is not None:
        heldout_objective = TuningObjective(heldout, args.gold, scale, tokenizer)
        summary["heldout"] = {
            "n_segments": len(heldout),
            "baseline_rmse": heldout_objective(baseline_params),
            "tuned_rmse": heldout_objective(result.best.params),
        }
        labels += ["baseline\n(held-out)", "tuned\n(held-out)"]
        values += [summary["heldout"]["baseline_rmse"], summary["heldout"]["tuned_rmse"]]
    summary_path = outdir / "tune_summary.json"
    summary_path.write_text(json.dumps(summary, indent=2, sort_keys=True) + "\n",
                            encoding="utf-8")
    written = [params_path, log_path, summary_path]
    if args.figures:
        written.append(rmse_comparison_figure(
            labels, values, outdir / "rmse_comparison.png",
            title=f"RMSE against {args.gold!r} ({tokenizer_name} tokenizer)"))

    print(f"tuned rmse: {result.best.objective:.6f}  "
          f"baseline[{args.baseline_preset}]: {baseline_rmse:.6f}  "
          f"trials: {len(result.trials)}")
    if heldout is not None:
        print(f"held-out rmse: tuned {summary['heldout']['tuned_rmse']:.6f}  "
              f"baseline {summary['heldout']['baseline_rmse']:.6f}")
    for path in written:
        print(f"wrote {path}")
    return 0


def cmd_report(args: argparse.Namespace) -> int:
    _require(args, "input", "out")
    path = Path(args.input)
    if not path.exists():
        raise DataError(f"report file not found: {path}")
    try:
        report = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise DataError(f"{path}: not valid JSON ({exc})") from exc
    for section in ("meta", "segments", "systems", "histograms"):
        if section not in report:
            raise DataError(f"{path}: missing report section {section!r}")
    outdir = _outdir(args)
    report_format = args.report_format or "csv"
    if report_format == "csv":
        written = write_report_csv(report, outdir)
    else:
        written = [write_report_json(report, outdir / "report.json")]
    if args.figures:
        written += render_report_figures(report, outdir)
    for out_path in written:
        print(f"wrote {out_path}")
    return 0


def cmd_presets(args: argparse.Namespace) -> int:
    for pair, flavor, p, provenance in available_presets():
        values = (f"alpha={p.alpha} beta={p.beta} n={p.n} weight_elp={p.weight_elp} "
                  f"weight_pos={p.weight_pos} weight_pr={p.weight_pr}")
        print(f"{pair:<8} {flavor:<16} {values}  [{provenance}]")
    print(f"total: {preset_count()} presets")
    return 0


_COMMANDS = {
    "score": cmd_score,
    "tune": cmd_tune,
    "report": cmd_report,
    "presets": cmd_presets,
}


def _setup_logging(args: argparse.Namespace) -> None:
    level = logging.INFO
    if getattr(args, "quiet", False):
        level = logging.ERROR
    elif getattr(args, "verbose", False):
        level = logging.DEBUG
    logging.basicConfig(level=level, stream=sys.stderr,
                        format="%(levelname)s %(name)s: %(message)s")


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        _setup_logging(args)
        args = _resolve_options(args)
        return _COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"error[usage]: {exc}", file=sys.stderr)
        return 1
    except PresetLookupError as exc:
        print(f"error[usage]: {exc}", file=sys.stderr)
        return 1
    except DataError as exc:
        message = str(exc).replace("\n", " | ")
        print(f"error[data]: {message}", file=sys.stderr)
        return 2
    except KeyboardInterrupt:
        print("error[runtime]: interrupted", file=sys.stderr)
        return 3
    except Exception as exc:  # noqa: BLE001 - single funnel to exit code 3
        print(f"error[runtime]: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
