"""Report emission: one JSON document, or one CSV file per section, plus
rendered figures.

Sections: segments (per-segment factor table), systems (mean scores),
agreement (RMSE/Pearson per gold column), histograms (20 bins over [0, 1]),
meta (resolved params, seed, tool version). Output is deterministic for
identical inputs.
"""

from __future__ import annotations

import csv
import json
from pathlib import Path
from typing import Mapping

from . import __version__
from .figures import score_distribution_figure
from .scoring import CorpusScores

SEGMENT_FIELDS = ("seg_id", "system_id", "score", "lp", "npd", "npos_penal",
                  "precision", "recall", "hpr")


def build_report(scores: CorpusScores, seed: int | None = None,
                 tokenizer_name: str = "default") -> dict:
    """Assemble the report document as plain JSON-ready data."""
    segments = []
    for s in scores.segments:
        row: dict[str, object] = {
            "seg_id": s.seg_id,
            "system_id": s.system_id,
            "score": s.factors.score,
            "lp": s.factors.lp,
            "npd": s.factors.npd,
            "npos_penal": s.factors.npos_penal,
            "precision": s.factors.precision,
            "recall": s.factors.recall,
            "hpr": s.factors.hpr,
        }
        if s.gold:
            row["gold"] = dict(sorted(s.gold.items()))
            row["gold_normalized"] = dict(sorted(s.gold_normalized.items()))
        segments.append(row)

    systems = [{"system_id": sys, "n_segments": sum(1 for s in scores.segments if s.system_id == sys),
                "mean_score": mean}
               for sys, mean in sorted(scores.system_means.items())]

    agreement = {}
    for column, a in sorted(scores.agreement.items()):
        agreement[column] = {
            "rmse": a.rmse,
            "pearson": a.pearson,
            "n_segments": a.n_segments,
            "scale": {"name": a.scale.name, "min": a.scale.min, "max": a.scale.max},
            "n_clamped": a.n_clamped,
        }

    report: dict[str, object] = {
        "meta": {
            "version": __version__,
            "params": scores.params.as_dict(),
            "seed": seed,
            "tokenizer": tokenizer_name,
        },
        "segments": segments,
        "systems": systems,
        "histograms": {
            "metric": list(scores.histogram),
            "gold": {k: list(v) for k, v in sorted(scores.gold_histograms.items())},
        },
    }
    if agreement:
        report["agreement"] = agreement
    return report


def write_report_json(report: Mapping, path: str | Path) -> Path:
    path = Path(path)
    path.write_text(json.dumps(report, indent=2, ensure_ascii=False, sort_keys=True) + "\n",
                    encoding="utf-8")
    return path


def write_report_csv(report: Mapping, outdir: str | Path) -> list[Path]:
    """CSV variant: one file per section."""
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    written: list[Path] = []

    gold_cols = sorted({name for row in report["segments"] for name in row.get("gold", {})})
    path = outdir / "segments.csv"
    with path.open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(list(SEGMENT_FIELDS)
                        + [f"gold_{c}" for c in gold_cols]
                        + [f"gold_norm_{c}" for c in gold_cols])
        for row in report["segments"]:
            writer.writerow([row[f] for f in SEGMENT_FIELDS]
                            + [row.get("gold", {}).get(c, "") for c in gold_cols]
                            + [row.get("gold_normalized", {}).get(c, "") for c in gold_cols])
    written.append(path)

    path = outdir / "systems.csv"
    with path.open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["system_id", "n_segments", "mean_score"])
        for row in report["systems"]:
            writer.writerow([row["system_id"], row["n_segments"], row["mean_score"]])
    written.append(path)

    if "agreement" in report:
        path = outdir / "agreement.csv"
        with path.open("w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh)
            writer.writerow(["gold_column", "rmse", "pearson", "n_segments",
                             "scale_name", "scale_min", "scale_max", "n_clamped"])
            for column, a in report["agreement"].items():
                writer.writerow([column, a["rmse"],
                                 "" if a["pearson"] is None else a["pearson"],
                                 a["n_segments"], a["scale"]["name"],
                                 a["scale"]["min"], a["scale"]["max"], a["n_clamped"]])
        written.append(path)

    path = outdir / "histograms.csv"
    with path.open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["series", "bin_low", "bin_high", "count"])
        histograms = report["histograms"]
        series = [("metric", histograms["metric"])]
        series += [(f"gold_{name}", hist) for name, hist in histograms["gold"].items()]
        for name, hist in series:
            for i, count in enumerate(hist):
                writer.writerow([name, i / 20, (i + 1) / 20, count])
    written.append(path)

    path = outdir / "meta.csv"
    with path.open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["key", "value"])
        meta = report["meta"]
        writer.writerow(["version", meta["version"]])
        writer.writerow(["seed", "" if meta["seed"] is None else meta["seed"]])
        writer.writerow(["tokenizer", meta["tokenizer"]])
        for key, value in meta["params"].items():
            writer.writerow([f"params.{key}", value])
    written.append(path)
    return written


def render_report_figures(report: Mapping, outdir: str | Path, stem: str = "report") -> list[Path]:
    """Render the score-distribution figure next to the delimited output."""
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    histograms = report["histograms"]
    fig = score_distribution_figure(histograms["metric"], histograms["gold"],
                                    outdir / f"{stem}_score_distribution.png")
    return [fig]


def write_report(scores: CorpusScores, outdir: str | Path, format: str = "json",
                 seed: int | None = None, tokenizer_name: str = "default",
                 figures: bool = True) -> list[Path]:
    """Score report entry point used by the CLI; returns written paths."""
    if format not in ("json", "csv"):
        raise ValueError(f"unknown report format {format!r}, expected json or csv")
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    report = build_report(scores, seed=seed, tokenizer_name=tokenizer_name)
    if format == "json":
        written = [write_report_json(report, outdir / "report.json")]
    else:
        written = write_report_csv(report, outdir)
    if figures:
        written += render_report_figures(report, outdir)
    return written
