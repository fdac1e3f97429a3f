"""Corpus-level scoring: per-segment breakdowns, system means, agreement."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Callable, Mapping

from .corpus import Corpus
from .errors import DegenerateInputError, UndefinedCorrelationError
from .metric import FactorBreakdown, hlepor_tokens
from .params import HLeporParams
from .stats import GoldScale, KNOWN_SCALES, UNIT_SCALE, histogram20, normalize_gold, pearson, rmse
from .tokenizer import tokenize

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SegmentScore:
    seg_id: str
    system_id: str
    factors: FactorBreakdown
    gold: Mapping[str, float] = field(default_factory=dict)
    gold_normalized: Mapping[str, float] = field(default_factory=dict)


@dataclass(frozen=True)
class Agreement:
    gold_column: str
    scale: GoldScale
    n_segments: int
    rmse: float
    pearson: float | None
    n_clamped: int


@dataclass(frozen=True)
class CorpusScores:
    params: HLeporParams
    segments: tuple[SegmentScore, ...]
    system_means: Mapping[str, float]
    agreement: Mapping[str, Agreement]
    histogram: tuple[int, ...]
    gold_histograms: Mapping[str, tuple[int, ...]]

    @property
    def scores(self) -> list[float]:
        return [s.factors.score for s in self.segments]


def score_corpus(corpus: Corpus, params: HLeporParams,
                 gold_scales: Mapping[str, GoldScale] | None = None,
                 tokenizer: Callable[[str], list[str]] = tokenize) -> CorpusScores:
    """Score every segment and aggregate.

    Gold columns without an entry in gold_scales fall back to the shipped
    scale matching their name (e.g. "psqm" -> 0..6), else to unit scale.
    Results are assembled in corpus order; the whole pass is deterministic.
    Degenerate segments are reported with their identity.
    """
    gold_scales = dict(gold_scales or {})

    def scale_for(name: str) -> GoldScale:
        return gold_scales.get(name) or KNOWN_SCALES.get(name, UNIT_SCALE)

    segment_scores: list[SegmentScore] = []
    per_system: dict[str, list[float]] = {}

    for seg in corpus:
        try:
            factors = hlepor_tokens(tokenizer(seg.hypothesis), tokenizer(seg.reference), params)
        except DegenerateInputError as exc:
            raise DegenerateInputError(
                f"segment (seg_id={seg.seg_id!r}, system_id={seg.system_id!r}): {exc}"
            ) from exc
        normalized = {}
        for name, value in seg.gold.items():
            normalized[name] = normalize_gold(value, scale_for(name))
        segment_scores.append(SegmentScore(
            seg_id=seg.seg_id, system_id=seg.system_id, factors=factors,
            gold=dict(seg.gold), gold_normalized=normalized,
        ))
        per_system.setdefault(seg.system_id, []).append(factors.score)

    system_means = {sys: sum(vals) / len(vals) for sys, vals in per_system.items()}

    agreement: dict[str, Agreement] = {}
    gold_histograms: dict[str, tuple[int, ...]] = {}
    for column in corpus.gold_columns:
        scale = scale_for(column)
        pairs = [(s.factors.score, s.gold_normalized[column], s.gold[column])
                 for s in segment_scores if column in s.gold]
        if not pairs:
            continue
        metric_vals = [p[0] for p in pairs]
        gold_vals = [p[1] for p in pairs]
        n_clamped = sum(1 for p in pairs if not scale.min <= p[2] <= scale.max)
        try:
            pearson_value: float | None = pearson(metric_vals, gold_vals)
        except (UndefinedCorrelationError, ValueError):
            logger.warning("pearson undefined for gold column %r; omitted", column)
            pearson_value = None
        agreement[column] = Agreement(
            gold_column=column, scale=scale, n_segments=len(pairs),
            rmse=rmse(metric_vals, gold_vals), pearson=pearson_value,
            n_clamped=n_clamped,
        )
        gold_histograms[column] = tuple(histogram20(gold_vals))

    return CorpusScores(
        params=params,
        segments=tuple(segment_scores),
        system_means=system_means,
        agreement=agreement,
        histogram=tuple(histogram20([s.factors.score for s in segment_scores])),
        gold_histograms=gold_histograms,
    )
