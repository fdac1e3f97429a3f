"""Segment-level hLEPOR: factors and their harmonic combination.

The score of a (hypothesis, reference) pair combines three factors by a
weighted harmonic mean:

    score = (w_elp + w_pos + w_pr)
            / (w_elp/LP + w_pos/NPosPenal + w_pr/HPR)

where

    LP        = 1                     if len_hyp == len_ref
                exp(1 - len_ref/len_hyp)  if len_hyp < len_ref
                exp(1 - len_hyp/len_ref)  if len_hyp > len_ref
    NPD       = (1/len_hyp) * sum over matched pairs of |hyp_pos - ref_pos|
    NPosPenal = exp(-NPD)
    HPR       = (alpha+beta)*P*R / (alpha*P + beta*R),
                P = aligned/len_hyp, R = aligned/len_ref

HPR = 0 (no matched words) makes the harmonic mean degenerate; the score is
defined as 0 there. All functions are pure and thread-safe.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

from .align import Alignment, align
from .errors import DegenerateInputError
from .params import HLeporParams
from .tokenizer import tokenize


@dataclass(frozen=True)
class FactorBreakdown:
    """All intermediate quantities behind one segment score."""

    lp: float
    npd: float
    npos_penal: float
    precision: float
    recall: float
    hpr: float
    score: float


def length_penalty(len_hyp: int, len_ref: int) -> float:
    """Bidirectional exponential length penalty; 1.0 at equal lengths."""
    if len_hyp < 1 or len_ref < 1:
        raise DegenerateInputError(
            f"length penalty needs non-empty sides, got len_hyp={len_hyp}, len_ref={len_ref}"
        )
    if len_hyp == len_ref:
        return 1.0
    if len_hyp < len_ref:
        return math.exp(1.0 - len_ref / len_hyp)
    return math.exp(1.0 - len_hyp / len_ref)


def npd(alignment: Alignment, len_hyp: int) -> float:
    """Mean absolute position difference over matched pairs.

    Unmatched hypothesis tokens contribute 0; positions are raw 1-based
    indices.
    """
    if len_hyp < 1:
        raise DegenerateInputError(f"len_hyp must be >= 1, got {len_hyp}")
    total = 0
    for hyp_pos, ref_pos in alignment.pairs:
        total += abs(hyp_pos - ref_pos)
    return total / len_hyp


def npos_penal(npd_value: float) -> float:
    """Word-order agreement factor e^(-NPD)."""
    if npd_value < 0:
        raise ValueError(f"npd_value must be >= 0, got {npd_value}")
    return math.exp(-npd_value)


def hpr(aligned_num: int, len_hyp: int, len_ref: int, alpha: float, beta: float) -> float:
    """Weighted harmonic mean of unigram precision and recall.

    alpha weights recall, beta weights precision; returns 0 when nothing
    aligned.
    """
    if len_hyp < 1 or len_ref < 1:
        raise DegenerateInputError(
            f"hpr needs non-empty sides, got len_hyp={len_hyp}, len_ref={len_ref}"
        )
    if aligned_num == 0:
        return 0.0
    precision = aligned_num / len_hyp
    recall = aligned_num / len_ref
    return (alpha + beta) * precision * recall / (alpha * precision + beta * recall)


def combine(lp: float, npos: float, hpr_value: float, params: HLeporParams) -> float:
    """Weighted harmonic mean of the three factors; 0 when HPR is 0."""
    if hpr_value == 0.0:
        return 0.0
    weight_sum = params.weight_elp + params.weight_pos + params.weight_pr
    return weight_sum / (
        params.weight_elp / lp + params.weight_pos / npos + params.weight_pr / hpr_value
    )


def score_from_stats(len_hyp: int, len_ref: int, aligned_num: int,
                     npd_value: float, params: HLeporParams) -> float:
    """Score only, from cached alignment statistics; same arithmetic as
    factors_from_stats."""
    lp = length_penalty(len_hyp, len_ref)
    npos = npos_penal(npd_value)
    hpr_value = hpr(aligned_num, len_hyp, len_ref, params.alpha, params.beta)
    return combine(lp, npos, hpr_value, params)


def factors_from_stats(len_hyp: int, len_ref: int, aligned_num: int,
                       npd_value: float, params: HLeporParams) -> FactorBreakdown:
    """Assemble the full breakdown from per-segment alignment statistics.

    This is the single scoring path: hlepor() and corpus/tuning code all
    funnel through it, so cached-alignment scoring is bit-identical to the
    direct call.
    """
    lp = length_penalty(len_hyp, len_ref)
    npos = npos_penal(npd_value)
    precision = aligned_num / len_hyp
    recall = aligned_num / len_ref
    hpr_value = hpr(aligned_num, len_hyp, len_ref, params.alpha, params.beta)
    score = combine(lp, npos, hpr_value, params)
    return FactorBreakdown(
        lp=lp, npd=npd_value, npos_penal=npos,
        precision=precision, recall=recall, hpr=hpr_value, score=score,
    )


def hlepor_tokens(hyp_tokens: Sequence[str], ref_tokens: Sequence[str],
                  params: HLeporParams) -> FactorBreakdown:
    """Score a pre-tokenized pair."""
    if not hyp_tokens:
        raise DegenerateInputError("hypothesis is empty after tokenization")
    if not ref_tokens:
        raise DegenerateInputError("reference is empty after tokenization")
    alignment = align(hyp_tokens, ref_tokens, params.n)
    npd_value = npd(alignment, len(hyp_tokens))
    return factors_from_stats(
        len(hyp_tokens), len(ref_tokens), alignment.aligned_num, npd_value, params
    )


def hlepor(hyp: str, ref: str, params: HLeporParams,
           tokenizer: Callable[[str], list[str]] = tokenize) -> FactorBreakdown:
    """Tokenize, align and score one hypothesis against one reference."""
    return hlepor_tokens(tokenizer(hyp), tokenizer(ref), params)
