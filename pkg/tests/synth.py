"""Synthetic corpus generation shared by tuning and acceptance tests."""

from __future__ import annotations

import numpy as np

from cushlepor import Corpus, SegmentRecord, score_corpus
from cushlepor.params import HLeporParams


def make_segment_texts(n_segments: int = 500, seed: int = 2026, vocab_size: int = 80,
                       p_sub: float = 0.05, p_swap: float = 0.35,
                       p_del: float = 0.10, p_ins: float = 0.10) -> list[tuple[str, str]]:
    """Reference sentences with MT-like noise: substitutions, one swap,
    occasional deletion/insertion. Scores under typical parameters
    concentrate high, like real similarity-score gold columns."""
    vocab = [f"tok{i:02d}" for i in range(vocab_size)]
    rng = np.random.default_rng(seed)
    pairs = []
    for _ in range(n_segments):
        length = int(rng.integers(5, 16))
        ref = [vocab[int(rng.integers(0, vocab_size))] for _ in range(length)]
        hyp = list(ref)
        for j in range(len(hyp)):
            if rng.random() < p_sub:
                hyp[j] = vocab[int(rng.integers(0, vocab_size))]
        if rng.random() < p_swap and len(hyp) > 3:
            a, b = sorted(rng.integers(0, len(hyp), size=2))
            hyp[a], hyp[b] = hyp[b], hyp[a]
        if rng.random() < p_del and len(hyp) > 4:
            del hyp[int(rng.integers(0, len(hyp)))]
        if rng.random() < p_ins:
            hyp.insert(int(rng.integers(0, len(hyp) + 1)), vocab[int(rng.integers(0, vocab_size))])
        pairs.append((" ".join(hyp), " ".join(ref)))
    return pairs


def corpus_from_texts(texts: list[tuple[str, str]], system_id: str = "sys") -> Corpus:
    return Corpus([SegmentRecord(f"s{i}", system_id, hyp, ref)
                   for i, (hyp, ref) in enumerate(texts)])


def corpus_with_oracle_gold(texts: list[tuple[str, str]], theta: HLeporParams,
                            column: str = "oracle") -> Corpus:
    """Attach a gold column equal to the metric's own scores under theta."""
    gold = score_corpus(corpus_from_texts(texts), theta).scores
    return Corpus([SegmentRecord(f"s{i}", "sys", hyp, ref, gold={column: g})
                   for i, ((hyp, ref), g) in enumerate(zip(texts, gold))])
