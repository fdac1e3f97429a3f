"""One-to-one word alignment between hypothesis and reference.

The matcher walks hypothesis positions left to right. At each position it
considers every not-yet-consumed reference position holding the identical
(case-folded) token and picks the one whose surrounding context agrees most:
the context score counts offsets k in {-n..-1, 1..n} where the hypothesis
token at i+k equals the reference token at j+k (out-of-range offsets count
zero). Ties go to the candidate with minimal |i - j|, then to the smallest
reference position. Greedy order dependence is accepted; the procedure is
deterministic.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from typing import Sequence


@dataclass(frozen=True)
class Alignment:
    """Matched (hyp_pos, ref_pos) pairs, 1-based, each side used at most once."""

    pairs: tuple[tuple[int, int], ...]

    @property
    def aligned_num(self) -> int:
        return len(self.pairs)


def _context_score(hyp: Sequence[str], ref: Sequence[str], i: int, j: int, n: int) -> int:
    # i, j are 0-based here
    score = 0
    for k in range(-n, n + 1):
        if k == 0:
            continue
        hi, rj = i + k, j + k
        if 0 <= hi < len(hyp) and 0 <= rj < len(ref) and hyp[hi] == ref[rj]:
            score += 1
    return score


def align(hyp: Sequence[str], ref: Sequence[str], n: int) -> Alignment:
    """Greedily align identical tokens using an n-token context window.

    Every hypothesis token that still has an unconsumed identical reference
    token gets matched. n must be >= 1.
    """
    if n < 1:
        raise ValueError(f"context window n must be >= 1, got {n}")

    positions = defaultdict(list)  # token -> 0-based ref positions, ascending
    for j, tok in enumerate(ref):
        positions[tok].append(j)
    consumed = [False] * len(ref)

    pairs: list[tuple[int, int]] = []
    for i, tok in enumerate(hyp):
        candidates = [j for j in positions.get(tok, ()) if not consumed[j]]
        if not candidates:
            continue
        best = min(
            candidates,
            key=lambda j: (-_context_score(hyp, ref, i, j, n), abs(i - j), j),
        )
        consumed[best] = True
        pairs.append((i + 1, best + 1))
    return Alignment(tuple(pairs))
