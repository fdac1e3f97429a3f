"""Agreement statistics and gold-score normalization."""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Sequence

from .errors import UndefinedCorrelationError

logger = logging.getLogger(__name__)

HISTOGRAM_BINS = 20


@dataclass(frozen=True)
class GoldScale:
    """Affine range of a gold column, used to map it onto [0, 1]."""

    name: str
    min: float
    max: float

    def __post_init__(self):
        if not self.max > self.min:
            raise ValueError(f"gold scale needs max > min, got [{self.min}, {self.max}]")


PSQM_SCALE = GoldScale("psqm", 0.0, 6.0)
UNIT_SCALE = GoldScale("unit", 0.0, 1.0)

KNOWN_SCALES = {s.name: s for s in (PSQM_SCALE, UNIT_SCALE)}


def normalize_gold(value: float, scale: GoldScale) -> float:
    """Min-max normalize onto [0, 1]; out-of-range values clamp (warned)."""
    x = (value - scale.min) / (scale.max - scale.min)
    if x < 0.0 or x > 1.0:
        logger.warning("gold value %s outside scale [%s, %s]; clamped",
                       value, scale.min, scale.max)
        return min(1.0, max(0.0, x))
    return x


def rmse(metric_scores: Sequence[float], gold_scores: Sequence[float]) -> float:
    """Root mean square error between two equal-length sequences."""
    if len(metric_scores) != len(gold_scores):
        raise ValueError(
            f"length mismatch: {len(metric_scores)} vs {len(gold_scores)}"
        )
    if not metric_scores:
        raise ValueError("rmse of empty sequences is undefined")
    total = 0.0
    for a, b in zip(metric_scores, gold_scores):
        d = a - b
        total += d * d
    return math.sqrt(total / len(metric_scores))


def pearson(x: Sequence[float], y: Sequence[float]) -> float:
    """Sample Pearson correlation coefficient."""
    if len(x) != len(y):
        raise ValueError(f"length mismatch: {len(x)} vs {len(y)}")
    if len(x) < 2:
        raise ValueError("pearson needs at least 2 points")
    mx = sum(x) / len(x)
    my = sum(y) / len(y)
    num = 0.0
    dx2 = 0.0
    dy2 = 0.0
    for a, b in zip(x, y):
        da = a - mx
        db = b - my
        num += da * db
        dx2 += da * da
        dy2 += db * db
    if dx2 == 0.0 or dy2 == 0.0:
        raise UndefinedCorrelationError("zero variance input, correlation undefined")
    return num / math.sqrt(dx2 * dy2)


def histogram20(values: Sequence[float]) -> list[int]:
    """Fixed 20-bin histogram over [0, 1]; bins are left-closed, the last
    bin also includes 1.0. Values are expected in [0, 1]."""
    counts = [0] * HISTOGRAM_BINS
    for v in values:
        if not 0.0 <= v <= 1.0:
            raise ValueError(f"histogram value outside [0, 1]: {v}")
        counts[min(int(v * HISTOGRAM_BINS), HISTOGRAM_BINS - 1)] += 1
    return counts
