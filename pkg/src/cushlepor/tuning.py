"""Parameter tuning: random search and a Tree-structured Parzen Estimator.

Both tuners minimize a callable objective(params) -> float over a bounded
SearchSpace. For corpus tuning the objective is the RMSE between metric
scores and a normalized gold column (see TuningObjective); any other
callable works too, which is how the synthetic benchmark objectives plug
in.

The TPE loop is strictly sequential: after a uniform warmup it splits the
completed trials into a good quantile and the rest, fits one-dimensional
Parzen mixtures (truncated Gaussian kernels plus a uniform prior component)
to each group, draws candidates from the good densities and evaluates the
candidate with the highest good/bad density ratio. Fixed seed gives a
bit-identical trial sequence.
"""

from __future__ import annotations

import json
import math
import time
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Sequence

import numpy as np

from .corpus import Corpus
from .errors import DataError, DegenerateInputError
from .metric import npd as npd_of
from .metric import score_from_stats
from .align import align
from .params import HLeporParams, write_params_file
from .stats import GoldScale, normalize_gold, rmse
from .tokenizer import tokenize

_REAL_DIMS = ("alpha", "beta", "weight_elp", "weight_pos", "weight_pr")
_SQRT_2PI = math.sqrt(2.0 * math.pi)


@dataclass(frozen=True)
class SearchSpace:
    """Per-parameter bounds the tuners draw from."""

    alpha: tuple[float, float] = (1.0, 15.0)
    beta: tuple[float, float] = (1.0, 15.0)
    n: tuple[int, ...] = (1, 2, 3, 4)
    weight_elp: tuple[float, float] = (1.0, 15.0)
    weight_pos: tuple[float, float] = (1.0, 15.0)
    weight_pr: tuple[float, float] = (1.0, 15.0)

    def __post_init__(self):
        for name in _REAL_DIMS:
            low, high = getattr(self, name)
            if not (math.isfinite(low) and math.isfinite(high) and 0 < low < high):
                raise ValueError(f"{name} bounds must satisfy 0 < low < high, got ({low}, {high})")
        values = tuple(sorted(set(self.n)))
        if not values:
            raise ValueError("n value set must be non-empty")
        for v in values:
            if not isinstance(v, int) or not 1 <= v <= 10:
                raise ValueError(f"n values must be integers in [1, 10], got {v!r}")
        object.__setattr__(self, "n", values)

    def contains(self, params: HLeporParams) -> bool:
        for name in _REAL_DIMS:
            low, high = getattr(self, name)
            if not low <= getattr(params, name) <= high:
                return False
        return params.n in self.n


@dataclass(frozen=True)
class Trial:
    index: int
    params: HLeporParams
    objective: float
    wall_time: float


@dataclass(frozen=True)
class TuneResult:
    best: Trial
    trials: tuple[Trial, ...]


@dataclass(frozen=True)
class TpeConfig:
    budget: int = 300
    n_startup: int = 20
    gamma: float = 0.25
    n_candidates: int = 24
    seed: int | None = None
    prior_weight: float = 1.0

    def __post_init__(self):
        if self.budget < 1:
            raise ValueError(f"budget must be >= 1, got {self.budget}")
        if self.n_startup < 0:
            raise ValueError(f"n_startup must be >= 0, got {self.n_startup}")
        if not 0.0 < self.gamma < 1.0:
            raise ValueError(f"gamma must be in (0, 1), got {self.gamma}")
        if self.n_candidates < 1:
            raise ValueError(f"n_candidates must be >= 1, got {self.n_candidates}")
        if not self.prior_weight > 0:
            raise ValueError(f"prior_weight must be > 0, got {self.prior_weight}")


class TuningObjective:
    """RMSE of corpus metric scores against a normalized gold column.

    Tokenization happens once; alignment statistics are cached per context
    window n, so re-evaluating with new real-valued parameters is cheap.
    Scores go through the same arithmetic as hlepor(), bit for bit.
    """

    def __init__(self, corpus: Corpus, gold_column: str, scale: GoldScale,
                 tokenizer: Callable[[str], list[str]] = tokenize):
        if len(corpus) == 0:
            raise DataError("cannot tune on an empty corpus")
        missing = [seg.key() for seg in corpus if gold_column not in seg.gold]
        if missing:
            raise DataError(
                f"gold column {gold_column!r} missing on {len(missing)} of "
                f"{len(corpus)} segments (first: {missing[0]})"
            )
        self.gold_column = gold_column
        self.scale = scale
        self._gold = [normalize_gold(seg.gold[gold_column], scale) for seg in corpus]
        self._tokens: list[tuple[list[str], list[str]]] = []
        for seg in corpus:
            hyp_tokens, ref_tokens = tokenizer(seg.hypothesis), tokenizer(seg.reference)
            if not hyp_tokens or not ref_tokens:
                side = "hypothesis" if not hyp_tokens else "reference"
                raise DegenerateInputError(
                    f"segment (seg_id={seg.seg_id!r}, system_id={seg.system_id!r}): "
                    f"{side} is empty after tokenization"
                )
            self._tokens.append((hyp_tokens, ref_tokens))
        # n -> [(len_hyp, len_ref, aligned_num, npd)]
        self._stats: dict[int, list[tuple[int, int, int, float]]] = {}

    def _stats_for(self, n: int) -> list[tuple[int, int, int, float]]:
        if n not in self._stats:
            stats = []
            for hyp_tokens, ref_tokens in self._tokens:
                alignment = align(hyp_tokens, ref_tokens, n)
                stats.append((
                    len(hyp_tokens), len(ref_tokens), alignment.aligned_num,
                    npd_of(alignment, len(hyp_tokens)),
                ))
            self._stats[n] = stats
        return self._stats[n]

    def scores(self, params: HLeporParams) -> list[float]:
        return [score_from_stats(lh, lr, a, d, params)
                for lh, lr, a, d in self._stats_for(params.n)]

    def __call__(self, params: HLeporParams) -> float:
        return rmse(self.scores(params), self._gold)


def objective_rmse(corpus: Corpus, gold_column: str, scale: GoldScale,
                   params: HLeporParams) -> float:
    """One-shot objective evaluation (see TuningObjective for loops)."""
    return TuningObjective(corpus, gold_column, scale)(params)


def sample_uniform(space: SearchSpace, rng: np.random.Generator) -> HLeporParams:
    """One i.i.d. uniform draw; fixed dimension order keeps seeds replayable."""
    alpha = rng.uniform(*space.alpha)
    beta = rng.uniform(*space.beta)
    n = space.n[int(rng.integers(0, len(space.n)))]
    weight_elp = rng.uniform(*space.weight_elp)
    weight_pos = rng.uniform(*space.weight_pos)
    weight_pr = rng.uniform(*space.weight_pr)
    return HLeporParams(alpha, beta, n, weight_elp, weight_pos, weight_pr)


def _run_trial(objective, params: HLeporParams, index: int) -> Trial:
    start = time.perf_counter()
    value = float(objective(params))
    wall = time.perf_counter() - start
    if not math.isfinite(value):
        raise ValueError(f"objective returned non-finite value {value!r} at trial {index}")
    return Trial(index=index, params=params, objective=value, wall_time=wall)


def tune_random(objective: Callable[[HLeporParams], float], space: SearchSpace,
                budget: int, seed: int | None = None) -> TuneResult:
    """Uniform random search; argmin objective over `budget` draws."""
    if budget < 1:
        raise ValueError(f"budget must be >= 1, got {budget}")
    rng = np.random.default_rng(seed)
    trials = [_run_trial(objective, sample_uniform(space, rng), index)
              for index in range(budget)]
    best = min(trials, key=lambda t: (t.objective, t.index))
    return TuneResult(best=best, trials=tuple(trials))


class _ParzenReal:
    """1-D mixture: truncated Gaussians at observations + uniform prior.

    Bandwidth per observation is the larger gap to its sorted neighbors,
    floored at 1% of the range; a lone observation gets the full range.
    """

    def __init__(self, obs: Sequence[float], low: float, high: float, prior_weight: float):
        self.low = low
        self.high = high
        self.range = high - low
        self.prior_weight = prior_weight
        self.mu = np.sort(np.asarray(obs, dtype=float))
        m = len(self.mu)
        if m == 0:
            self.sigma = np.empty(0)
            self.trunc = np.empty(0)
        else:
            if m == 1:
                bw = np.array([self.range])
            else:
                gaps = np.diff(self.mu)
                left = np.concatenate(([0.0], gaps))
                right = np.concatenate((gaps, [0.0]))
                bw = np.maximum(left, right)
            self.sigma = np.maximum(bw, 0.01 * self.range)
            self.trunc = np.array([
                _norm_cdf((high - mu) / s) - _norm_cdf((low - mu) / s)
                for mu, s in zip(self.mu, self.sigma)
            ])
        self.total_weight = prior_weight + m

    def logpdf(self, xs: np.ndarray) -> np.ndarray:
        density = np.full(xs.shape, self.prior_weight / self.range)
        if len(self.mu):
            z = (xs[:, None] - self.mu[None, :]) / self.sigma[None, :]
            kernels = np.exp(-0.5 * z * z) / (self.sigma[None, :] * _SQRT_2PI * self.trunc[None, :])
            density = density + kernels.sum(axis=1)
        return np.log(density / self.total_weight)

    def sample(self, rng: np.random.Generator, size: int) -> np.ndarray:
        weights = np.concatenate(([self.prior_weight], np.ones(len(self.mu))))
        components = rng.choice(len(weights), size=size, p=weights / weights.sum())
        out = np.empty(size)
        for i, comp in enumerate(components):
            if comp == 0:
                out[i] = rng.uniform(self.low, self.high)
            else:
                mu, sigma = self.mu[comp - 1], self.sigma[comp - 1]
                while True:
                    x = mu + sigma * rng.standard_normal()
                    if self.low <= x <= self.high:
                        out[i] = x
                        break
        return out


class _ParzenCategorical:
    """Smoothed categorical over the n value set."""

    def __init__(self, obs_indices: Sequence[int], k: int, prior_weight: float):
        weights = np.full(k, prior_weight / k)
        for idx in obs_indices:
            weights[idx] += 1.0
        self.probs = weights / weights.sum()

    def logpdf(self, indices: np.ndarray) -> np.ndarray:
        return np.log(self.probs[indices])

    def sample(self, rng: np.random.Generator, size: int) -> np.ndarray:
        return rng.choice(len(self.probs), size=size, p=self.probs)


def _norm_cdf(z: float) -> float:
    return 0.5 * (1.0 + math.erf(z / math.sqrt(2.0)))


def _suggest_tpe(trials: list[Trial], space: SearchSpace, config: TpeConfig,
                 rng: np.random.Generator) -> HLeporParams:
    order = sorted(range(len(trials)), key=lambda i: (trials[i].objective, i))
    n_good = max(1, math.ceil(config.gamma * len(trials)))
    good = [trials[i].params for i in order[:n_good]]
    bad = [trials[i].params for i in order[n_good:]]

    k = config.n_candidates
    acquisition = np.zeros(k)
    drawn: dict[str, np.ndarray] = {}

    for name in ("alpha", "beta", "n", "weight_elp", "weight_pos", "weight_pr"):
        if name == "n":
            index_of = {v: i for i, v in enumerate(space.n)}
            l_density = _ParzenCategorical([index_of[p.n] for p in good],
                                           len(space.n), config.prior_weight)
            g_density = _ParzenCategorical([index_of[p.n] for p in bad],
                                           len(space.n), config.prior_weight)
        else:
            low, high = getattr(space, name)
            l_density = _ParzenReal([getattr(p, name) for p in good],
                                    low, high, config.prior_weight)
            g_density = _ParzenReal([getattr(p, name) for p in bad],
                                    low, high, config.prior_weight)
        candidates = l_density.sample(rng, k)
        acquisition += l_density.logpdf(candidates) - g_density.logpdf(candidates)
        drawn[name] = candidates

    best = int(np.argmax(acquisition))
    return HLeporParams(
        alpha=float(drawn["alpha"][best]),
        beta=float(drawn["beta"][best]),
        n=int(space.n[int(drawn["n"][best])]),
        weight_elp=float(drawn["weight_elp"][best]),
        weight_pos=float(drawn["weight_pos"][best]),
        weight_pr=float(drawn["weight_pr"][best]),
    )


def tune_tpe(objective: Callable[[HLeporParams], float], space: SearchSpace,
             config: TpeConfig) -> TuneResult:
    """TPE search: uniform warmup, then sequential model-guided trials.

    With budget <= n_startup this reduces exactly to tune_random under the
    same seed.
    """
    rng = np.random.default_rng(config.seed)
    trials: list[Trial] = []
    for index in range(config.budget):
        if index < config.n_startup:
            params = sample_uniform(space, rng)
        else:
            params = _suggest_tpe(trials, space, config, rng)
        trials.append(_run_trial(objective, params, index))
    best = min(trials, key=lambda t: (t.objective, t.index))
    return TuneResult(best=best, trials=tuple(trials))


def export_params(trial: Trial, out: str | Path, *,
                  seed: int | None = None, budget: int | None = None,
                  gold_column: str | None = None,
                  corpus_sha256: str | None = None) -> None:
    """Persist a trial's parameters as a re-importable preset file."""
    provenance: dict[str, object] = {"objective": float(trial.objective)}
    for key, value in (("seed", seed), ("budget", budget),
                       ("gold_column", gold_column), ("corpus_sha256", corpus_sha256)):
        if value is not None:
            provenance[key] = value
    write_params_file(out, trial.params, provenance)


def write_trial_log(trials: Sequence[Trial], path: str | Path) -> None:
    """JSONL trial log: one line per trial with index, params, objective.

    Wall time stays on the in-memory Trial only; the written log must be
    byte-identical across reruns with the same seed.
    """
    path = Path(path)
    with path.open("w", encoding="utf-8") as fh:
        for t in trials:
            fh.write(json.dumps({
                "index": t.index,
                "params": t.params.as_dict(),
                "objective": t.objective,
            }, ensure_ascii=False) + "\n")
