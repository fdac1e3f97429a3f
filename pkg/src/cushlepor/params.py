"""Metric parameter set, built-in presets, and the flat preset file format.

A parameter point has six values: alpha (recall weight), beta (precision
weight), n (context window radius used by the aligner), and the three
harmonic weights for the length penalty, the position-difference penalty
and the precision/recall factor.

Built-in presets cover the published word-level defaults for the WMT13
language pairs plus the WMT21-submission values tuned against LaBSE
similarity and pSQM ratings.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path

from .errors import PresetLookupError

FLAVORS = ("default", "cushlepor_lm", "cushlepor_psqm")

PARAM_KEYS = ("alpha", "beta", "n", "weight_elp", "weight_pos", "weight_pr")


@dataclass(frozen=True)
class HLeporParams:
    alpha: float
    beta: float
    n: int
    weight_elp: float
    weight_pos: float
    weight_pr: float

    def __post_init__(self):
        for name in ("alpha", "beta", "weight_elp", "weight_pos", "weight_pr"):
            value = getattr(self, name)
            if not (isinstance(value, (int, float)) and math.isfinite(value) and value > 0):
                raise ValueError(f"{name} must be a finite positive real, got {value!r}")
        if not isinstance(self.n, int) or isinstance(self.n, bool) or not 1 <= self.n <= 10:
            raise ValueError(f"n must be an integer in [1, 10], got {self.n!r}")

    def as_dict(self) -> dict[str, float | int]:
        return {k: getattr(self, k) for k in PARAM_KEYS}

    def as_tuple(self) -> tuple[float, float, int, float, float, float]:
        return (self.alpha, self.beta, self.n, self.weight_elp, self.weight_pos, self.weight_pr)


_MANUAL = "manually tuned (WMT13)"
_LM = "LaBSE-tuned (WMT21 submission)"
_PSQM = "pSQM-tuned (WMT21 submission)"

# (language_pair, flavor) -> (params, provenance tag)
_PRESETS: dict[tuple[str, str], tuple[HLeporParams, str]] = {}


def _register(pairs: str, flavor: str, values: tuple, provenance: str) -> None:
    params = HLeporParams(*values)
    for pair in pairs.split():
        _PRESETS[(pair, flavor)] = (params, provenance)


_register("en-cs en-ru", "default", (9.0, 1.0, 2, 2.0, 1.0, 7.0), _MANUAL)
_register("en-de", "default", (9.0, 1.0, 2, 3.0, 7.0, 1.0), _MANUAL)
_register("cs-en es-en ru-en", "default", (1.0, 9.0, 2, 2.0, 1.0, 7.0), _MANUAL)
_register("de-en fr-en en-es en-fr", "default", (9.0, 1.0, 2, 2.0, 1.0, 3.0), _MANUAL)
_register("zh-en", "cushlepor_lm", (2.85, 4.73, 1, 1.01, 11.13, 4.62), _LM)
_register("zh-en", "cushlepor_psqm", (9.09, 3.55, 3, 1.01, 14.98, 1.57), _PSQM)
_register("en-de", "cushlepor_lm", (2.95, 2.68, 2, 1.0, 11.79, 1.87), _LM)
_register("en-de", "cushlepor_psqm", (1.13, 1.71, 2, 1.06, 11.90, 1.01), _PSQM)


def preset(language_pair: str, flavor: str = "default") -> HLeporParams:
    """Look up a built-in parameter set by language pair and flavor."""
    key = (language_pair.lower(), flavor)
    if key not in _PRESETS:
        available = ", ".join(f"{p}:{f}" for p, f in sorted(_PRESETS))
        raise PresetLookupError(
            f"no preset for pair={language_pair!r} flavor={flavor!r}; "
            f"available: {available}"
        )
    return _PRESETS[key][0]


def available_presets() -> list[tuple[str, str, HLeporParams, str]]:
    """All built-ins as (pair, flavor, params, provenance), sorted."""
    return [(p, f, v[0], v[1]) for (p, f), v in sorted(_PRESETS.items())]


def preset_count() -> int:
    return len(_PRESETS)


# --- flat key-value parameter files -------------------------------------
#
# One `key = value` pair per line, '#' starts a comment. The six parameter
# keys are required on load; any other keys (objective, seed, ...) ride
# along as provenance and are ignored by the loader.

def parse_kv_text(text: str) -> dict[str, str]:
    entries: dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"line {lineno}: expected 'key = value', got {raw!r}")
        key, value = line.split("=", 1)
        entries[key.strip()] = value.strip()
    return entries


def load_params_file(path: str | Path) -> HLeporParams:
    """Read a preset/params file back into an HLeporParams."""
    entries = parse_kv_text(Path(path).read_text(encoding="utf-8"))
    missing = [k for k in PARAM_KEYS if k not in entries]
    if missing:
        raise ValueError(f"{path}: missing parameter keys: {', '.join(missing)}")
    return HLeporParams(
        alpha=float(entries["alpha"]),
        beta=float(entries["beta"]),
        n=int(entries["n"]),
        weight_elp=float(entries["weight_elp"]),
        weight_pos=float(entries["weight_pos"]),
        weight_pr=float(entries["weight_pr"]),
    )


def format_params_file(params: HLeporParams, provenance: dict[str, object] | None = None) -> str:
    """Serialize params (plus optional provenance keys) to flat key-value text.

    Reals use repr() so they round-trip exactly.
    """
    lines = [f"{k} = {getattr(params, k)!r}" for k in PARAM_KEYS]
    for key, value in (provenance or {}).items():
        lines.append(f"{key} = {value!r}" if isinstance(value, float) else f"{key} = {value}")
    return "\n".join(lines) + "\n"


def write_params_file(path: str | Path, params: HLeporParams,
                      provenance: dict[str, object] | None = None) -> None:
    path = Path(path)
    if not path.parent.exists():
        raise FileNotFoundError(f"output directory does not exist: {path.parent}")
    path.write_text(format_params_file(params, provenance), encoding="utf-8")
