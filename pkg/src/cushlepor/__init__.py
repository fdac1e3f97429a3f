"""hLEPOR segment scoring and cushLEPOR parameter tuning."""

__version__ = "0.1.0"

from .align import Alignment, align
from .corpus import Corpus, SegmentRecord, ingest, split_corpus, write_corpus
from .errors import (
    CushleporError,
    DataError,
    DegenerateInputError,
    IngestError,
    PresetLookupError,
    UndefinedCorrelationError,
)
from .metric import (
    FactorBreakdown,
    factors_from_stats,
    hlepor,
    hlepor_tokens,
    hpr,
    length_penalty,
    npd,
    npos_penal,
)
from .params import (
    HLeporParams,
    available_presets,
    load_params_file,
    preset,
    preset_count,
    write_params_file,
)
from .scoring import CorpusScores, score_corpus
from .stats import (
    GoldScale,
    PSQM_SCALE,
    UNIT_SCALE,
    histogram20,
    normalize_gold,
    pearson,
    rmse,
)
from .tokenizer import split_pretokenized, tokenize
from .tuning import (
    SearchSpace,
    TpeConfig,
    Trial,
    TuneResult,
    TuningObjective,
    export_params,
    objective_rmse,
    tune_random,
    tune_tpe,
    write_trial_log,
)

__all__ = [
    "__version__",
    "Alignment", "align",
    "Corpus", "SegmentRecord", "ingest", "split_corpus", "write_corpus",
    "CushleporError", "DataError", "DegenerateInputError", "IngestError",
    "PresetLookupError", "UndefinedCorrelationError",
    "FactorBreakdown", "factors_from_stats", "hlepor", "hlepor_tokens",
    "hpr", "length_penalty", "npd", "npos_penal",
    "HLeporParams", "available_presets", "load_params_file", "preset",
    "preset_count", "write_params_file",
    "CorpusScores", "score_corpus",
    "GoldScale", "PSQM_SCALE", "UNIT_SCALE", "histogram20",
    "normalize_gold", "pearson", "rmse",
    "split_pretokenized", "tokenize",
    "SearchSpace", "TpeConfig", "Trial", "TuneResult", "TuningObjective",
    "export_params", "objective_rmse", "tune_random", "tune_tpe",
    "write_trial_log",
]
