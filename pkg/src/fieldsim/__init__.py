"""Simulated linguist-speaker elicitation for morphological paradigms.

The package models a fieldwork setting as a budgeted active-learning
loop: a linguist selects paradigm cells to elicit, a speaker oracle
answers (and judges suggested forms), and an inflection learner is
retrained after every cycle. Runs are scored by accuracy on the
untouched remainder of the dataset and by a normalised efficiency
score that charges one penalty point per unassisted query, per wrong
suggestion, and per remaining error.
"""

from fieldsim.corpus import (
    CellId,
    DataConflictError,
    LanguageStats,
    Lexicon,
    ParadigmTable,
    ParseError,
    Pool,
    TagSet,
    Triplet,
    build_lexicon,
    init_pool,
    load_unimorph,
    parse_unimorph,
    triplets_to_tsv,
)
from fieldsim.learner import (
    AffixRuleLearner,
    InflectionQuery,
    Prediction,
    Rule,
    extract_rules,
)
from fieldsim.metrics import accuracy, nes, suggestion_breakdown
from fieldsim.oracle import (
    Oracle,
    OracleQuery,
    OracleResponse,
    Outcome,
    PenaltyLedger,
    ProtocolError,
)
from fieldsim.predictability import (
    LEMMA_TAGS,
    Heatmap,
    PredictivePowerWeights,
    ReinflectionExample,
    SplitError,
    build_reinflection_dataset,
    compute_heatmap,
    predictive_power,
    split_45_45_10,
)
from fieldsim.runner import (
    CycleRecord,
    ExperimentConfig,
    Report,
    evaluate_on_pool,
    run_experiment,
)
from fieldsim.strategies import (
    Batch,
    BatchItem,
    PoolExhausted,
    StrategyConfig,
    gated_batch,
    mean_confidence,
    paradigm_first_batch,
    ranked_batch,
    uniform_sample,
    weighted_batch,
)
from fieldsim.synthlang import SynthConfig, SynthSlot, generate

__version__ = "0.1.0"

__all__ = [
    "AffixRuleLearner",
    "Batch",
    "BatchItem",
    "CellId",
    "CycleRecord",
    "DataConflictError",
    "ExperimentConfig",
    "Heatmap",
    "InflectionQuery",
    "LanguageStats",
    "LEMMA_TAGS",
    "Lexicon",
    "Oracle",
    "OracleQuery",
    "OracleResponse",
    "Outcome",
    "ParadigmTable",
    "ParseError",
    "PenaltyLedger",
    "Pool",
    "PoolExhausted",
    "Prediction",
    "PredictivePowerWeights",
    "ProtocolError",
    "ReinflectionExample",
    "Report",
    "Rule",
    "SplitError",
    "StrategyConfig",
    "SynthConfig",
    "SynthSlot",
    "TagSet",
    "Triplet",
    "accuracy",
    "build_lexicon",
    "build_reinflection_dataset",
    "compute_heatmap",
    "evaluate_on_pool",
    "extract_rules",
    "gated_batch",
    "generate",
    "init_pool",
    "load_unimorph",
    "mean_confidence",
    "nes",
    "paradigm_first_batch",
    "parse_unimorph",
    "predictive_power",
    "ranked_batch",
    "run_experiment",
    "split_45_45_10",
    "suggestion_breakdown",
    "triplets_to_tsv",
    "uniform_sample",
    "weighted_batch",
]
