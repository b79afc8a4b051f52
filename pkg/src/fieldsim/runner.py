"""The budgeted elicitation loop.

A run walks a fixed number of cycles. Each cycle selects a batch from
the pool with the configured strategy, puts every batch cell to the
oracle (recording penalties), moves the answers into the labelled set,
and retrains the learner from scratch on a fresh 90/10 train/dev split
of everything labelled so far. Cycle 1 is always suggestion-free:
uniform for the confidence strategies, whole paradigms for the
paradigm-first strategy, which then computes its inter-predictability
weights exactly once before cycle 2. After the last cycle the final
model is scored on every cell still in the pool; those errors are the
p3 penalty.

Strategies and the learner never see gold forms. Everything the model
learns arrived through an oracle answer, and the only reads of the
lexicon outside the oracle are paradigm shapes (which cells exist) and
the final evaluation.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from fieldsim.corpus import CellId, Lexicon, ParadigmTable, Pool, TagSet, init_pool
from fieldsim.learner import AffixRuleLearner, InflectionQuery
from fieldsim.metrics import accuracy as accuracy_metric
from fieldsim.metrics import nes as nes_metric
from fieldsim.oracle import Oracle, OracleQuery, PenaltyLedger
from fieldsim.predictability import (
    SplitError,
    build_reinflection_dataset,
    compute_heatmap,
    predictive_power,
    split_45_45_10,
)
from fieldsim.strategies import (
    CONFIDENCE_GATED,
    CONFIDENCE_RANKED,
    PARADIGM_FIRST_WEIGHTED,
    UNIFORM,
    Batch,
    StrategyConfig,
    gated_batch,
    paradigm_first_batch,
    query_for,
    ranked_batch,
    uniform_sample,
    weighted_batch,
)

LabeledPair = tuple[CellId, str]


@dataclass
class ExperimentConfig:
    """One run: a language label, a strategy, and the learner knobs."""

    language: str
    strategy: StrategyConfig
    cycles: int = 5
    learner_params: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.cycles < 1:
            raise ValueError(f"cycles must be >= 1, got {self.cycles}")

    @property
    def batch_size(self) -> int:
        return self.strategy.batch_size

    @property
    def seed(self) -> int:
        return self.strategy.seed

    def to_json_dict(self) -> dict:
        return {
            "language": self.language,
            "strategy": self.strategy.kind,
            "batch_size": self.strategy.batch_size,
            "ranked_suggest_fraction": self.strategy.ranked_suggest_fraction,
            "seed": self.strategy.seed,
            "cycles": self.cycles,
            "learner": {k: self.learner_params[k] for k in sorted(self.learner_params)},
        }


@dataclass(frozen=True)
class CycleRecord:
    cycle: int
    queried: int
    p1: int
    p2: int
    correct_suggestions: int
    pool_accuracy: float | None


@dataclass(frozen=True)
class PoolEvaluation:
    accuracy: float
    errors: int
    per_tagset: dict[TagSet, float]


@dataclass
class Report:
    """Everything a finished run produced, JSON-serializable."""

    config: dict
    n_total: int
    cycles: list[CycleRecord]
    p1: int
    p2: int
    p3: int
    correct_suggestions: int
    final_test_size: int
    final_accuracy: float
    nes: float
    exhausted: bool

    @property
    def total_queries(self) -> int:
        return self.p1 + self.p2 + self.correct_suggestions

    def to_json_dict(self) -> dict:
        return {
            "config": self.config,
            "n_total": self.n_total,
            "exhausted": self.exhausted,
            "cycles": [
                {
                    "cycle": rec.cycle,
                    "queried": rec.queried,
                    "p1": rec.p1,
                    "p2": rec.p2,
                    "correct_suggestions": rec.correct_suggestions,
                    "pool_accuracy": rec.pool_accuracy,
                }
                for rec in self.cycles
            ],
            "totals": {
                "queries": self.total_queries,
                "p1": self.p1,
                "p2": self.p2,
                "correct_suggestions": self.correct_suggestions,
            },
            "final": {
                "test_size": self.final_test_size,
                "accuracy": self.final_accuracy,
                "p3": self.p3,
                "nes": self.nes,
            },
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), indent=2, ensure_ascii=False) + "\n"


def split_train_dev(
    labeled: Sequence[LabeledPair], seed: int, cycle: int
) -> tuple[list[LabeledPair], list[LabeledPair]]:
    """Fresh 90/10 split of the labelled set, redrawn every cycle.

    The split generator mixes the run seed with the cycle index so
    membership changes between cycles but never between reruns. At
    least one pair always lands in train; tiny sets get an empty dev.
    """
    if not labeled:
        raise ValueError("nothing labelled yet")
    rng = np.random.default_rng(seed ^ cycle)
    order = rng.permutation(len(labeled))
    n_train = max(1, 9 * len(labeled) // 10)
    train = [labeled[i] for i in order[:n_train]]
    dev = [labeled[i] for i in order[n_train:]]
    return train, dev


def _training_data(
    pairs: Sequence[LabeledPair], lemmas: Sequence[str]
) -> tuple[list[InflectionQuery], list[str]]:
    X = [
        InflectionQuery(lemma=lemmas[cell.lemma_index], target_tags=cell.tags)
        for cell, _form in pairs
    ]
    y = [form for _cell, form in pairs]
    return X, y


def _fit_cycle_model(
    config: ExperimentConfig,
    labeled: Sequence[LabeledPair],
    lemmas: Sequence[str],
    cycle: int,
) -> AffixRuleLearner:
    train, dev = split_train_dev(labeled, config.seed, cycle)
    X, y = _training_data(train, lemmas)
    dev_X, dev_y = _training_data(dev, lemmas)
    model = AffixRuleLearner(**config.learner_params)
    return model.fit(X, y, dev=list(zip(dev_X, dev_y)))


def _complete_tables(
    labeled: Sequence[LabeledPair], lexicon: Lexicon
) -> list[ParadigmTable]:
    """Labelled paradigms with no missing cell, in collection order."""
    by_lemma: dict[int, dict[TagSet, str]] = {}
    for cell, form in labeled:
        by_lemma.setdefault(cell.lemma_index, {})[cell.tags] = form
    tables = []
    for lemma_index, cells in by_lemma.items():
        gold_table = lexicon.tables[lemma_index]
        if len(cells) == gold_table.size:
            tables.append(ParadigmTable(gold_table.lemma, cells))
    return tables


def _paradigm_weights(
    config: ExperimentConfig, labeled: Sequence[LabeledPair], lexicon: Lexicon
) -> dict[TagSet, float]:
    """Inter-predictability sampling weights from cycle-1 paradigms."""
    dataset = build_reinflection_dataset(_complete_tables(labeled, lexicon))
    train, dev, test = split_45_45_10(
        dataset.examples, np.random.default_rng(config.seed)
    )
    model = AffixRuleLearner(**config.learner_params)
    model.fit(
        [ex.query() for ex in train],
        [ex.target_form for ex in train],
        dev=[(ex.query(), ex.target_form) for ex in dev],
    )
    heat = compute_heatmap(model, test)
    return predictive_power(heat).sampling_weights()


def _select_batch(
    config: ExperimentConfig,
    cycle: int,
    pool: Pool,
    lexicon: Lexicon,
    model: AffixRuleLearner | None,
    weights: dict[TagSet, float] | None,
    rng: np.random.Generator,
) -> Batch:
    kind = config.strategy.kind
    k = config.strategy.batch_size
    if cycle == 1:
        if kind == PARADIGM_FIRST_WEIGHTED:
            return paradigm_first_batch(lexicon, pool, k, rng)
        return uniform_sample(pool, k, rng)
    if kind == UNIFORM:
        return uniform_sample(pool, k, rng)
    if kind == CONFIDENCE_GATED:
        return gated_batch(pool, k, model, rng)
    if kind == CONFIDENCE_RANKED:
        return ranked_batch(pool, k, model, config.strategy.ranked_suggest_fraction)
    return weighted_batch(pool, k, weights, model, rng)


def evaluate_on_pool(
    model: AffixRuleLearner, pool: Pool, lexicon: Lexicon
) -> PoolEvaluation:
    """Exact-match accuracy of the model over the remaining pool."""
    cells = pool.ordered()
    if not cells:
        raise ValueError("cannot evaluate on an empty pool")
    predicted = model.predict([query_for(pool, cell) for cell in cells])
    errors = 0
    per_tagset: dict[TagSet, list[int]] = {}
    for cell, form in zip(cells, predicted):
        good = form == lexicon.gold(cell)
        errors += 0 if good else 1
        bucket = per_tagset.setdefault(cell.tags, [0, 0])
        bucket[0] += 1 if good else 0
        bucket[1] += 1
    return PoolEvaluation(
        accuracy=accuracy_metric(len(cells) - errors, len(cells)),
        errors=errors,
        per_tagset={
            tags: accuracy_metric(ok, total) if total else 0.0
            for tags, (ok, total) in per_tagset.items()
        },
    )


def run_experiment(config: ExperimentConfig, lexicon: Lexicon) -> Report:
    """Run the full elicitation loop and score it.

    Deterministic for a given (config, lexicon): one generator seeded
    with the run seed drives all sampling, in cycle order.
    """
    rng = np.random.default_rng(config.seed)
    pool = init_pool(lexicon)
    n_total = len(pool)
    oracle = Oracle(lexicon)
    ledger = PenaltyLedger()
    lemmas = pool.lemmas
    labeled: list[LabeledPair] = []
    model: AffixRuleLearner | None = None
    weights: dict[TagSet, float] | None = None
    records: list[CycleRecord] = []
    evaluation: PoolEvaluation | None = None

    for cycle in range(1, config.cycles + 1):
        if len(pool) == 0:
            break
        batch = _select_batch(config, cycle, pool, lexicon, model, weights, rng)
        for item in batch.items:
            suggestion = item.suggestion.form if item.suggestion else None
            response = oracle.answer(OracleQuery(item.cell, suggestion))
            ledger.record(cycle, response.outcome)
            labeled.append((item.cell, response.gold))
            pool.remove(item.cell)
        model = _fit_cycle_model(config, labeled, lemmas, cycle)
        if config.strategy.kind == PARADIGM_FIRST_WEIGHTED and cycle == 1:
            try:
                weights = _paradigm_weights(config, labeled, lexicon)
            except SplitError:
                # too little for an inter-predictability estimate:
                # fall back to neutral weights
                weights = {}
        evaluation = evaluate_on_pool(model, pool, lexicon) if len(pool) else None
        row = ledger.per_cycle.get(cycle, [0, 0, 0])
        records.append(
            CycleRecord(
                cycle=cycle,
                queried=len(batch),
                p1=row[0],
                p2=row[1],
                correct_suggestions=row[2],
                pool_accuracy=evaluation.accuracy if evaluation else None,
            )
        )

    if model is None:
        raise ValueError("no cycle ran; the pool was empty from the start")

    final_test_size = len(pool)
    if evaluation is not None:
        p3 = evaluation.errors
        final_accuracy = evaluation.accuracy
    else:
        # nothing left to test: no residual errors by definition
        p3 = 0
        final_accuracy = 1.0
    ledger.set_final_errors(p3)

    return Report(
        config=config.to_json_dict(),
        n_total=n_total,
        cycles=records,
        p1=ledger.p1,
        p2=ledger.p2,
        p3=p3,
        correct_suggestions=ledger.correct_suggestions,
        final_test_size=final_test_size,
        final_accuracy=final_accuracy,
        nes=nes_metric(ledger.p1, ledger.p2, p3, n_total),
        exhausted=final_test_size == 0,
    )
