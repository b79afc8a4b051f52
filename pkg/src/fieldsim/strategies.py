"""Batch selection strategies for the elicitation loop.

All strategies return a Batch of distinct pool cells, optionally with
a model prediction attached as the suggestion to show the speaker.
Selection never reads gold forms; the model, the pool, and (for the
paradigm strategy) paradigm shapes are the only inputs. Cycle order
inside a batch is the order cells will be put to the oracle.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from fieldsim.corpus import CellId, Lexicon, Pool, TagSet
from fieldsim.learner import InflectionQuery, Prediction

UNIFORM = "uniform"
CONFIDENCE_GATED = "confidence_gated"
CONFIDENCE_RANKED = "confidence_ranked"
PARADIGM_FIRST_WEIGHTED = "paradigm_first_weighted"

KINDS = (UNIFORM, CONFIDENCE_GATED, CONFIDENCE_RANKED, PARADIGM_FIRST_WEIGHTED)


class PoolExhausted(RuntimeError):
    """Asked to sample from an empty pool."""


@dataclass(frozen=True)
class BatchItem:
    cell: CellId
    suggestion: Prediction | None = None


@dataclass
class Batch:
    items: list[BatchItem]

    def __len__(self) -> int:
        return len(self.items)

    def cells(self) -> list[CellId]:
        return [item.cell for item in self.items]


@dataclass
class StrategyConfig:
    """Which strategy to run and its knobs.

    ``ranked_suggest_fraction`` only matters for the confidence-ranked
    strategy: that share of each batch (rounded up) is taken from the
    high-confidence end with suggestions attached.
    """

    kind: str
    batch_size: int = 400
    ranked_suggest_fraction: float = 0.5
    seed: int = 0

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown strategy kind {self.kind!r}; expected one of {KINDS}")
        if self.batch_size < 1:
            raise ValueError(f"batch_size must be >= 1, got {self.batch_size}")
        if not 0.0 <= self.ranked_suggest_fraction <= 1.0:
            raise ValueError(
                f"ranked_suggest_fraction must be in [0, 1], got {self.ranked_suggest_fraction}"
            )
        if self.seed < 0:
            raise ValueError(f"seed must be >= 0, got {self.seed}")


def query_for(pool: Pool, cell: CellId) -> InflectionQuery:
    """The plain inflection query a strategy may show the model."""
    return InflectionQuery(lemma=pool.lemma_of(cell), target_tags=cell.tags)


def _require_nonempty(pool: Pool):
    if len(pool) == 0:
        raise PoolExhausted("the pool is empty")


def uniform_sample(pool: Pool, k: int, rng: np.random.Generator) -> Batch:
    """k distinct cells drawn uniformly, never with suggestions."""
    _require_nonempty(pool)
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    cells = pool.ordered()
    take = min(k, len(cells))
    picked = rng.choice(len(cells), size=take, replace=False)
    return Batch([BatchItem(cells[i]) for i in picked])


def mean_confidence(model, pool: Pool) -> float:
    """Mean model confidence over every cell still in the pool."""
    _require_nonempty(pool)
    total = 0.0
    for cell in pool:
        total += model.predict_one(query_for(pool, cell)).confidence
    return total / len(pool)


def gated_batch(pool: Pool, k: int, model, rng: np.random.Generator) -> Batch:
    """Uniform draw; suggest only where confidence beats the pool mean.

    The gate is strict, so a batch drawn from an all-equal-confidence
    pool carries no suggestions and matches uniform_sample cell for
    cell under the same generator state.
    """
    batch = uniform_sample(pool, k, rng)
    threshold = mean_confidence(model, pool)
    items = []
    for item in batch.items:
        pred = model.predict_one(query_for(pool, item.cell))
        items.append(
            BatchItem(item.cell, pred if pred.confidence > threshold else None)
        )
    return Batch(items)


def ranked_batch(
    pool: Pool, k: int, model, suggest_fraction: float = 0.5
) -> Batch:
    """Split the batch between the most and least confident cells.

    The whole pool is ranked by (confidence desc, lemma asc, tag string
    asc). The top ceil(k * suggest_fraction) cells come with their
    predictions attached; the bottom k minus that come bare. When the
    pool is smaller than k the two slices may overlap; overlapping
    cells keep the top slice's suggestion.
    """
    _require_nonempty(pool)
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    if not 0.0 <= suggest_fraction <= 1.0:
        raise ValueError(f"suggest_fraction must be in [0, 1], got {suggest_fraction}")
    scored = []
    for cell in pool:
        pred = model.predict_one(query_for(pool, cell))
        scored.append((cell, pred))
    scored.sort(
        key=lambda pair: (
            -pair[1].confidence,
            pool.lemma_of(pair[0]),
            pair[0].tags.canonical,
        )
    )
    n_suggest = math.ceil(k * suggest_fraction)
    chosen: dict[CellId, BatchItem] = {}
    for cell, pred in scored[:n_suggest]:
        chosen[cell] = BatchItem(cell, pred)
    n_bare = k - n_suggest
    if n_bare > 0:
        for cell, _pred in scored[-n_bare:]:
            if cell not in chosen:
                chosen[cell] = BatchItem(cell)
    return Batch(list(chosen.values()))


def paradigm_first_batch(
    lexicon: Lexicon, pool: Pool, budget: int, rng: np.random.Generator
) -> Batch:
    """Whole paradigms for ceil(budget / forms-per-lemma) random lemmas.

    Only lemmas whose every cell is still unlabelled are eligible. The
    last paradigm may push the batch past the budget; cells are emitted
    paradigm by paradigm in draw order, never with suggestions.
    """
    _require_nonempty(pool)
    if budget < 1:
        raise ValueError(f"budget must be >= 1, got {budget}")
    stats = lexicon.stats
    n_lemmas = -(-budget * stats.num_lemmas // stats.num_forms)
    eligible = [
        i
        for i, table in enumerate(lexicon.tables)
        if all(CellId(i, tags) in pool for tags in table.cells)
    ]
    if not eligible:
        return Batch([])
    take = min(n_lemmas, len(eligible))
    picked = rng.choice(len(eligible), size=take, replace=False)
    items = []
    for idx in picked:
        lemma_index = eligible[idx]
        for tags in lexicon.tables[lemma_index].cells:
            items.append(BatchItem(CellId(lemma_index, tags)))
    return Batch(items)


def resolve_weights(
    weights: Mapping[TagSet, float], tagsets: Sequence[TagSet]
) -> dict[TagSet, float]:
    """Per-tagset weights for sampling, with fallbacks.

    Tag sets missing from ``weights`` get the smallest positive weight
    present; if nothing is positive, every tag set gets 1.0 so the
    draw degrades to uniform.
    """
    for value in weights.values():
        if value < 0:
            raise ValueError(f"negative weight: {value}")
    positives = [v for v in weights.values() if v > 0]
    if not positives:
        return {tags: 1.0 for tags in tagsets}
    floor_weight = min(positives)
    return {tags: weights.get(tags, floor_weight) for tags in tagsets}


def weighted_sample_indices(
    weights: np.ndarray, k: int, rng: np.random.Generator
) -> np.ndarray:
    """Indices of a weighted draw without replacement, selection order.

    Uses exponential sorting keys (one uniform draw per item, key
    -log(1-u)/w), which makes inclusion proportional to weight without
    k sequential passes. Zero-weight items only appear once every
    positive-weight item is taken, ordered uniformly among themselves.
    """
    n = len(weights)
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    u = rng.random(n)
    positive = weights > 0
    keys = np.where(
        positive, -np.log1p(-u) / np.where(positive, weights, 1.0), np.inf
    )
    order = np.lexsort((u, keys))
    return order[: min(k, n)]


def weighted_batch(
    pool: Pool,
    k: int,
    weights: Mapping[TagSet, float],
    model,
    rng: np.random.Generator,
) -> Batch:
    """Draw cells with probability proportional to their tag set weight,
    then gate suggestions against the pool mean as in gated_batch."""
    _require_nonempty(pool)
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    cells = pool.ordered()
    resolved = resolve_weights(weights, [cell.tags for cell in cells])
    weight_arr = np.array([resolved[cell.tags] for cell in cells], dtype=float)
    picked = weighted_sample_indices(weight_arr, k, rng)
    threshold = mean_confidence(model, pool)
    items = []
    for i in picked:
        cell = cells[i]
        pred = model.predict_one(query_for(pool, cell))
        items.append(
            BatchItem(cell, pred if pred.confidence > threshold else None)
        )
    return Batch(items)
