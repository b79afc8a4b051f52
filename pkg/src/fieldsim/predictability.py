"""Inter-predictability of paradigm cells via re-inflection.

From complete paradigms we build every ordered (source cell, target
cell) pair, treating the lemma itself as one more cell under the
reserved ``LEMMA`` tag set. A re-inflection model trained on part of
that data yields a source-by-target exact-match heatmap; averaging a
source row gives the predictive power of knowing that cell, which the
paradigm-first strategy uses as its sampling weight.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from fieldsim.corpus import ParadigmTable, TagSet
from fieldsim.learner import InflectionQuery

LEMMA_TAGS = TagSet(("LEMMA",))


class SplitError(ValueError):
    """Too few examples to split into train, dev, and test."""


@dataclass(frozen=True)
class ReinflectionExample:
    source_form: str
    source_tags: TagSet
    target_tags: TagSet
    target_form: str

    def __post_init__(self):
        if not self.source_form or not self.target_form:
            raise ValueError("forms must be nonempty")
        if self.source_tags == self.target_tags:
            raise ValueError("identity pairs are excluded")

    def query(self) -> InflectionQuery:
        return InflectionQuery(
            lemma="",
            target_tags=self.target_tags,
            source_form=self.source_form,
            source_tags=self.source_tags,
        )


@dataclass
class ReinflectionDataset:
    examples: list[ReinflectionExample]
    skipped_paradigms: int


def build_reinflection_dataset(
    paradigms: Sequence[ParadigmTable],
) -> ReinflectionDataset:
    """All m*(m-1) ordered cell pairs per paradigm, lemma included.

    A paradigm with m total cells (its attested cells plus the lemma
    entry) contributes every ordered pair of distinct cells. Paradigms
    with fewer than two cells produce nothing and are counted in
    ``skipped_paradigms``.
    """
    examples = []
    skipped = 0
    for table in paradigms:
        if LEMMA_TAGS in table.cells:
            raise ValueError(
                f"paradigm {table.lemma!r} uses the reserved LEMMA tag set"
            )
        entries = [(LEMMA_TAGS, table.lemma)]
        entries.extend(table.cells.items())
        if len(entries) < 2:
            skipped += 1
            continue
        for src_tags, src_form in entries:
            for tgt_tags, tgt_form in entries:
                if src_tags == tgt_tags:
                    continue
                examples.append(
                    ReinflectionExample(src_form, src_tags, tgt_tags, tgt_form)
                )
    return ReinflectionDataset(examples, skipped)


def split_45_45_10(
    examples: Sequence[ReinflectionExample], rng: np.random.Generator
) -> tuple[list[ReinflectionExample], list[ReinflectionExample], list[ReinflectionExample]]:
    """Shuffled 45/45/10 partition; floors go to train and dev.

    With n examples the first two splits get floor(0.45 n) each and the
    test split the remainder, so every example lands in exactly one
    part. Fewer than 10 examples cannot be split and raise SplitError.
    """
    n = len(examples)
    if n < 10:
        raise SplitError(f"need at least 10 examples to split, got {n}")
    order = rng.permutation(n)
    cut = 45 * n // 100
    train = [examples[i] for i in order[:cut]]
    dev = [examples[i] for i in order[cut : 2 * cut]]
    test = [examples[i] for i in order[2 * cut :]]
    return train, dev, test


@dataclass
class Heatmap:
    """Exact-match accuracy per (source, target) tag set pair.

    ``acc[i][j]`` is None where no test example had that pair (the
    diagonal in particular is never present). ``counts`` holds the
    number of test examples behind each entry.
    """

    sources: tuple[TagSet, ...]
    targets: tuple[TagSet, ...]
    acc: list[list[float | None]]
    counts: list[list[int]]

    def at(self, source: TagSet, target: TagSet) -> float | None:
        return self.acc[self.sources.index(source)][self.targets.index(target)]


def compute_heatmap(model, test: Sequence[ReinflectionExample]) -> Heatmap:
    """Group test accuracy by (source tags, target tags)."""
    if not test:
        raise ValueError("empty test set")
    predicted = model.predict([ex.query() for ex in test])
    tally: dict[tuple[TagSet, TagSet], list[int]] = {}
    for ex, form in zip(test, predicted):
        bucket = tally.setdefault((ex.source_tags, ex.target_tags), [0, 0])
        bucket[0] += 1 if form == ex.target_form else 0
        bucket[1] += 1
    sources = tuple(sorted({s for s, _t in tally}, key=lambda t: t.canonical))
    targets = tuple(sorted({t for _s, t in tally}, key=lambda t: t.canonical))
    acc: list[list[float | None]] = []
    counts: list[list[int]] = []
    for src in sources:
        acc_row: list[float | None] = []
        count_row: list[int] = []
        for tgt in targets:
            bucket = tally.get((src, tgt))
            if bucket is None:
                acc_row.append(None)
                count_row.append(0)
            else:
                acc_row.append(bucket[0] / bucket[1])
                count_row.append(bucket[1])
        acc.append(acc_row)
        counts.append(count_row)
    return Heatmap(sources, targets, acc, counts)


@dataclass
class PredictivePowerWeights:
    """Mean row accuracy per source tag set, in heatmap source order."""

    weights: dict[TagSet, float]

    def sampling_weights(self) -> dict[TagSet, float]:
        """Weights for pool sampling; the lemma row is not a pool cell."""
        return {t: w for t, w in self.weights.items() if t != LEMMA_TAGS}


def predictive_power(heatmap: Heatmap) -> PredictivePowerWeights:
    """Row means over present entries; a row with none scores 0."""
    weights: dict[TagSet, float] = {}
    for i, src in enumerate(heatmap.sources):
        present = [value for value in heatmap.acc[i] if value is not None]
        weights[src] = math.fsum(present) / len(present) if present else 0.0
    return PredictivePowerWeights(weights)
