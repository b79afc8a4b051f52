"""Synthetic agglutinating languages with controllable regularity.

A language is a set of CV-syllable stems crossed with suffix slots.
Every cell of the paradigm is stem + one suffix per slot, in slot
order, and its tag set is the part of speech followed by one value tag
per slot (slot ``T`` with three suffixes yields tags T1, T2, T3).
Inflection classes are optional: lemmas are assigned round-robin to
the classes, and each class may override the suffix of specific slot
values, so only cells carrying an overridden value reveal the class.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from math import prod
from pathlib import Path

import numpy as np

from fieldsim.corpus import TagSet, Triplet

DEFAULT_SYLLABLES = (
    "ta", "po", "ki", "mu", "ne", "ra", "lo", "vi",
)

_STEM_ATTEMPTS = 100


@dataclass(frozen=True)
class SynthSlot:
    """One suffix slot: a feature name and its value suffixes."""

    feature: str
    suffixes: tuple[str, ...]

    def __post_init__(self):
        if not self.feature or ";" in self.feature or self.feature != self.feature.strip():
            raise ValueError(f"bad slot feature {self.feature!r}")
        object.__setattr__(self, "suffixes", tuple(self.suffixes))
        if not self.suffixes:
            raise ValueError(f"slot {self.feature!r} has no suffixes")

    @property
    def value_tags(self) -> tuple[str, ...]:
        return tuple(f"{self.feature}{i + 1}" for i in range(len(self.suffixes)))


@dataclass
class SynthConfig:
    """Everything that defines one synthetic language.

    ``classes`` is a tuple of per-class override maps from a slot value
    tag (such as ``T1``) to the suffix that class uses there; an empty
    tuple means one perfectly regular class. When ``principal_slot`` is
    set, overrides may only touch that slot's values, which guarantees
    the rest of the paradigm carries no class signal.
    """

    num_lemmas: int
    slots: tuple[SynthSlot, ...]
    syllables: tuple[str, ...] = DEFAULT_SYLLABLES
    stem_length: int = 2
    pos: str = "V"
    classes: tuple[dict[str, str], ...] = ()
    principal_slot: str | None = None
    emit_lemma_rows: bool = False
    citation_tag: str = "CIT"

    def __post_init__(self):
        if self.num_lemmas < 1:
            raise ValueError(f"num_lemmas must be >= 1, got {self.num_lemmas}")
        self.slots = tuple(self.slots)
        if not self.slots:
            raise ValueError("need at least one slot")
        features = [slot.feature for slot in self.slots]
        if len(set(features)) != len(features):
            raise ValueError(f"duplicate slot features: {features}")
        self.syllables = tuple(self.syllables)
        if not self.syllables or any(not s for s in self.syllables):
            raise ValueError("syllables must be nonempty strings")
        if self.stem_length < 1:
            raise ValueError(f"stem_length must be >= 1, got {self.stem_length}")
        TagSet((self.pos,))
        self.classes = tuple(dict(c) for c in self.classes)
        if self.principal_slot is not None and self.principal_slot not in features:
            raise ValueError(f"principal_slot {self.principal_slot!r} is not a slot")
        allowed = set()
        for slot in self.slots:
            if self.principal_slot in (None, slot.feature):
                allowed.update(slot.value_tags)
        for overrides in self.classes:
            for tag in overrides:
                if tag not in allowed:
                    raise ValueError(
                        f"override {tag!r} does not name a value of the "
                        f"{'principal ' if self.principal_slot else ''}slot(s)"
                    )

    @property
    def paradigm_size(self) -> int:
        return prod(len(slot.suffixes) for slot in self.slots)

    @property
    def num_classes(self) -> int:
        return max(1, len(self.classes))


def _draw_stem(config: SynthConfig, rng: np.random.Generator) -> str:
    picks = rng.integers(0, len(config.syllables), size=config.stem_length)
    return "".join(config.syllables[i] for i in picks)


def generate(config: SynthConfig, seed: int) -> list[Triplet]:
    """Deterministic triplet list, lemma-major, cells in slot order.

    Stems are drawn per lemma from a sub-seeded generator and redrawn
    on collision, so the output is reproducible and lemma i does not
    depend on how many attempts earlier lemmas needed.
    """
    seen: set[str] = set()
    stems: list[str] = []
    for i in range(config.num_lemmas):
        for attempt in range(_STEM_ATTEMPTS):
            stem = _draw_stem(config, np.random.default_rng([seed, i, attempt]))
            if stem not in seen:
                break
        else:
            raise RuntimeError(
                f"could not draw a fresh stem for lemma {i} after "
                f"{_STEM_ATTEMPTS} attempts; enlarge syllables or stem_length"
            )
        seen.add(stem)
        stems.append(stem)

    triplets = []
    value_lists = [
        list(zip(slot.value_tags, slot.suffixes)) for slot in config.slots
    ]
    for i, stem in enumerate(stems):
        overrides = config.classes[i % len(config.classes)] if config.classes else {}
        if config.emit_lemma_rows:
            triplets.append(
                Triplet(stem, TagSet((config.pos, config.citation_tag)), stem)
            )
        for combo in itertools.product(*value_lists):
            tags = TagSet((config.pos,) + tuple(tag for tag, _ in combo))
            form = stem + "".join(
                overrides.get(tag, suffix) for tag, suffix in combo
            )
            triplets.append(Triplet(stem, tags, form))
    return triplets


def load_config(path: str | Path) -> SynthConfig:
    """Read a SynthConfig from JSON, rejecting unknown keys."""
    with open(path, encoding="utf-8") as handle:
        raw = json.load(handle)
    if not isinstance(raw, dict):
        raise ValueError("config must be a JSON object")
    known = {
        "num_lemmas",
        "slots",
        "syllables",
        "stem_length",
        "pos",
        "classes",
        "principal_slot",
        "emit_lemma_rows",
        "citation_tag",
    }
    unknown = set(raw) - known
    if unknown:
        raise ValueError(f"unknown config keys: {sorted(unknown)}")
    if "num_lemmas" not in raw or "slots" not in raw:
        raise ValueError("config needs num_lemmas and slots")
    kwargs = dict(raw)
    kwargs["slots"] = tuple(
        SynthSlot(s["feature"], tuple(s["suffixes"])) for s in raw["slots"]
    )
    if "classes" in kwargs:
        kwargs["classes"] = tuple(dict(c) for c in raw["classes"])
    if "syllables" in kwargs:
        kwargs["syllables"] = tuple(raw["syllables"])
    return SynthConfig(**kwargs)
