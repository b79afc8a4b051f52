"""Shared scaffolding for the test suite.

The synthetic configs here keep suffix material out of the stem
alphabet's vowel endings, so a regular language stays exactly
learnable by affix rules: no training pair ever licenses a spurious
prefix-side rule (stems end in a/o/i/u, suffixes never do).
"""

from __future__ import annotations

from fieldsim.corpus import build_lexicon
from fieldsim.learner import Prediction
from fieldsim.synthlang import SynthConfig, SynthSlot, generate

STEM_SYLLABLES = ("ta", "po", "ki", "mu", "ra", "lo", "vi", "su")

REGULAR_SUFFIXES = (
    "sen", "dul", "fyr", "ges", "ned", "lyg",
    "sef", "deb", "ryn", "gel", "fes", "dyr",
)


class StubModel:
    """A rigged model for strategy tests.

    Confidence comes from ``conf`` keyed by the target tag canonical
    (falling back to ``default``); the predicted form comes from
    ``forms`` keyed by (input string, target tag canonical), falling
    back to the input plus a marker.
    """

    def __init__(self, conf=None, default=0.0, forms=None, marker="X"):
        self.conf = dict(conf or {})
        self.default = default
        self.forms = dict(forms or {})
        self.marker = marker

    def predict_one(self, query):
        confidence = self.conf.get(query.target_tags.canonical, self.default)
        form = self.forms.get((query.input_string, query.target_tags.canonical))
        if form is None:
            form = query.input_string + self.marker
        return Prediction(form, confidence)

    def predict(self, X):
        return [self.predict_one(q).form for q in X]


def regular_config(
    num_lemmas=12, num_values=4, identity_first=False, stem_length=2, **kwargs
):
    """A perfectly regular one-slot language; optionally value 1 is bare."""
    if num_values > len(REGULAR_SUFFIXES):
        raise ValueError(f"at most {len(REGULAR_SUFFIXES)} values supported")
    suffixes = list(REGULAR_SUFFIXES[:num_values])
    if identity_first:
        suffixes[0] = ""
    return SynthConfig(
        num_lemmas=num_lemmas,
        slots=(SynthSlot("F", tuple(suffixes)),),
        syllables=STEM_SYLLABLES,
        stem_length=stem_length,
        **kwargs,
    )


def lexicon_for(config, seed=0):
    return build_lexicon(generate(config, seed))
