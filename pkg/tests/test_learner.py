"""Rule extraction, aggregation, and calibrated prediction.

Derived expectations are recomputed inside the tests by brute force:
failure counts by re-applying every rule to every same-key pair, and
the winning rule by a linear scan of the ordered rule list. The model
must agree with both.
"""

import numpy as np
import pytest
from sklearn.exceptions import NotFittedError

from fieldsim.corpus import TagSet
from fieldsim.learner import (
    AffixRuleLearner,
    InflectionQuery,
    Prediction,
    extract_rules,
)
from helpers import REGULAR_SUFFIXES, STEM_SYLLABLES

PST = TagSet.parse("V;PST")
PRS = TagSet.parse("V;PRS;3;SG")


def plain(lemma, tags=PST):
    return InflectionQuery(lemma=lemma, target_tags=tags)


def fit(pairs, dev=None, **params):
    model = AffixRuleLearner(**params)
    X = [plain(lemma) for lemma, _ in pairs]
    y = [form for _, form in pairs]
    return model.fit(X, y, dev=dev)


def rule_ids(rules):
    return {(r.side, r.match_affix, r.replace_affix, r.context_len) for r in rules}


def brute_force_best(model, query):
    """Reference prediction: first applicable rule in precedence order."""
    gold = model.memo_.get((query.input_string, query.rule_key))
    if gold is not None:
        return Prediction(gold, 1.0)
    for rule in model.rules_.get(query.rule_key, []):
        out = rule.apply(query.input_string)
        if out is not None:
            alpha = model.alpha_
            conf = (rule.support + alpha) / (rule.support + rule.failures + 2 * alpha)
            return Prediction(out, conf)
    return Prediction(query.input_string, 0.0)


def brute_force_failures(model, key, pairs):
    """Reference failure counts, recomputed by re-applying every rule."""
    counts = {}
    for rule in model.rules_[key]:
        n = 0
        for text, gold in pairs:
            out = rule.apply(text)
            if out is not None and out != gold:
                n += 1
        counts[(rule.side, rule.match_affix, rule.replace_affix)] = n
    return counts


class TestExtractRules:
    def test_suffix_pair_inventory(self):
        # shared prefix "walk" gives the bare suffix swap plus three
        # context-widened variants; no shared suffix, so no prefix family
        got = rule_ids(extract_rules("walk", "walked"))
        assert got == {
            ("suffix", "", "ed", 0),
            ("suffix", "k", "ked", 1),
            ("suffix", "lk", "lked", 2),
            ("suffix", "alk", "alked", 3),
            ("word", "walk", "walked", 4),
        }

    def test_suppletive_pair_yields_only_word_rule(self):
        assert rule_ids(extract_rules("go", "went")) == {("word", "go", "went", 2)}

    def test_prefixing_pair_inventory(self):
        got = rule_ids(extract_rules("tama", "kotama"))
        assert got == {
            ("prefix", "", "ko", 0),
            ("prefix", "t", "kot", 1),
            ("prefix", "ta", "kota", 2),
            ("prefix", "tam", "kotam", 3),
            ("word", "tama", "kotama", 4),
        }

    def test_identity_pair_rules_are_identity_preserving(self):
        for rule in extract_rules("ki", "ki"):
            assert rule.apply("ki") == "ki"

    def test_max_context_caps_variants(self):
        got = rule_ids(extract_rules("walk", "walked", max_context=1))
        assert ("suffix", "lk", "lked", 2) not in got
        assert ("suffix", "k", "ked", 1) in got


class TestFitAggregation:
    def test_support_accumulates_across_pairs(self):
        model = fit([("walk", "walked"), ("talk", "talked")])
        bare = [
            r
            for r in model.rules_[PST]
            if (r.side, r.match_affix, r.replace_affix) == ("suffix", "", "ed")
        ]
        assert len(bare) == 1
        assert bare[0].support == 2
        assert bare[0].failures == 0

    def test_failures_match_brute_force(self):
        model = fit([("walk", "walked"), ("go", "went")])
        pairs = [("walk", "walked"), ("go", "went")]
        expected = brute_force_failures(model, PST, pairs)
        for rule in model.rules_[PST]:
            ident = (rule.side, rule.match_affix, rule.replace_affix)
            assert rule.failures == expected[ident], ident
        bare = next(
            r for r in model.rules_[PST] if (r.side, r.match_affix) == ("suffix", "")
        )
        # "" -> "ed" applies to "go" and produces "goed", not "went"
        assert (bare.support, bare.failures) == (1, 1)

    def test_failures_randomized_against_brute_force(self):
        rng = np.random.default_rng(42)
        syllables = list(STEM_SYLLABLES)
        for _ in range(25):
            n = int(rng.integers(2, 9))
            pairs = []
            for _i in range(n):
                stem = "".join(
                    syllables[j] for j in rng.integers(0, len(syllables), size=2)
                )
                suffix = REGULAR_SUFFIXES[int(rng.integers(0, 3))]
                pairs.append((stem, stem + suffix))
            model = fit(pairs)
            expected = brute_force_failures(model, PST, pairs)
            got = {
                (r.side, r.match_affix, r.replace_affix): r.failures
                for r in model.rules_[PST]
            }
            assert got == expected

    def test_memo_keeps_first_attestation(self):
        model = fit([("walk", "walked"), ("walk", "woke")])
        assert model.memo_[("walk", PST)] == "walked"

    def test_refit_is_deterministic(self):
        pairs = [("walk", "walked"), ("talk", "talked"), ("go", "went")]
        assert fit(pairs).to_json_dict() == fit(pairs).to_json_dict()

    def test_rejects_mixed_modes(self):
        re_query = InflectionQuery(
            lemma="", target_tags=PST, source_form="walks", source_tags=PRS
        )
        with pytest.raises(ValueError):
            AffixRuleLearner().fit([plain("walk"), re_query], ["walked", "walked"])

    def test_rejects_empty_and_mismatched(self):
        with pytest.raises(ValueError):
            AffixRuleLearner().fit([], [])
        with pytest.raises(ValueError):
            AffixRuleLearner().fit([plain("walk")], [])
        with pytest.raises(ValueError):
            AffixRuleLearner().fit([plain("walk")], [""])


class TestPredict:
    def test_memorized_input_is_exact_and_certain(self):
        model = fit([("walk", "walked"), ("go", "went")])
        pred = model.predict_one(plain("go"))
        assert pred == Prediction("went", 1.0)

    def test_generalizes_suffix_rule_with_smoothed_confidence(self):
        model = fit([("walk", "walked")])
        pred = model.predict_one(plain("talk"))
        assert pred.form == "talked"
        # single supporting pair, no failures, default alpha 1.0
        assert pred.confidence == pytest.approx((1 + 1.0) / (1 + 2 * 1.0))
        assert pred == brute_force_best(model, plain("talk"))

    def test_unseen_tagset_falls_back_to_identity(self):
        model = fit([("walk", "walked")])
        pred = model.predict_one(plain("walk", PRS))
        assert pred == Prediction("walk", 0.0)

    def test_predict_before_fit_raises(self):
        with pytest.raises(NotFittedError):
            AffixRuleLearner().predict_one(plain("walk"))

    def test_agrees_with_linear_scan_on_random_inputs(self):
        rng = np.random.default_rng(7)
        syllables = list(STEM_SYLLABLES)
        for _ in range(20):
            pairs = []
            for _i in range(int(rng.integers(2, 10))):
                stem = "".join(
                    syllables[j]
                    for j in rng.integers(0, len(syllables), size=int(rng.integers(1, 3)))
                )
                suffix = REGULAR_SUFFIXES[int(rng.integers(0, 4))]
                pairs.append((stem, stem + suffix))
            model = fit(pairs)
            for _q in range(10):
                probe = "".join(
                    syllables[j] for j in rng.integers(0, len(syllables), size=2)
                )
                assert model.predict_one(plain(probe)) == brute_force_best(
                    model, plain(probe)
                )

    def test_confidence_always_in_unit_interval(self):
        rng = np.random.default_rng(3)
        syllables = list(STEM_SYLLABLES)
        pairs = []
        for _i in range(30):
            stem = "".join(syllables[j] for j in rng.integers(0, 4, size=2))
            suffix = REGULAR_SUFFIXES[int(rng.integers(0, 6))]
            pairs.append((stem, stem + suffix))
        model = fit(pairs)
        for stem, _ in pairs:
            for tags in (PST, PRS):
                conf = model.predict_one(plain(stem, tags)).confidence
                assert 0.0 <= conf <= 1.0

    def test_reinflection_mode(self):
        examples = [("walked", "walks"), ("talked", "talks")]
        X = [
            InflectionQuery(lemma="", target_tags=PRS, source_form=src, source_tags=PST)
            for src, _ in examples
        ]
        model = AffixRuleLearner().fit(X, [tgt for _, tgt in examples])
        assert model.mode_ == "reinflection"
        probe = InflectionQuery(
            lemma="", target_tags=PRS, source_form="jumped", source_tags=PST
        )
        assert model.predict([probe]) == ["jumps"]


class TestSmoothingChoice:
    def test_default_alpha_without_dev(self):
        assert fit([("walk", "walked")]).alpha_ == 1.0

    @pytest.mark.parametrize(
        "dev_form,expected_alpha",
        [
            # correct dev outcome rewards high confidence: smallest alpha
            ("jumped", 0.5),
            # wrong dev outcome rewards low confidence: largest alpha
            ("jumpt", 2.0),
        ],
    )
    def test_dev_brier_picks_alpha(self, dev_form, expected_alpha):
        dev = [(plain("jump"), dev_form)]
        model = fit([("walk", "walked"), ("talk", "talked")], dev=dev)
        # cross-check with an explicit grid search over the dev set
        briers = {}
        for alpha in model.smoothing_grid:
            rule = next(
                r for r in model.rules_[PST] if (r.side, r.match_affix) == ("suffix", "")
            )
            conf = (rule.support + alpha) / (rule.support + rule.failures + 2 * alpha)
            outcome = 1.0 if "jumped" == dev_form else 0.0
            briers[alpha] = (conf - outcome) ** 2
        assert model.alpha_ == expected_alpha
        assert briers[model.alpha_] == min(briers.values())

    def test_tie_takes_first_grid_entry(self):
        dev = [(plain("jump"), "jumped")]
        model = fit(
            [("walk", "walked")], dev=dev, smoothing_grid=(0.5, 0.5, 2.0)
        )
        assert model.alpha_ == 0.5


class TestQueryValidation:
    def test_source_fields_must_pair(self):
        with pytest.raises(ValueError):
            InflectionQuery(lemma="walk", target_tags=PST, source_form="walked")
        with pytest.raises(ValueError):
            InflectionQuery(lemma="walk", target_tags=PST, source_tags=PRS)

    def test_plain_query_needs_lemma(self):
        with pytest.raises(ValueError):
            InflectionQuery(lemma="", target_tags=PST)

    def test_estimator_params_round_trip(self):
        model = AffixRuleLearner(max_context=2)
        assert model.get_params()["max_context"] == 2
        model.set_params(max_context=4)
        assert model.max_context == 4
