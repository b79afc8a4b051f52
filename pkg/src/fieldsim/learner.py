"""Affix-rule inflection learner with smoothed rule-precision confidence.

The model memorizes its training pairs and generalizes through string
rewrite rules mined from each (input, output) pair. Around the longest
common prefix it emits a suffix-replacement rule plus variants that keep
up to ``max_context`` trailing characters of that prefix as extra
context; around the longest common suffix it emits the mirrored
prefix-replacement family; and it always emits a whole-word mapping.
Rules are aggregated per rule key (the target tag set, or the source
and target tag sets for re-inflection) with support and failure counts
over the training pairs that share the key.

Prediction looks the input up in the training memo first (confidence
1.0), otherwise applies the best applicable rule under the order
(context length desc, support desc, replacement asc, side asc, match
asc), otherwise echoes the input with confidence 0.0. Rule confidence
is add-alpha smoothed precision, (support + a) / (support + failures +
2a), with alpha picked on the dev pairs by Brier score.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence, Union

from sklearn.base import BaseEstimator
from sklearn.exceptions import NotFittedError

from fieldsim.corpus import TagSet

SUFFIX = "suffix"
PREFIX = "prefix"
WORD = "word"

RuleKey = Union[TagSet, tuple[TagSet, TagSet]]


@dataclass(frozen=True)
class InflectionQuery:
    """A request for one form.

    Plain inflection supplies the lemma and the target tag set.
    Re-inflection additionally supplies a source form with its tag set;
    the model then rewrites the source form and the lemma is allowed to
    be empty.
    """

    lemma: str
    target_tags: TagSet
    source_form: str | None = None
    source_tags: TagSet | None = None

    def __post_init__(self):
        if (self.source_form is None) != (self.source_tags is None):
            raise ValueError("source_form and source_tags must be given together")
        if self.source_form is None:
            if not self.lemma:
                raise ValueError("plain inflection query needs a lemma")
        elif not self.source_form:
            raise ValueError("source_form must be nonempty")

    @property
    def is_reinflection(self) -> bool:
        return self.source_form is not None

    @property
    def input_string(self) -> str:
        return self.source_form if self.source_form is not None else self.lemma

    @property
    def rule_key(self) -> RuleKey:
        if self.source_tags is not None:
            return (self.source_tags, self.target_tags)
        return self.target_tags


@dataclass(frozen=True)
class Prediction:
    form: str
    confidence: float

    def __post_init__(self):
        if not self.form:
            raise ValueError("predicted form must be nonempty")
        if not 0.0 <= self.confidence <= 1.0:
            raise ValueError(f"confidence out of range: {self.confidence}")


@dataclass
class Rule:
    """One rewrite rule: replace ``match_affix`` with ``replace_affix``.

    ``side`` says where the affix sits; a ``word`` rule matches the
    whole input exactly. ``context_len`` counts the characters of
    shared material baked into the affix pair, so more contextual rules
    sort ahead of their generalizations.
    """

    side: str
    match_affix: str
    replace_affix: str
    context_len: int
    support: int = 1
    failures: int = 0
    rank: int = field(default=-1, compare=False)

    def apply(self, text: str) -> str | None:
        """Rewritten string, or None when inapplicable or empty."""
        if self.side == SUFFIX:
            if self.match_affix and not text.endswith(self.match_affix):
                return None
            out = text[: len(text) - len(self.match_affix)] + self.replace_affix
        elif self.side == PREFIX:
            if self.match_affix and not text.startswith(self.match_affix):
                return None
            out = self.replace_affix + text[len(self.match_affix):]
        elif self.side == WORD:
            if text != self.match_affix:
                return None
            out = self.replace_affix
        else:
            raise ValueError(f"unknown rule side {self.side!r}")
        return out or None

    def order_key(self) -> tuple:
        return (
            -self.context_len,
            -self.support,
            self.replace_affix,
            self.side,
            self.match_affix,
        )


def _common_prefix_len(a: str, b: str) -> int:
    n = min(len(a), len(b))
    i = 0
    while i < n and a[i] == b[i]:
        i += 1
    return i


def _common_suffix_len(a: str, b: str) -> int:
    n = min(len(a), len(b))
    i = 0
    while i < n and a[len(a) - 1 - i] == b[len(b) - 1 - i]:
        i += 1
    return i


def extract_rules(input_form: str, output_form: str, max_context: int = 3) -> list[Rule]:
    """All rewrite rules one training pair licenses.

    A suffix family is emitted only when the pair shares a nonempty
    prefix, a prefix family only when it shares a nonempty suffix, and
    the whole-word rule always. Family variant j bakes the last (or
    first) j shared characters into both affixes, up to ``max_context``.
    """
    rules = []
    p = _common_prefix_len(input_form, output_form)
    if p > 0:
        for ctx in range(min(max_context, p) + 1):
            cut = p - ctx
            rules.append(
                Rule(SUFFIX, input_form[cut:], output_form[cut:], context_len=ctx)
            )
    s = _common_suffix_len(input_form, output_form)
    if s > 0:
        for ctx in range(min(max_context, s) + 1):
            keep = s - ctx
            rules.append(
                Rule(
                    PREFIX,
                    input_form[: len(input_form) - keep],
                    output_form[: len(output_form) - keep],
                    context_len=ctx,
                )
            )
    rules.append(Rule(WORD, input_form, output_form, context_len=len(input_form)))
    return rules


def _key_label(key: RuleKey) -> str:
    if isinstance(key, tuple):
        return f"{key[0].canonical}>{key[1].canonical}"
    return key.canonical


def _input_affixes(side_buckets: dict, text: str):
    """Bucket lists whose match affix fits ``text``, most keys skipped."""
    for length in range(len(text) + 1):
        bucket = side_buckets.get((SUFFIX, text[len(text) - length:]))
        if bucket:
            yield bucket
        bucket = side_buckets.get((PREFIX, text[:length]))
        if bucket:
            yield bucket
    bucket = side_buckets.get((WORD, text))
    if bucket:
        yield bucket


class AffixRuleLearner(BaseEstimator):
    """Deterministic rule-based inflector with calibrated confidence.

    Parameters
    ----------
    smoothing_grid : tuple of float
        Candidate alpha values for confidence smoothing; the dev split
        picks the one with the lowest Brier score (first wins ties).
    default_smoothing : float
        Alpha used when no dev pairs are supplied.
    max_context : int
        Most shared characters a rule variant may bake into its affixes.

    Attributes
    ----------
    rules_ : dict mapping rule key to rules in precedence order
    memo_ : dict mapping (input string, rule key) to the gold form
    alpha_ : float, the chosen smoothing
    trained_on_ : int, number of training pairs
    mode_ : "inflection" or "reinflection"
    """

    def __init__(
        self,
        smoothing_grid: tuple[float, ...] = (0.5, 1.0, 2.0),
        default_smoothing: float = 1.0,
        max_context: int = 3,
    ):
        self.smoothing_grid = smoothing_grid
        self.default_smoothing = default_smoothing
        self.max_context = max_context

    def fit(
        self,
        X: Sequence[InflectionQuery],
        y: Sequence[str],
        dev: Iterable[tuple[InflectionQuery, str]] | None = None,
    ) -> "AffixRuleLearner":
        """Mine, aggregate, and order rules from (query, form) pairs."""
        X = list(X)
        y = list(y)
        if len(X) != len(y):
            raise ValueError(f"X and y lengths differ: {len(X)} vs {len(y)}")
        if not X:
            raise ValueError("training set is empty")
        modes = {q.is_reinflection for q in X}
        if len(modes) != 1:
            raise ValueError("training mixes plain inflection and re-inflection")

        pairs_by_key: dict[RuleKey, list[tuple[str, str]]] = {}
        memo: dict[tuple[str, RuleKey], str] = {}
        for query, gold in zip(X, y):
            if not gold:
                raise ValueError("gold form must be nonempty")
            key = query.rule_key
            text = query.input_string
            pairs_by_key.setdefault(key, []).append((text, gold))
            # first attestation wins for homographic inputs
            memo.setdefault((text, key), gold)

        rules_by_key: dict[RuleKey, list[Rule]] = {}
        buckets_by_key: dict[RuleKey, dict[tuple[str, str], list[Rule]]] = {}
        for key, pairs in pairs_by_key.items():
            merged: dict[tuple[str, str, str], Rule] = {}
            for text, gold in pairs:
                for rule in extract_rules(text, gold, self.max_context):
                    ident = (rule.side, rule.match_affix, rule.replace_affix)
                    seen = merged.get(ident)
                    if seen is None:
                        merged[ident] = rule
                    else:
                        seen.support += 1
            buckets: dict[tuple[str, str], list[Rule]] = {}
            for rule in merged.values():
                buckets.setdefault((rule.side, rule.match_affix), []).append(rule)
            for text, gold in pairs:
                for bucket in _input_affixes(buckets, text):
                    for rule in bucket:
                        out = rule.apply(text)
                        if out is not None and out != gold:
                            rule.failures += 1
            ordered = sorted(merged.values(), key=Rule.order_key)
            for rank, rule in enumerate(ordered):
                rule.rank = rank
            rules_by_key[key] = ordered
            buckets_by_key[key] = buckets

        self.mode_ = "reinflection" if X[0].is_reinflection else "inflection"
        self.rules_ = rules_by_key
        self.memo_ = memo
        self._buckets_ = buckets_by_key
        self.trained_on_ = len(X)
        self.alpha_ = self._pick_alpha(list(dev) if dev else [])
        return self

    def _check_fitted(self):
        if not hasattr(self, "rules_"):
            raise NotFittedError(
                "this AffixRuleLearner is not fitted yet; call fit first"
            )

    def _resolve(self, query: InflectionQuery) -> tuple[str, Rule | None, bool]:
        """(form, winning rule or None, memo hit) for one query."""
        key = query.rule_key
        text = query.input_string
        gold = self.memo_.get((text, key))
        if gold is not None:
            return gold, None, True
        best_rule = None
        best_out = None
        side_buckets = self._buckets_.get(key)
        if side_buckets:
            for bucket in _input_affixes(side_buckets, text):
                for rule in bucket:
                    if best_rule is not None and rule.rank >= best_rule.rank:
                        continue
                    out = rule.apply(text)
                    if out is not None:
                        best_rule = rule
                        best_out = out
        if best_rule is None:
            return text, None, False
        return best_out, best_rule, False

    @staticmethod
    def _confidence(rule: Rule | None, memo_hit: bool, alpha: float) -> float:
        if memo_hit:
            return 1.0
        if rule is None:
            return 0.0
        return (rule.support + alpha) / (rule.support + rule.failures + 2 * alpha)

    def _pick_alpha(self, dev: list[tuple[InflectionQuery, str]]) -> float:
        if not dev:
            return self.default_smoothing
        resolved = []
        for query, gold in dev:
            form, rule, memo_hit = self._resolve(query)
            resolved.append((rule, memo_hit, 1.0 if form == gold else 0.0))
        best_alpha = None
        best_brier = None
        for alpha in self.smoothing_grid:
            brier = sum(
                (self._confidence(rule, hit, alpha) - outcome) ** 2
                for rule, hit, outcome in resolved
            ) / len(resolved)
            if best_brier is None or brier < best_brier:
                best_alpha = alpha
                best_brier = brier
        return float(best_alpha)

    def predict_one(self, query: InflectionQuery) -> Prediction:
        self._check_fitted()
        form, rule, memo_hit = self._resolve(query)
        return Prediction(form, self._confidence(rule, memo_hit, self.alpha_))

    def predict(self, X: Sequence[InflectionQuery]) -> list[str]:
        self._check_fitted()
        return [self._resolve(q)[0] for q in X]

    def predict_with_confidence(self, X: Sequence[InflectionQuery]) -> list[Prediction]:
        return [self.predict_one(q) for q in X]

    def to_json_dict(self) -> dict:
        """Stable dump of the fitted state, for reports and debugging."""
        self._check_fitted()
        rules = []
        for key in sorted(self.rules_, key=_key_label):
            for rule in self.rules_[key]:
                rules.append(
                    {
                        "key": _key_label(key),
                        "side": rule.side,
                        "match": rule.match_affix,
                        "replace": rule.replace_affix,
                        "context_len": rule.context_len,
                        "support": rule.support,
                        "failures": rule.failures,
                    }
                )
        return {
            "mode": self.mode_,
            "alpha": self.alpha_,
            "trained_on": self.trained_on_,
            "rules": rules,
        }
