"""The elicitation loop: cycle accounting, evaluation, determinism."""

from fractions import Fraction

import pytest

from fieldsim.corpus import init_pool
from fieldsim.runner import (
    ExperimentConfig,
    evaluate_on_pool,
    run_experiment,
    split_train_dev,
)
from fieldsim.strategies import (
    CONFIDENCE_GATED,
    CONFIDENCE_RANKED,
    KINDS,
    PARADIGM_FIRST_WEIGHTED,
    UNIFORM,
    StrategyConfig,
)
from fieldsim.corpus import TagSet
from helpers import StubModel, lexicon_for, regular_config


def config_for(kind, batch_size=8, cycles=3, seed=0, **kwargs):
    return ExperimentConfig(
        language="synth",
        strategy=StrategyConfig(kind=kind, batch_size=batch_size, seed=seed),
        cycles=cycles,
        **kwargs,
    )


class TestExperimentConfig:
    def test_delegates_batch_size_and_seed(self):
        config = config_for(UNIFORM, batch_size=17, seed=9)
        assert config.batch_size == 17
        assert config.seed == 9

    def test_rejects_zero_cycles(self):
        with pytest.raises(ValueError):
            config_for(UNIFORM, cycles=0)

    def test_json_dict_carries_the_whole_setup(self):
        config = config_for(
            CONFIDENCE_RANKED,
            batch_size=5,
            cycles=2,
            seed=3,
            learner_params={"default_smoothing": 2.0},
        )
        d = config.to_json_dict()
        assert d["language"] == "synth"
        assert d["strategy"] == CONFIDENCE_RANKED
        assert d["batch_size"] == 5
        assert d["seed"] == 3
        assert d["cycles"] == 2
        assert d["learner"] == {"default_smoothing": 2.0}


class TestSplitTrainDev:
    def pairs(self, n):
        lex = lexicon_for(regular_config(num_lemmas=max(1, -(-n // 4))))
        cells = init_pool(lex).ordered()[:n]
        return [(cell, lex.gold(cell)) for cell in cells]

    @pytest.mark.parametrize("n,expected_train", [(1, 1), (2, 1), (10, 9), (20, 18)])
    def test_train_size_is_nine_tenths_floored_at_least_one(self, n, expected_train):
        train, dev = split_train_dev(self.pairs(n), seed=0, cycle=1)
        assert len(train) == expected_train
        assert len(dev) == n - expected_train

    def test_partition_is_exact(self):
        pairs = self.pairs(20)
        train, dev = split_train_dev(pairs, seed=0, cycle=1)
        assert sorted(
            (c.sort_key() for c, _ in train + dev)
        ) == sorted(c.sort_key() for c, _ in pairs)

    def test_same_seed_and_cycle_reproduce(self):
        pairs = self.pairs(20)
        assert split_train_dev(pairs, 5, 2) == split_train_dev(pairs, 5, 2)

    def test_membership_changes_across_cycles(self):
        pairs = self.pairs(20)
        assert split_train_dev(pairs, 5, 1) != split_train_dev(pairs, 5, 2)

    def test_empty_rejected(self):
        with pytest.raises(ValueError):
            split_train_dev([], 0, 1)


class TestEvaluateOnPool:
    def test_counts_errors_per_tagset(self, tiny_lexicon):
        pool = init_pool(tiny_lexicon)
        pst, prs = TagSet.parse("V;PST"), TagSet.parse("V;PRS;3;SG")
        model = StubModel(
            forms={
                ("walk", pst.canonical): "walked",
                ("talk", pst.canonical): "talked",
            }
        )
        result = evaluate_on_pool(model, pool, tiny_lexicon)
        assert result.errors == 4
        assert result.accuracy == pytest.approx(2 / 6)
        assert result.per_tagset[pst] == pytest.approx(2 / 3)
        assert result.per_tagset[prs] == 0.0

    def test_empty_pool_rejected(self, tiny_lexicon):
        pool = init_pool(tiny_lexicon)
        for cell in pool.ordered():
            pool.remove(cell)
        with pytest.raises(ValueError):
            evaluate_on_pool(StubModel(), pool, tiny_lexicon)


class TestRunExperiment:
    def test_uniform_never_suggests(self):
        lex = lexicon_for(regular_config())
        report = run_experiment(config_for(UNIFORM), lex)
        assert report.p2 == 0
        assert report.correct_suggestions == 0
        assert report.p1 == report.total_queries == 24

    def test_conservation_across_strategies(self):
        lex = lexicon_for(regular_config())
        for kind in KINDS:
            report = run_experiment(config_for(kind), lex)
            assert report.n_total == 48
            assert report.total_queries + report.final_test_size == 48
            assert sum(rec.queried for rec in report.cycles) == report.total_queries
            for rec in report.cycles:
                assert rec.queried == rec.p1 + rec.p2 + rec.correct_suggestions

    def test_cycle_records_are_numbered_and_scored(self):
        lex = lexicon_for(regular_config())
        report = run_experiment(config_for(UNIFORM), lex)
        assert [rec.cycle for rec in report.cycles] == [1, 2, 3]
        assert all(rec.pool_accuracy is not None for rec in report.cycles)

    def test_regular_language_is_learned_exactly(self):
        lex = lexicon_for(regular_config())
        report = run_experiment(config_for(UNIFORM), lex)
        assert report.final_accuracy == 1.0
        assert report.p3 == 0
        assert report.nes == float(1 - Fraction(report.p1 + report.p2, 48))

    def test_nes_matches_the_ledger(self):
        lex = lexicon_for(regular_config())
        for kind in KINDS:
            report = run_experiment(config_for(kind, seed=2), lex)
            expected = float(
                1 - Fraction(report.p1 + report.p2 + report.p3, report.n_total)
            )
            assert report.nes == expected

    def test_exhausting_the_pool_stops_early(self):
        lex = lexicon_for(regular_config())  # 48 cells
        report = run_experiment(config_for(UNIFORM, batch_size=20, cycles=5), lex)
        assert len(report.cycles) == 3
        assert [rec.queried for rec in report.cycles] == [20, 20, 8]
        assert report.exhausted
        assert report.final_test_size == 0
        assert report.p3 == 0
        assert report.final_accuracy == 1.0
        assert report.cycles[-1].pool_accuracy is None

    def test_paradigm_first_survives_tiny_data(self):
        # one 2-cell paradigm in cycle 1 is too little to estimate
        # inter-predictability; the run must fall back to neutral weights
        lex = lexicon_for(regular_config(num_lemmas=3, num_values=2))
        report = run_experiment(
            config_for(PARADIGM_FIRST_WEIGHTED, batch_size=2, cycles=2), lex
        )
        assert report.total_queries + report.final_test_size == 6
        assert report.cycles[0].queried == 2

    def test_paradigm_first_cycle_one_takes_whole_paradigms(self):
        lex = lexicon_for(regular_config())  # 12 lemmas x 4 cells
        report = run_experiment(config_for(PARADIGM_FIRST_WEIGHTED), lex)
        # ceil(8 * 12 / 48) = 2 lemmas -> 8 cells, all unsuggested
        first = report.cycles[0]
        assert first.queried == 8
        assert first.p1 == 8

    def test_first_cycle_never_suggests(self):
        lex = lexicon_for(regular_config())
        for kind in KINDS:
            report = run_experiment(config_for(kind, seed=1), lex)
            first = report.cycles[0]
            assert first.p2 == 0
            assert first.correct_suggestions == 0

    def test_identical_runs_produce_identical_json(self):
        lex = lexicon_for(regular_config())
        for kind in (CONFIDENCE_GATED, PARADIGM_FIRST_WEIGHTED):
            a = run_experiment(config_for(kind, seed=4), lex)
            b = run_experiment(config_for(kind, seed=4), lex)
            assert a.to_json() == b.to_json()

    def test_different_seeds_choose_different_cells(self):
        lex = lexicon_for(regular_config())
        a = run_experiment(config_for(UNIFORM, seed=0), lex)
        b = run_experiment(config_for(UNIFORM, seed=1), lex)
        assert a.to_json() != b.to_json()

    def test_learner_params_reach_the_model(self):
        lex = lexicon_for(regular_config())
        report = run_experiment(
            config_for(UNIFORM, learner_params={"smoothing_grid": (1.0,)}),
            lex,
        )
        assert report.config["learner"] == {"smoothing_grid": (1.0,)}

    def test_report_json_shape(self):
        lex = lexicon_for(regular_config())
        d = run_experiment(config_for(UNIFORM), lex).to_json_dict()
        assert set(d) == {"config", "n_total", "exhausted", "cycles", "totals", "final"}
        assert set(d["totals"]) == {"queries", "p1", "p2", "correct_suggestions"}
        assert set(d["final"]) == {"test_size", "accuracy", "p3", "nes"}
        assert d["totals"]["queries"] == sum(c["queried"] for c in d["cycles"])
