"""Command line interface.

Three subcommands: ``run`` executes elicitation experiments against a
TSV dataset, ``heatmap`` computes the inter-predictability analysis on
its own, and ``synth`` generates a synthetic dataset from a JSON
config. All outputs are UTF-8; failed commands clean up whatever they
had partially written and exit nonzero with a message on stderr.
"""

from __future__ import annotations

import argparse
import shutil
import sys
from pathlib import Path

import numpy as np

from fieldsim import reports
from fieldsim.corpus import build_lexicon, init_pool, load_unimorph, triplets_to_tsv
from fieldsim.learner import AffixRuleLearner
from fieldsim.metrics import percent
from fieldsim.predictability import (
    build_reinflection_dataset,
    compute_heatmap,
    predictive_power,
    split_45_45_10,
)
from fieldsim.runner import ExperimentConfig, run_experiment
from fieldsim.strategies import (
    CONFIDENCE_GATED,
    CONFIDENCE_RANKED,
    PARADIGM_FIRST_WEIGHTED,
    UNIFORM,
    StrategyConfig,
    paradigm_first_batch,
)
from fieldsim.synthlang import generate, load_config

EXPERIMENT_KINDS = {
    1: UNIFORM,
    2: CONFIDENCE_GATED,
    3: CONFIDENCE_RANKED,
    4: PARADIGM_FIRST_WEIGHTED,
}


def parse_experiments(text: str) -> list[int]:
    """'2', '1,3', and '1..4' all work; order is kept, duplicates dropped."""
    numbers: list[int] = []
    for part in text.split(","):
        part = part.strip()
        if ".." in part:
            lo_text, _, hi_text = part.partition("..")
            lo, hi = int(lo_text), int(hi_text)
            if lo > hi:
                raise ValueError(f"empty experiment range {part!r}")
            numbers.extend(range(lo, hi + 1))
        elif part:
            numbers.append(int(part))
    if not numbers:
        raise ValueError(f"no experiments in {text!r}")
    for n in numbers:
        if n not in EXPERIMENT_KINDS:
            raise ValueError(f"unknown experiment {n}; pick from 1..4")
    return list(dict.fromkeys(numbers))


def _write_run_dir(report, experiment: int, run_dir: Path) -> None:
    staging = run_dir.parent / f".{run_dir.name}.tmp"
    if staging.exists():
        shutil.rmtree(staging)
    staging.mkdir(parents=True)
    try:
        reports.write_report_json(report, staging / "report.json")
        reports.write_cycles_csv(report, staging / "cycles.csv")
        reports.write_ledger_csv(report, staging / "ledger.csv")
        reports.write_summary_csv(
            [reports.summary_row(report, experiment)], staging / "summary.csv"
        )
    except BaseException:
        shutil.rmtree(staging, ignore_errors=True)
        raise
    if run_dir.exists():
        shutil.rmtree(run_dir)
    staging.rename(run_dir)


def cmd_run(args: argparse.Namespace) -> int:
    lexicon = build_lexicon(load_unimorph(args.data))
    language = args.language or Path(args.data).stem
    experiments = parse_experiments(args.exp)
    seeds = args.seed or [0]
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    summary_rows = []
    for experiment in experiments:
        for seed in seeds:
            config = ExperimentConfig(
                language=language,
                strategy=StrategyConfig(
                    kind=EXPERIMENT_KINDS[experiment],
                    batch_size=args.batch,
                    ranked_suggest_fraction=args.ranked_fraction,
                    seed=seed,
                ),
                cycles=args.cycles,
            )
            report = run_experiment(config, lexicon)
            _write_run_dir(report, experiment, out / f"exp{experiment}_seed{seed}")
            summary_rows.append(reports.summary_row(report, experiment))
            print(
                f"{language} exp{experiment} seed{seed}: "
                f"accuracy {percent(report.final_accuracy)}% "
                f"nes {percent(report.nes)}% "
                f"(p1={report.p1} p2={report.p2} p3={report.p3} n={report.n_total})"
            )
    reports.write_summary_csv(summary_rows, out / "summary.csv")
    return 0


def cmd_heatmap(args: argparse.Namespace) -> int:
    lexicon = build_lexicon(load_unimorph(args.data))
    if args.budget < 1:
        raise ValueError(f"budget must be >= 1, got {args.budget}")
    stats = lexicon.stats
    needed = -(-args.budget * stats.num_lemmas // stats.num_forms)
    if stats.num_lemmas < needed:
        raise ValueError(
            f"budget {args.budget} needs {needed} complete paradigms, "
            f"dataset has {stats.num_lemmas}"
        )
    rng = np.random.default_rng(args.seed)
    batch = paradigm_first_batch(lexicon, init_pool(lexicon), args.budget, rng)
    picked = list(dict.fromkeys(cell.lemma_index for cell in batch.cells()))
    tables = [lexicon.tables[i] for i in picked]
    dataset = build_reinflection_dataset(tables)
    train, dev, test = split_45_45_10(dataset.examples, rng)
    model = AffixRuleLearner()
    model.fit(
        [ex.query() for ex in train],
        [ex.target_form for ex in train],
        dev=[(ex.query(), ex.target_form) for ex in dev],
    )
    heat = compute_heatmap(model, test)
    weights = predictive_power(heat)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    written = []
    try:
        reports.write_heatmap_csv(heat, out / "heatmap.csv")
        written.append(out / "heatmap.csv")
        reports.write_weights_csv(weights.weights, out / "weights.csv")
        written.append(out / "weights.csv")
        if args.svg:
            reports.render_heatmap_svg(heat, out / "heatmap.svg")
            written.append(out / "heatmap.svg")
    except BaseException:
        for path in written:
            path.unlink(missing_ok=True)
        raise
    print(
        f"heatmap over {len(tables)} paradigms, "
        f"{len(dataset.examples)} re-inflection examples "
        f"({len(train)}/{len(dev)}/{len(test)} split), "
        f"{len(heat.sources)}x{len(heat.targets)} matrix -> {out}"
    )
    return 0


def cmd_synth(args: argparse.Namespace) -> int:
    config = load_config(args.config)
    triplets = generate(config, args.seed)
    out = Path(args.out)
    if out.parent and not out.parent.exists():
        out.parent.mkdir(parents=True)
    staging = out.with_name(out.name + ".tmp")
    try:
        staging.write_text(triplets_to_tsv(triplets), encoding="utf-8")
        staging.replace(out)
    except BaseException:
        staging.unlink(missing_ok=True)
        raise
    print(f"{len(triplets)} rows ({config.num_lemmas} lemmas) -> {out}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fieldsim",
        description="Simulated elicitation of inflection paradigms.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run elicitation experiments on a TSV dataset")
    run.add_argument("--data", required=True, help="three-column TSV data file")
    run.add_argument(
        "--exp",
        default="1",
        help="experiments to run: '2', '1,3', or '1..4' (default: 1)",
    )
    run.add_argument("--cycles", type=int, default=5, help="elicitation cycles (default: 5)")
    run.add_argument("--batch", type=int, default=400, help="queries per cycle (default: 400)")
    run.add_argument(
        "--seed",
        type=int,
        action="append",
        help="run seed; repeat the flag for several runs (default: 0)",
    )
    run.add_argument(
        "--ranked-fraction",
        type=float,
        default=0.5,
        help="suggested share of a ranked batch (default: 0.5)",
    )
    run.add_argument("--language", help="language label for reports (default: data file stem)")
    run.add_argument("--out", required=True, help="output directory")
    run.set_defaults(func=cmd_run)

    heatmap = sub.add_parser("heatmap", help="inter-predictability analysis only")
    heatmap.add_argument("--data", required=True, help="three-column TSV data file")
    heatmap.add_argument("--budget", type=int, default=400, help="cell budget (default: 400)")
    heatmap.add_argument("--seed", type=int, default=0, help="sampling seed (default: 0)")
    heatmap.add_argument("--svg", action="store_true", help="also render heatmap.svg")
    heatmap.add_argument("--out", required=True, help="output directory")
    heatmap.set_defaults(func=cmd_heatmap)

    synth = sub.add_parser("synth", help="generate a synthetic dataset")
    synth.add_argument("--config", required=True, help="JSON language config")
    synth.add_argument("--seed", type=int, default=0, help="generation seed (default: 0)")
    synth.add_argument("--out", required=True, help="output TSV path")
    synth.set_defaults(func=cmd_synth)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except Exception as exc:
        print(f"fieldsim: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
