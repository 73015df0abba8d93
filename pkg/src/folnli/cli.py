"""Command-line entry points for dataset generation, proving, training,
evaluation, and zero-shot substitution sweeps.

Every subcommand that writes artifacts records the exact options and seed
as JSON in its output directory, so any run can be reproduced from its own
provenance file.  Exit codes separate the failure families: 2 for
configuration problems, 3 for data problems (including unparsable
sentences and missing files), 4 for satisfiability questions the prover
could not settle, 5 for numeric breakdowns.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import sys
import time
from pathlib import Path

import numpy as np

from . import net
from .data import (
    apply_substitution,
    distribution_table,
    generate_dataset,
    load_substitution,
    read_dataset,
    SplitSpec,
    write_dataset,
)
from .errors import (
    ConfigError,
    DataError,
    FolnliError,
    NumericsError,
    SentenceParseError,
    UndecidedError,
)
from .lang import default_config, load_config, parse, sentence_text
from .prover import PairLabeler, render_model, render_refutation
from .fol import render_formula
from .relations import RELATIONS

# keeps roughly half of the generated pairs logically independent; see
# SplitSpec.keep_independence for why raw sampling needs flattening
DEFAULT_KEEP_INDEPENDENCE = 0.024

_EXIT_BY_TYPE = (
    (UndecidedError, 4),
    (NumericsError, 5),
    (SentenceParseError, 3),
    (DataError, 3),
    (ConfigError, 2),
)


@dataclasses.dataclass
class RunConfig:
    """Provenance record: the subcommand and every option it ran with."""

    subcommand: str
    options: dict

    def save(self, directory: Path):
        path = directory / "run_config.json"
        payload = dataclasses.asdict(self)
        path.write_text(
            json.dumps(payload, indent=2, sort_keys=True) + "\n", encoding="utf-8"
        )


def _run_config(args) -> RunConfig:
    options = {
        key: value
        for key, value in vars(args).items()
        if key not in ("func", "subcommand") and not key.startswith("_")
    }
    return RunConfig(args.subcommand, options)


def _language(args):
    config = load_config(args.config) if args.config else default_config()
    if getattr(args, "five_neg_slots", False):
        config = config.with_object_det_negation(True)
    return config


def _parse_lengths(text):
    if text is None:
        return None
    try:
        values = tuple(int(part) for part in text.split(",") if part)
    except ValueError as exc:
        raise ConfigError(f"bad length list {text!r}: {exc}") from exc
    if not values:
        raise ConfigError("length list is empty")
    return values


# --- generate ---------------------------------------------------------------------

def cmd_generate(args) -> int:
    config = _language(args)
    spec = SplitSpec(
        train_size=args.train,
        test_size=args.test,
        train_lengths=_parse_lengths(args.train_lengths),
        test_lengths=_parse_lengths(args.test_lengths),
        seed=args.seed,
        keep_independence=args.keep_independence,
    )
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    started = time.time()
    result = generate_dataset(
        spec,
        config,
        workers=args.workers,
        chunk_size=args.chunk_size,
        max_domain=args.max_domain,
        max_resolution_steps=args.max_steps,
    )
    elapsed = time.time() - started
    write_dataset(result.train, out / "train.tsv")
    write_dataset(result.test, out / "test.tsv")
    (out / "distribution.tsv").write_text(
        distribution_table(result.train, result.test), encoding="utf-8"
    )
    labeled = len(result.train) + len(result.test) + len(result.undecided)
    log_lines = [
        f"train_pairs\t{len(result.train)}",
        f"test_pairs\t{len(result.test)}",
        f"attempts\t{result.attempts}",
        f"duplicates\t{result.duplicates}",
        f"length_rejected\t{result.length_rejected}",
        f"independence_rejected\t{result.independence_rejected}",
        f"undecided\t{len(result.undecided)}",
        f"elapsed_seconds\t{elapsed:.1f}",
    ]
    log_lines += [f"undecided_pair\t{l}\t{r}" for l, r in result.undecided]
    (out / "generation.log").write_text(
        "\n".join(log_lines) + "\n", encoding="utf-8"
    )
    _run_config(args).save(out)
    print(
        f"wrote {len(result.train)} train and {len(result.test)} test pairs "
        f"to {out} in {elapsed:.1f}s"
    )
    if labeled and len(result.undecided) / labeled > args.max_undecided:
        raise UndecidedError(
            f"{len(result.undecided)} of {labeled} labeled pairs were undecided, "
            f"above the --max-undecided threshold {args.max_undecided}"
        )
    return 0


# --- prove ------------------------------------------------------------------------

_BIT_NAMES = (
    "left & right",
    "left & not right",
    "not left & right",
    "not left & not right",
)


def cmd_prove(args) -> int:
    config = _language(args)
    left = parse(args.left, config.vocabulary)
    right = parse(args.right, config.vocabulary)
    labeler = PairLabeler(
        config, max_domain=args.max_domain, max_resolution_steps=args.max_steps
    )
    if not args.explain:
        print(labeler.label(left, right))
        return 0
    info = labeler.explain(left, right)
    print(f"left:  {sentence_text(left)}")
    print(f"right: {sentence_text(right)}")
    print(f"relation: {info['label']}")
    print("filtered axioms:")
    if info["axioms"]:
        for formula in info["axioms"]:
            print(f"  {render_formula(formula)}")
    else:
        print("  (none apply to this pair)")
    print("satisfiability bits:")
    for name, bit, verdict in zip(_BIT_NAMES, info["bits"], info["verdicts"]):
        evidence = (
            f"model of size {verdict.model.size}"
            if bit
            else f"refutation in {len(verdict.refutation)} steps"
        )
        print(f"  {name + ':':22s}{'sat' if bit else 'unsat':6s}({evidence})")
    for name, bit, verdict in zip(_BIT_NAMES, info["bits"], info["verdicts"]):
        print(f"--- {name} ---")
        if bit:
            print(render_model(verdict.model).rstrip("\n"))
        else:
            print(render_refutation(verdict.refutation).rstrip("\n"))
    return 0


# --- train ------------------------------------------------------------------------

def _load_split(data_dir: Path):
    train = read_dataset(data_dir / "train.tsv")
    test = read_dataset(data_dir / "test.tsv")
    return train, test


def _train_once(args, train_pairs, test_pairs, vocab, table, seed, run_dir):
    run_dir.mkdir(parents=True, exist_ok=True)
    metrics_path = run_dir / "metrics.tsv"
    with open(metrics_path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("epoch\tloss\ttrain_acc\ttest_acc\n")

        def on_epoch(row):
            test = "" if row.test_accuracy is None else f"{row.test_accuracy:.4f}"
            fh.write(
                f"{row.epoch}\t{row.loss:.6f}\t{row.train_accuracy:.4f}\t{test}\n"
            )
            fh.flush()

        result = net.train(
            args.model,
            train_pairs,
            test_pairs,
            epochs=args.epochs,
            batch_size=args.batch,
            seed=seed,
            vocab=vocab,
            embeddings=table,
            freeze_embeddings=args.freeze_embeddings if table is not None else False,
            hidden=args.hidden,
            embed_dim=args.embed_dim,
            rho=args.rho,
            eps=args.eps,
            on_epoch=on_epoch,
        )
    net.save_checkpoint(
        run_dir / "model.ckpt",
        result.config,
        result.params,
        result.optimizer,
        epoch=args.epochs,
        seed=seed,
    )
    scored = net.evaluate(result.config, result.params, test_pairs)
    (run_dir / "confusion.tsv").write_text(
        net.confusion_table(scored), encoding="utf-8"
    )
    return result


def cmd_train(args) -> int:
    data_dir = Path(args.data)
    train_pairs, test_pairs = _load_split(data_dir)
    vocab = net.dataset_vocab(train_pairs, test_pairs)
    table = (
        net.load_pretrained_embeddings(args.embeddings, vocab)
        if args.embeddings
        else None
    )
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    _run_config(args).save(out)
    finals = []
    for offset in range(args.runs):
        seed = args.seed + offset
        started = time.time()
        result = _train_once(
            args, train_pairs, test_pairs, vocab, table, seed, out / f"run-{seed}"
        )
        elapsed = time.time() - started
        finals.append(
            (seed, result.final_train_accuracy, result.final_test_accuracy, elapsed)
        )
        print(
            f"seed {seed}: train {result.final_train_accuracy:.2f} "
            f"test {result.final_test_accuracy:.2f} ({elapsed:.0f}s)"
        )
    trains = np.array([row[1] for row in finals])
    tests = np.array([row[2] for row in finals])
    lines = ["seed\ttrain_accuracy\ttest_accuracy\tseconds"]
    lines += [f"{seed}\t{tr:.4f}\t{te:.4f}\t{sec:.1f}" for seed, tr, te, sec in finals]
    lines.append(f"mean\t{trains.mean():.4f}\t{tests.mean():.4f}\t")
    lines.append(f"std\t{trains.std():.4f}\t{tests.std():.4f}\t")
    (out / "summary.tsv").write_text("\n".join(lines) + "\n", encoding="utf-8")
    print(
        f"{args.model}: train {trains.mean():.2f} ± {trains.std():.2f}, "
        f"test {tests.mean():.2f} ± {tests.std():.2f} over {args.runs} run(s)"
    )
    return 0


# --- eval -------------------------------------------------------------------------

def _normalized_table(scored) -> str:
    rows = scored.normalized()
    lines = ["target\\prediction\t" + "\t".join(RELATIONS)]
    for i, rel in enumerate(RELATIONS):
        lines.append(rel + "\t" + "\t".join(f"{v:.6f}" for v in rows[i]))
    return "\n".join(lines) + "\n"


def cmd_eval(args) -> int:
    checkpoint = net.load_checkpoint(args.checkpoint)
    pairs = read_dataset(args.data)
    scored = net.evaluate(checkpoint.config, checkpoint.params, pairs)
    print(f"accuracy: {scored.accuracy:.2f} over {len(pairs)} pairs")
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        (out / "accuracy.tsv").write_text(
            f"pairs\t{len(pairs)}\naccuracy\t{scored.accuracy:.4f}\n",
            encoding="utf-8",
        )
        (out / "confusion.tsv").write_text(
            net.confusion_table(scored), encoding="utf-8"
        )
        (out / "confusion_normalized.tsv").write_text(
            _normalized_table(scored), encoding="utf-8"
        )
        _run_config(args).save(out)
    return 0


# --- zeroshot ---------------------------------------------------------------------

def cmd_zeroshot(args) -> int:
    checkpoint = net.load_checkpoint(args.checkpoint)
    sub = load_substitution(args.sub)
    embedding_path = args.embeddings
    if embedding_path is None and sub.embedding_source is not None:
        source = Path(sub.embedding_source)
        if not source.is_absolute():
            # relative sources resolve against the spec file, not the cwd
            source = Path(args.sub).resolve().parent / source
        embedding_path = source
    if embedding_path is None:
        raise ConfigError(
            "no embedding file: pass --embeddings or set embedding_source "
            "in the substitution spec"
        )
    pairs = read_dataset(args.data)
    config = _language(args)
    substituted, originals = apply_substitution(pairs, sub, config.vocabulary)
    if not originals:
        raise DataError("no pair in the dataset contains a substituted word")
    known = set(checkpoint.config.vocab)
    new_words = tuple(sorted(set(sub.mapping.values()) - known))
    if not new_words:
        raise DataError(
            "every replacement word is already in the checkpoint vocabulary"
        )
    new_rows = net.load_pretrained_embeddings(embedding_path, new_words)
    if new_rows.shape[1] != checkpoint.config.embed_dim:
        raise DataError(
            f"embedding file has {new_rows.shape[1]}-dim vectors but the "
            f"checkpoint uses {checkpoint.config.embed_dim}"
        )
    extended_config = dataclasses.replace(
        checkpoint.config, vocab=checkpoint.config.vocab + new_words
    )
    extended_params = dict(checkpoint.params)
    extended_params["embed"] = np.vstack([checkpoint.params["embed"], new_rows])
    before = net.evaluate(checkpoint.config, checkpoint.params, originals)
    after = net.evaluate(extended_config, extended_params, substituted)
    index = {w: i for i, w in enumerate(extended_config.vocab)}
    lines = [
        "word\treplacement\tcosine_distance\tfragment_pairs"
        "\taccuracy_before\taccuracy_after"
    ]
    for word in sorted(sub.mapping):
        replacement = sub.mapping[word]
        distance = net.cosine_distance(
            checkpoint.params["embed"][index[word]],
            extended_params["embed"][index[replacement]],
        )
        lines.append(
            f"{word}\t{replacement}\t{distance:.4f}\t{len(originals)}"
            f"\t{before.accuracy:.4f}\t{after.accuracy:.4f}"
        )
        print(
            f"{word} -> {replacement}: cos_dist {distance:.2f}, "
            f"before {before.accuracy:.2f}, after {after.accuracy:.2f} "
            f"({len(originals)} pairs)"
        )
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        (out / "zeroshot.tsv").write_text("\n".join(lines) + "\n", encoding="utf-8")
        _run_config(args).save(out)
    return 0


# --- parser -----------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="folnli",
        description=(
            "Generate logically labeled sentence pairs, inspect the prover, "
            "and train recurrent entailment classifiers."
        ),
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)

    gen = sub.add_parser("generate", help="sample and label a dataset")
    gen.add_argument("--out", required=True, help="output directory")
    gen.add_argument("--train", type=int, default=30000)
    gen.add_argument("--test", type=int, default=5000)
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("--train-lengths", default=None,
                     help="comma-separated sentence lengths, e.g. 5,7,8")
    gen.add_argument("--test-lengths", default=None)
    gen.add_argument("--keep-independence", type=float,
                     default=DEFAULT_KEEP_INDEPENDENCE,
                     help="probability of keeping each '#' pair (1 = keep all)")
    gen.add_argument("--config", default=None, help="taxonomy JSON")
    gen.add_argument("--five-neg-slots", action="store_true",
                     help="also negate the object determiner")
    gen.add_argument("--workers", type=int, default=1)
    gen.add_argument("--chunk-size", type=int, default=256)
    gen.add_argument("--max-domain", type=int, default=4)
    gen.add_argument("--max-steps", type=int, default=50000)
    gen.add_argument("--max-undecided", type=float, default=0.01,
                     help="fail when the undecided fraction exceeds this")
    gen.set_defaults(func=cmd_generate)

    prove = sub.add_parser("prove", help="label one sentence pair")
    prove.add_argument("left")
    prove.add_argument("right")
    prove.add_argument("--explain", action="store_true",
                       help="print axioms, bits, and models or refutations")
    prove.add_argument("--config", default=None)
    prove.add_argument("--max-domain", type=int, default=4)
    prove.add_argument("--max-steps", type=int, default=50000)
    prove.set_defaults(func=cmd_prove)

    train = sub.add_parser("train", help="train a classifier on a dataset")
    train.add_argument("--data", required=True,
                       help="directory with train.tsv and test.tsv")
    train.add_argument("--out", required=True)
    train.add_argument("--model", required=True,
                       choices=("srn", "gru", "lstm", "sum"))
    train.add_argument("--epochs", type=int, default=50)
    train.add_argument("--batch", type=int, default=32)
    train.add_argument("--seed", type=int, default=0)
    train.add_argument("--runs", type=int, default=1,
                       help="train with seeds seed..seed+N-1 and summarize")
    train.add_argument("--hidden", type=int, default=128)
    train.add_argument("--embed-dim", type=int, default=25)
    train.add_argument("--rho", type=float, default=0.95,
                       help="AdaDelta accumulator decay")
    train.add_argument("--eps", type=float, default=1e-6,
                       help="AdaDelta numerical floor")
    train.add_argument("--embeddings", default=None,
                       help="pretrained vector file; replaces the embedding table")
    train.add_argument("--freeze-embeddings", default=True,
                       action=argparse.BooleanOptionalAction,
                       help="keep pretrained embeddings constant")
    train.set_defaults(func=cmd_train)

    evaluate = sub.add_parser("eval", help="score a checkpoint on a dataset")
    evaluate.add_argument("--checkpoint", required=True)
    evaluate.add_argument("--data", required=True, help="dataset TSV")
    evaluate.add_argument("--out", default=None)
    evaluate.set_defaults(func=cmd_eval)

    zeroshot = sub.add_parser(
        "zeroshot", help="evaluate a checkpoint under word substitution"
    )
    zeroshot.add_argument("--checkpoint", required=True)
    zeroshot.add_argument("--data", required=True, help="dataset TSV")
    zeroshot.add_argument("--sub", required=True, help="substitution spec JSON")
    zeroshot.add_argument("--embeddings", default=None,
                          help="pretrained vector file with the new words")
    zeroshot.add_argument("--config", default=None)
    zeroshot.add_argument("--out", default=None)
    zeroshot.set_defaults(func=cmd_zeroshot)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except FolnliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        for kind, code in _EXIT_BY_TYPE:
            if isinstance(exc, kind):
                return code
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
