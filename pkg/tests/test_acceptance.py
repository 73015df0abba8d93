"""Acceptance gate: one test per shipped claim.

The quick claims (logic equivalence, worked examples, pair-space size,
gradient checks, determinism) run on every pytest invocation.  The
full-scale training claims consume the artifacts that `bash
tools/reproduce.sh` leaves under runs/, and skip with a pointer when
those artifacts are absent, because rebuilding them takes hours of CPU
time on one core.
"""

import itertools
import time
from pathlib import Path

import numpy as np
import pytest

from folnli import (
    BruteForceLabeler,
    PairLabeler,
    classify_pair,
    default_config,
    enumerate_sentences,
    net,
    parse,
    restrict_config,
)
from folnli.cli import main as cli

ROOT = Path(__file__).resolve().parent.parent
RUNS = ROOT / "runs"


def summary(path: Path) -> dict:
    """summary.tsv as {seed_or_stat: (train, test, seconds_or_None)}."""
    rows = {}
    for line in path.read_text().splitlines()[1:]:
        key, train, test, seconds = line.split("\t")
        rows[key] = (float(train), float(test), float(seconds) if seconds else None)
    return rows


def artifact(relative: str) -> Path:
    path = RUNS / relative
    if not path.exists():
        pytest.skip(
            f"needs runs/{relative}; build the training artifacts with "
            "`bash tools/reproduce.sh` (several hours on one CPU core)"
        )
    return path


def test_labeler_matches_brute_force_on_exhaustive_sublanguage():
    config = restrict_config(default_config(), ("Romans", "Italians"), ("love",))
    sentences = list(enumerate_sentences(config.vocabulary))
    assert len(sentences) == 256
    labeler = PairLabeler(config)
    reference = BruteForceLabeler(config, max_domain=3)
    started = time.time()
    disagreements = sum(
        labeler.label(s1, s2) != reference.label(s1, s2)
        for s1, s2 in itertools.product(sentences, repeat=2)
    )
    elapsed = time.time() - started
    assert disagreements == 0
    assert elapsed < 300.0


def test_worked_example_pairs_label_exactly():
    pairs = [
        ("<", "all Europeans like some Italians",
         "not some Italians not like some Europeans"),
        ("v", "all Germans not hate all not Italians",
         "not all not Italians love some not Italians"),
        ("#", "all children not hate all Romans",
         "all not Italians not fear all Romans"),
        ("|", "some not Europeans like all not Italians",
         "not some not Italians like all not Italians"),
        ("^", "not all not Germans not fear all Europeans",
         "not some not Germans fear all Europeans"),
    ]
    for expected, left, right in pairs:
        assert classify_pair(parse(left), parse(right)) == expected


def test_pair_space_size():
    count = sum(1 for _ in enumerate_sentences())
    assert count == 6400
    assert abs(count**2 - 41e6) <= 0.10 * 41e6


def test_full_scale_accuracy():
    gru = summary(artifact("table4/gru/summary.tsv"))
    lstm = summary(artifact("table4/lstm/summary.tsv"))
    srn = summary(artifact("table4/srn/summary.tsv"))
    sum_nn = summary(artifact("table4/sum/summary.tsv"))
    for rows in (gru, lstm, srn, sum_nn):
        seeds = [k for k in rows if k not in ("mean", "std")]
        assert len(seeds) == 5
        for seed in seeds:
            assert rows[seed][2] <= 7200.0
    assert gru["mean"][1] >= 91.0
    assert lstm["mean"][1] >= 89.0
    assert srn["mean"][1] >= 82.0
    assert sum_nn["mean"][1] <= 60.0
    assert gru["mean"][0] >= 99.5
    assert lstm["mean"][0] >= 99.5


def test_length_generalization():
    gru = summary(artifact("length/gru/summary.tsv"))["mean"][1]
    lstm = summary(artifact("length/lstm/summary.tsv"))["mean"][1]
    srn = summary(artifact("length/srn/summary.tsv"))["mean"][1]
    assert gru >= 84.0
    assert lstm >= 82.0
    assert srn <= 50.0
    assert gru - srn >= 30.0


def test_gradient_suite():
    started = time.time()
    checked = 0
    for kind, seed in itertools.product(("srn", "gru", "lstm", "sum"), range(5)):
        rng = np.random.default_rng(seed)
        vocab = tuple(f"w{i}" for i in range(6))
        config = net.ModelConfig(
            kind, vocab, embed_dim=5, hidden=8, sentence_dim=4, comparison_dim=9
        )
        params = net.init_params(config, seed)
        idx = rng.integers(0, len(vocab), size=(6, 4))
        mask = np.ones((6, 4))
        mask[0, 3] = 0.0
        mask[4, 2:] = 0.0
        labels = rng.integers(0, config.classes, size=3)
        worst = net.gradient_check(config, params, idx, mask, labels)
        assert worst <= 1e-4, (kind, seed, worst)
        checked += 1
    assert checked >= 20
    assert time.time() - started < 60.0


def zeroshot_row(name: str) -> dict:
    path = artifact(f"zeroshot/{name}/zeroshot.tsv")
    line = path.read_text().splitlines()[1]
    word, replacement, distance, _, before, after = line.split("\t")
    return {
        "word": word,
        "replacement": replacement,
        "distance": float(distance),
        "before": float(before),
        "after": float(after),
    }


def test_zero_shot_pattern():
    expected_distance = {
        "kids": 0.21, "adore": 0.57, "dread": 0.39, "detest": 0.56,
    }
    for name in ("kids", "adore", "dread"):
        row = zeroshot_row(name)
        assert row["distance"] == pytest.approx(expected_distance[name], abs=0.05)
        assert row["before"] - row["after"] <= 10.0, row
    detest = zeroshot_row("detest")
    assert detest["distance"] == pytest.approx(0.56, abs=0.05)
    assert detest["before"] - detest["after"] >= 25.0, detest


def test_generate_and_train_are_deterministic(tmp_path):
    gen = ["generate", "--train", "300", "--test", "60", "--seed", "17",
           "--keep-independence", "1.0"]
    for name in ("a", "b"):
        assert cli([*gen, "--out", str(tmp_path / name)]) == 0
    for split in ("train.tsv", "test.tsv", "distribution.tsv"):
        assert (tmp_path / "a" / split).read_bytes() == \
            (tmp_path / "b" / split).read_bytes()
    fit = ["train", "--data", str(tmp_path / "a"), "--model", "sum",
           "--epochs", "3", "--batch", "16", "--seed", "4"]
    for name in ("ta", "tb"):
        assert cli([*fit, "--out", str(tmp_path / name)]) == 0
    assert (tmp_path / "ta" / "run-4" / "metrics.tsv").read_bytes() == \
        (tmp_path / "tb" / "run-4" / "metrics.tsv").read_bytes()
