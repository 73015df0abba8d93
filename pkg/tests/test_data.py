"""Dataset generation, statistics, substitution, and file format tests."""

import pytest

from folnli import classify_pair, default_config, parse
from folnli.data import (
    GenerationResult,
    LabeledPair,
    SplitSpec,
    SubstitutionSpec,
    apply_substitution,
    class_distribution,
    distribution_table,
    generate_dataset,
    load_substitution,
    read_dataset,
    sentence_count_by_length,
    write_dataset,
)
from folnli.errors import ConfigError, DataError
from folnli.lang import restrict_config
from folnli.prover import PairLabeler


@pytest.fixture(scope="module")
def small_config():
    return restrict_config(
        default_config(), ("Romans", "Italians", "Germans"), ("love", "like")
    )


@pytest.fixture(scope="module")
def small_result(small_config):
    return generate_dataset(SplitSpec(train_size=220, test_size=60, seed=7), small_config)


def test_counts_by_length_default_vocabulary():
    counts = sentence_count_by_length(default_config().vocabulary)
    assert counts == {5: 400, 6: 1600, 7: 2400, 8: 1600, 9: 400}
    assert sum(counts.values()) == 6400
    with_object_slot = sentence_count_by_length(
        default_config().vocabulary, object_det_negation=True
    )
    assert sum(with_object_slot.values()) == 12800
    assert set(with_object_slot) == set(range(5, 11))


def test_generation_meets_sizes_without_duplicates(small_result):
    assert len(small_result.train) == 220
    assert len(small_result.test) == 60
    keys = {
        (p.left, p.right) for p in small_result.train + small_result.test
    }
    assert len(keys) == 280
    assert small_result.undecided == []
    assert small_result.attempts >= 280


def test_generation_is_deterministic(small_config, small_result, tmp_path):
    again = generate_dataset(
        SplitSpec(train_size=220, test_size=60, seed=7), small_config
    )
    assert again.train == small_result.train
    assert again.test == small_result.test

    first, second = tmp_path / "a.tsv", tmp_path / "b.tsv"
    write_dataset(small_result.train, first)
    write_dataset(again.train, second)
    assert first.read_bytes() == second.read_bytes()


def test_generation_chunking_does_not_change_output(small_config, small_result):
    rechunked = generate_dataset(
        SplitSpec(train_size=220, test_size=60, seed=7), small_config, chunk_size=17
    )
    assert rechunked.train == small_result.train
    assert rechunked.test == small_result.test


def test_parallel_generation_matches_serial(small_config, small_result):
    parallel = generate_dataset(
        SplitSpec(train_size=220, test_size=60, seed=7), small_config, workers=2
    )
    assert parallel.train == small_result.train
    assert parallel.test == small_result.test


def test_stored_labels_match_the_prover(small_config, small_result):
    labeler = PairLabeler(small_config)
    for p in small_result.train[::20] + small_result.test[::20]:
        assert classify_pair(p.left, p.right, labeler=labeler) == p.relation


def test_length_split_filters_every_pair(small_config):
    spec = SplitSpec(
        train_size=120,
        test_size=40,
        train_lengths=(5, 7, 8),
        test_lengths=(6, 9),
        seed=11,
    )
    result = generate_dataset(spec, small_config)
    assert all(
        p.left.length in {5, 7, 8} and p.right.length in {5, 7, 8}
        for p in result.train
    )
    assert all(
        p.left.length in {6, 9} and p.right.length in {6, 9} for p in result.test
    )
    train_keys = {(p.left, p.right) for p in result.train}
    test_keys = {(p.left, p.right) for p in result.test}
    assert not train_keys & test_keys


def test_infeasible_requests_fail_before_sampling(small_config):
    with pytest.raises(DataError):
        generate_dataset(SplitSpec(train_size=10**9, test_size=0), small_config)
    with pytest.raises(DataError):
        generate_dataset(
            SplitSpec(train_size=10**6, test_size=0, train_lengths=(5,)),
            small_config,
        )


def test_undecided_pairs_are_skipped_and_reported(small_config):
    tiny = PairLabeler(small_config, max_domain=4, max_resolution_steps=1)
    result = generate_dataset(
        SplitSpec(train_size=40, test_size=10, seed=3),
        small_config,
        labeler=tiny,
        max_domain=4,
        max_resolution_steps=1,
    )
    assert len(result.train) == 40 and len(result.test) == 10
    assert result.undecided, "some pairs need resolution steps and must be skipped"
    stored = {(p.left, p.right) for p in result.train + result.test}
    assert all(pair not in stored for pair in result.undecided)


def test_split_spec_validation():
    assert SplitSpec(train_lengths=[5, 7, 8]).train_lengths == frozenset({5, 7, 8})
    with pytest.raises(ConfigError):
        SplitSpec(train_size=-1)
    with pytest.raises(ConfigError):
        SplitSpec(keep_independence=0.0)
    with pytest.raises(ConfigError):
        SplitSpec(keep_independence=1.5)


def test_rejecting_independence_flattens_the_distribution(small_config):
    spec = SplitSpec(120, 0, seed=9, keep_independence=0.1)
    result = generate_dataset(spec, small_config)
    assert len(result.train) == 120
    assert result.independence_rejected > 0
    flattened = class_distribution(result.train)["#"]
    raw = class_distribution(
        generate_dataset(SplitSpec(120, 0, seed=9), small_config).train
    )["#"]
    assert flattened < raw - 0.2
    # the per-pair coin keeps rejection independent of chunk size
    rerun = generate_dataset(spec, small_config, chunk_size=13)
    assert rerun.train == result.train


def test_class_distribution_sums_to_one(small_result):
    dist = class_distribution(small_result.train)
    assert set(dist) == {"=", "<", ">", "^", "|", "v", "#"}
    assert abs(sum(dist.values()) - 1.0) < 1e-12
    assert max(dist, key=dist.get) == "#"
    with pytest.raises(DataError):
        class_distribution([])


def test_distribution_table_layout(small_result):
    table = distribution_table(small_result.train, small_result.test)
    lines = table.strip().split("\n")
    assert lines[0] == "relation\ttrain_freq\ttest_freq"
    assert len(lines) == 8
    assert all(len(line.split("\t")) == 3 for line in lines)


# --- substitutions ----------------------------------------------------------------

def _pair(relation, left, right):
    return LabeledPair(relation, parse(left), parse(right))


SAMPLE = [
    _pair("<", "all Europeans like some Italians",
          "not some Italians not like some Europeans"),
    _pair("#", "all children not hate all Romans",
          "all not Italians not fear all Romans"),
    _pair("=", "some Germans love all children",
          "some Germans love all children"),
]


def test_substitution_rewrites_only_matching_pairs():
    substituted, originals = apply_substitution(SAMPLE, {"children": "kids"})
    assert [p.relation for p in originals] == ["#", "="]
    assert originals == SAMPLE[1:]
    assert substituted[0].left.subj_noun == "kids"
    assert substituted[1].left.obj_noun == "kids"
    assert substituted[1].right.obj_noun == "kids"
    assert [p.relation for p in substituted] == ["#", "="]


def test_substitution_replaces_several_words_jointly():
    substituted, originals = apply_substitution(
        SAMPLE, {"Romans": "Parisians", "Italians": "French"}
    )
    assert len(originals) == 2
    first = substituted[0]
    assert first.left.obj_noun == "French"
    assert first.right.subj_noun == "French"
    assert first.right.obj_noun == "Europeans"


def test_substitution_of_a_verb():
    substituted, _ = apply_substitution(SAMPLE, {"love": "adore"})
    assert [p.left.verb for p in substituted] == ["adore"]


def test_substitution_validates_words():
    with pytest.raises(ConfigError):
        apply_substitution(SAMPLE, {"unicorns": "kids"})
    with pytest.raises(ConfigError):
        apply_substitution(SAMPLE, {"children": "Romans"})
    with pytest.raises(ConfigError):
        apply_substitution(SAMPLE, {"all": "most"})


def test_substitution_spec_round_trip(tmp_path):
    path = tmp_path / "sub.json"
    path.write_text(
        '{"mapping": {"children": "kids"}, "embedding_source": "vectors.txt"}'
    )
    spec = load_substitution(path)
    assert spec == SubstitutionSpec({"children": "kids"}, "vectors.txt")
    substituted, _ = apply_substitution(SAMPLE, spec)
    assert substituted[0].left.subj_noun == "kids"

    bad = tmp_path / "bad.json"
    bad.write_text('{"mapping": {}}')
    with pytest.raises(ConfigError):
        load_substitution(bad)
    with pytest.raises(ConfigError):
        load_substitution(tmp_path / "missing.json")


# --- file format -------------------------------------------------------------------

def test_dataset_file_round_trip(small_result, tmp_path):
    path = tmp_path / "train.tsv"
    write_dataset(small_result.train, path)
    assert read_dataset(path) == small_result.train
    rewritten = tmp_path / "rewrite.tsv"
    write_dataset(read_dataset(path), rewritten)
    assert rewritten.read_bytes() == path.read_bytes()


def test_substituted_dataset_round_trips_with_unknown_words(tmp_path):
    substituted, _ = apply_substitution(SAMPLE, {"children": "kids"})
    path = tmp_path / "sub.tsv"
    write_dataset(substituted, path)
    assert read_dataset(path) == substituted


def test_example_line_parses(tmp_path):
    line = ("<\tall Europeans like some Italians\t"
            "not some Italians not like some Europeans\n")
    path = tmp_path / "line.tsv"
    path.write_text(line, encoding="utf-8")
    assert read_dataset(path) == [SAMPLE[0]]


def test_malformed_lines_report_line_numbers(tmp_path):
    path = tmp_path / "bad.tsv"
    path.write_text("<\ta\tb\tc\td\te\tf\n", encoding="utf-8")
    with pytest.raises(DataError, match="1"):
        read_dataset(path)

    path.write_text(
        "<\tall Europeans like some Italians\tnot some Italians not like some Europeans\n"
        "?\tall Europeans like some Italians\tnot some Italians not like some Europeans\n",
        encoding="utf-8",
    )
    with pytest.raises(DataError, match="2"):
        read_dataset(path)

    path.write_text("<\tall Europeans like\tsome Italians hate all Romans\n")
    with pytest.raises(DataError):
        read_dataset(path)
