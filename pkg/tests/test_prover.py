"""Satisfiability engine and pair labeling tests."""

import dataclasses

import numpy as np
import pytest

from folnli import classify_pair, default_config
from folnli.errors import UndecidedError
from folnli.lang import generate_sentence, restrict_config, sentence_text
from folnli.prover import (
    BruteForceLabeler,
    Model,
    PairLabeler,
    canonical_clause,
    check_sat,
    factors,
    label_from_bits,
    resolvents,
    subsumes,
    unify,
    verify_refutation,
)
from folnli.relations import converse


def v(name):
    return ("v", name)


def fn(name, *args):
    return ("f", name, tuple(args))


A_CONST = fn("a")
B_CONST = fn("b")


# --- unification ---------------------------------------------------------------

def test_unify_binds_variable_to_constant():
    assert unify((v("x"),), (A_CONST,)) == {v("x"): A_CONST}


def test_unify_threads_bindings_across_positions():
    theta = unify((fn("g", v("x")), v("x")), (fn("g", A_CONST), A_CONST))
    assert theta == {v("x"): A_CONST}
    assert unify((v("x"), v("x")), (A_CONST, B_CONST)) is None


def test_unify_occurs_check():
    assert unify((v("x"),), (fn("g", v("x")),)) is None


def test_unify_rejects_different_heads():
    assert unify((fn("g", v("x")),), (fn("h", v("y")),)) is None


# --- subsumption and inference rules ---------------------------------------------

def test_subsumes_instance_with_extra_literals():
    general = frozenset({(True, "P", (v("x"),))})
    specific = frozenset({(True, "P", (A_CONST,)), (True, "Q", (A_CONST,))})
    assert subsumes(general, specific)
    assert not subsumes(specific, general)


def test_subsumes_requires_consistent_bindings():
    c = frozenset({(True, "P", (v("x"), v("x")))})
    d = frozenset({(True, "P", (A_CONST, B_CONST))})
    assert not subsumes(c, d)


def test_factor_merges_unifiable_literals():
    clause = frozenset({(True, "P", (v("x"),)), (True, "P", (A_CONST,))})
    results = [c for c, _ in factors(clause)]
    assert frozenset({(True, "P", (A_CONST,))}) in results


def test_resolvent_of_unit_clauses_is_empty():
    c1 = frozenset({(True, "P", (A_CONST,))})
    c2 = frozenset({(False, "P", (v("x"),))})
    assert [c for c, _ in resolvents(c1, c2)] == [frozenset()]


def test_resolvent_instantiates_remaining_literals():
    c1 = frozenset({(True, "P", (A_CONST,))})
    c2 = frozenset({(False, "P", (v("x"),)), (True, "Q", (v("x"),))})
    results = [c for c, _ in resolvents(c1, c2)]
    assert frozenset({(True, "Q", (A_CONST,))}) in results


# --- check_sat -------------------------------------------------------------------

def test_check_sat_refutes_and_verifies():
    clauses = [
        frozenset({(True, "P", (A_CONST,))}),
        frozenset({(False, "P", (v("x"),))}),
    ]
    verdict = check_sat(clauses)
    assert verdict.status == "unsat"
    assert verdict.refutation[-1].clause == frozenset()
    assert verify_refutation(verdict.refutation, clauses)


def test_check_sat_finds_verified_model():
    clauses = [frozenset({(False, "P", (v("x"),)), (True, "Q", (v("x"),))})]
    verdict = check_sat(clauses)
    assert verdict.status == "sat"
    assert verdict.model is not None
    assert verdict.model.satisfies(clauses)


def test_check_sat_reports_sat_by_saturation_without_models():
    clauses = [frozenset({(False, "P", (v("x"),)), (True, "Q", (v("x"),))})]
    verdict = check_sat(clauses, max_domain=0)
    assert verdict.status == "sat"
    assert verdict.model is None


def test_check_sat_undecided_when_budgets_exhausted():
    clauses = [
        frozenset({(False, "P", (v("x"),)), (True, "P", (fn("g", v("x")),))}),
        frozenset({(True, "P", (A_CONST,))}),
        frozenset({(False, "P", (fn("g", fn("g", A_CONST)),)), (True, "Q", (A_CONST,))}),
    ]
    verdict = check_sat(clauses, max_domain=0, max_resolution_steps=2)
    assert verdict.status == "undecided"


def test_verify_refutation_rejects_tampered_steps():
    clauses = [
        frozenset({(True, "P", (A_CONST,))}),
        frozenset({(False, "P", (v("x"),)), (True, "Q", (v("x"),))}),
        frozenset({(False, "Q", (v("x"),))}),
    ]
    verdict = check_sat(clauses)
    steps = verdict.refutation
    assert verify_refutation(steps, clauses)

    derived = next(i for i, s in enumerate(steps) if s.rule != "input")
    forged = dataclasses.replace(
        steps[derived], clause=frozenset({(True, "Q", (B_CONST,))})
    )
    assert not verify_refutation(steps[:derived] + [forged] + steps[derived + 1:], clauses)

    foreign = dataclasses.replace(
        next(s for s in steps if s.rule == "input"),
        clause=frozenset({(True, "R", (A_CONST,))}),
    )
    assert not verify_refutation([foreign] + steps[1:], clauses)

    assert not verify_refutation(steps[:-1], clauses)
    assert not verify_refutation([], clauses)


def test_model_checks_universal_clauses():
    clause = frozenset({(True, "A", (v("x"),))})
    partial = Model(size=2, preds={"A": {(0,)}}, funcs={})
    full = Model(size=2, preds={"A": {(0,), (1,)}}, funcs={})
    assert not partial.satisfies([clause])
    assert full.satisfies([clause])


# --- bit mapping -------------------------------------------------------------------

def test_label_from_bits_covers_all_sixteen_cases():
    expected = {
        (False, False): "=",
        (False, True): "<",
        (True, False): ">",
    }
    for b1 in (False, True):
        for b2 in (False, True):
            for b3 in (False, True):
                for b4 in (False, True):
                    got = label_from_bits(b1, b2, b3, b4)
                    if (b2, b3) in expected:
                        assert got == expected[(b2, b3)]
                    elif not b1 and not b4:
                        assert got == "^"
                    elif not b1:
                        assert got == "|"
                    elif not b4:
                        assert got == "v"
                    else:
                        assert got == "#"


# --- pair labeling ----------------------------------------------------------------

EXAMPLE_PAIRS = [
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


@pytest.fixture(scope="module")
def labeler():
    return PairLabeler()


@pytest.mark.parametrize("relation,left,right", EXAMPLE_PAIRS)
def test_example_pairs(labeler, relation, left, right):
    assert labeler.label(left, right) == relation


def test_classify_pair_convenience_matches_labeler(labeler):
    _, left, right = EXAMPLE_PAIRS[0]
    assert classify_pair(left, right, labeler=labeler) == "<"


def test_identical_sentences_are_equivalent(labeler):
    assert labeler.label(EXAMPLE_PAIRS[0][1], EXAMPLE_PAIRS[0][1]) == "="


def test_label_agrees_with_bits(labeler):
    for relation, left, right in EXAMPLE_PAIRS:
        assert label_from_bits(*labeler.bits(left, right)) == relation


def test_explain_reports_bits_axioms_and_evidence(labeler):
    info = labeler.explain("all Europeans like some Italians",
                           "not some Italians not like some Europeans")
    assert info["label"] == "<"
    assert info["bits"][1] is False
    assert info["axioms"], "the pair shares related words, some axioms apply"
    for bit, verdict in zip(info["bits"], info["verdicts"]):
        if bit:
            assert verdict.status == "sat"
            assert verdict.model is not None
        else:
            assert verdict.status == "unsat"
            assert verdict.refutation[-1].clause == frozenset()


def test_converse_of_swapped_pair(labeler):
    rng = np.random.default_rng(611)
    vocab = labeler.config.vocabulary
    for _ in range(30):
        s1 = generate_sentence(rng, vocab)
        s2 = generate_sentence(rng, vocab)
        assert labeler.label(s2, s1) == converse(labeler.label(s1, s2))


NEGATE_RIGHT = {"=": "^", "^": "=", "<": "|", "|": "<", ">": "v", "v": ">", "#": "#"}
NEGATE_LEFT = {"=": "^", "^": "=", "<": "v", "v": "<", ">": "|", "|": ">", "#": "#"}


def test_determiner_negation_maps_labels(labeler):
    # negating one side complements its model set, which permutes the four
    # bits and hence the label in a fixed pattern
    rng = np.random.default_rng(612)
    vocab = labeler.config.vocabulary
    for _ in range(30):
        s1 = generate_sentence(rng, vocab)
        s2 = generate_sentence(rng, vocab)
        base = labeler.label(s1, s2)
        flip2 = dataclasses.replace(s2, subj_det_neg=not s2.subj_det_neg)
        assert labeler.label(s1, flip2) == NEGATE_RIGHT[base]
        flip1 = dataclasses.replace(s1, subj_det_neg=not s1.subj_det_neg)
        assert labeler.label(flip1, s2) == NEGATE_LEFT[base]


def test_independence_is_the_modal_label(labeler):
    rng = np.random.default_rng(613)
    vocab = labeler.config.vocabulary
    counts = {}
    for _ in range(120):
        s1 = generate_sentence(rng, vocab)
        s2 = generate_sentence(rng, vocab)
        rel = labeler.label(s1, s2)
        counts[rel] = counts.get(rel, 0) + 1
    assert max(counts, key=counts.get) == "#"


def test_undecided_pair_raises(labeler):
    tiny = PairLabeler(max_domain=0, max_resolution_steps=5)
    with pytest.raises(UndecidedError):
        tiny.label(EXAMPLE_PAIRS[0][1], EXAMPLE_PAIRS[0][2])


# --- brute-force reference ---------------------------------------------------------

def two_noun_config():
    return restrict_config(default_config(), ("Romans", "Italians"), ("love",))


def test_prover_agrees_with_reference_on_random_pairs():
    cfg = two_noun_config()
    oracle = BruteForceLabeler(cfg, max_domain=3)
    labeler = PairLabeler(cfg)
    rng = np.random.default_rng(614)
    for _ in range(60):
        s1 = generate_sentence(rng, cfg.vocabulary)
        s2 = generate_sentence(rng, cfg.vocabulary)
        text = f"{sentence_text(s1)} // {sentence_text(s2)}"
        assert labeler.label(s1, s2) == oracle.label(s1, s2), text


def test_reference_mismatches_only_beyond_its_domain_bound():
    # with more nouns, a pair can be satisfiable only in a model larger
    # than the reference enumerates; the prover must then hold a verified
    # model of that size, and no other kind of disagreement may occur
    cfg = restrict_config(
        default_config(), ("Romans", "Italians", "Germans", "children"), ("love",)
    )
    oracle = BruteForceLabeler(cfg, max_domain=3)
    labeler = PairLabeler(cfg)
    rng = np.random.default_rng(615)
    for _ in range(80):
        s1 = generate_sentence(rng, cfg.vocabulary)
        s2 = generate_sentence(rng, cfg.vocabulary)
        if labeler.label(s1, s2) == oracle.label(s1, s2):
            continue
        info = labeler.explain(s1, s2)
        for prover_bit, oracle_bit, verdict in zip(
            info["bits"], oracle.bits(s1, s2), info["verdicts"]
        ):
            if prover_bit == oracle_bit:
                continue
            assert prover_bit and not oracle_bit
            assert verdict.model is not None and verdict.model.size > 3


def test_reference_refuses_oversized_vocabularies():
    from folnli.errors import ConfigError

    with pytest.raises(ConfigError):
        BruteForceLabeler(default_config(), max_domain=3)
