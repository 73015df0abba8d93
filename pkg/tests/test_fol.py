"""Translation to first-order logic, axiom compilation, clausal form."""

import pytest

from folnli.fol import (
    And,
    Atom,
    Exists,
    ForAll,
    Implies,
    NameSource,
    Not,
    Or,
    clausify,
    compile_axioms,
    filter_axioms,
    normalize,
    predicates,
    render_clause,
    render_formula,
    translate,
    var,
)
from folnli.lang import default_config, enumerate_sentences, parse

X, Y = var("x"), var("y")


def formula_of(text: str):
    return translate(parse(text))


class TestTranslate:
    def test_universal_subject_universal_object(self):
        f = formula_of("all Romans love all Italians")
        assert f == ForAll(
            "x",
            Implies(
                Atom("Romans", (X,)),
                ForAll("y", Implies(Atom("Italians", (Y,)), Atom("love", (X, Y)))),
            ),
        )

    def test_existential_subject_existential_object(self):
        f = formula_of("some Romans love some Italians")
        assert f == Exists(
            "x",
            And(
                Atom("Romans", (X,)),
                Exists("y", And(Atom("Italians", (Y,)), Atom("love", (X, Y)))),
            ),
        )

    def test_noun_negation_sits_on_the_atom(self):
        f = formula_of("all not Romans love some not Italians")
        assert f == ForAll(
            "x",
            Implies(
                Not(Atom("Romans", (X,))),
                Exists("y", And(Not(Atom("Italians", (Y,))), Atom("love", (X, Y)))),
            ),
        )

    def test_verb_negation_scopes_over_the_object_quantifier(self):
        f = formula_of("some Romans not love all Italians")
        assert f == Exists(
            "x",
            And(
                Atom("Romans", (X,)),
                Not(ForAll("y", Implies(Atom("Italians", (Y,)), Atom("love", (X, Y))))),
            ),
        )

    def test_subject_determiner_negation_scopes_over_everything(self):
        inner = formula_of("all Romans love some Italians")
        assert formula_of("not all Romans love some Italians") == Not(inner)

    def test_predicates_are_surface_words(self):
        f = formula_of("some children fear all Germans")
        assert predicates(f) == {"children", "fear", "Germans"}

    def test_rendering_round_trips_key_structure(self):
        f = formula_of("not some Romans not love all not Italians")
        assert render_formula(f) == (
            "-(exists x (Romans(x) & (-(all y (-Italians(y) -> love(x, y))))))"
        )


class TestAxioms:
    def test_default_taxonomy_axiom_count(self):
        # Nouns: four "<" pairs give one axiom each, two "|" pairs two each.
        # Verbs: two "<" pairs one each, four "|" pairs two each.
        axioms = compile_axioms(default_config().taxonomy)
        assert len(axioms) == 18

    def test_subset_relation_gives_one_implication(self):
        axioms = compile_axioms(default_config().taxonomy)
        target = ForAll("x", Implies(Atom("Romans", (X,)), Atom("Italians", (X,))))
        assert target in axioms

    def test_alternation_gives_exclusion_and_non_exhaustion(self):
        axioms = compile_axioms(default_config().taxonomy)
        exclusion = ForAll("x", Not(And(Atom("Romans", (X,)), Atom("Germans", (X,)))))
        non_exhaustion = Not(ForAll("x", Or(Atom("Romans", (X,)), Atom("Germans", (X,)))))
        assert exclusion in axioms
        assert non_exhaustion in axioms

    def test_verb_axioms_quantify_both_arguments(self):
        axioms = compile_axioms(default_config().taxonomy)
        target = ForAll(
            "x", ForAll("y", Implies(Atom("love", (X, Y)), Atom("like", (X, Y))))
        )
        assert target in axioms

    def test_independence_contributes_nothing(self):
        axioms = compile_axioms(default_config().taxonomy)
        assert all("children" not in predicates(a) for a in axioms)


class TestFilter:
    def test_keeps_only_axioms_about_mentioned_words(self):
        axioms = compile_axioms(default_config().taxonomy)
        f1 = formula_of("all Romans love some Italians")
        f2 = formula_of("some Romans like some Italians")
        kept = filter_axioms(axioms, f1, f2)
        mentioned = predicates(f1) | predicates(f2)
        assert kept
        assert all(predicates(a) <= mentioned for a in kept)

    def test_filtered_set_is_often_much_smaller(self):
        axioms = compile_axioms(default_config().taxonomy)
        f1 = formula_of("all children fear some children")
        f2 = formula_of("some children fear all children")
        assert filter_axioms(axioms, f1, f2) == []

    def test_duplicates_collapse(self):
        ax = ForAll("x", And(Atom("A", (X,)), Atom("B", (X,))))
        ax_flipped = ForAll("z", And(Atom("B", (("v", "z"),)), Atom("A", (("v", "z"),))))
        f = And(Atom("A", (X,)), Atom("B", (X,)))
        assert filter_axioms([ax, ax_flipped], f) == [ax]

    def test_normalize_distinguishes_different_formulas(self):
        a = ForAll("x", Implies(Atom("A", (X,)), Atom("B", (X,))))
        b = ForAll("x", Implies(Atom("B", (X,)), Atom("A", (X,))))
        assert normalize(a) != normalize(b)


class TestClausify:
    def test_universal_with_existential_object_uses_skolem_function(self):
        clauses = clausify(formula_of("all Romans love some Italians"))
        assert len(clauses) == 2
        rendered = sorted(render_clause(c) for c in clauses)
        assert rendered == [
            "-Romans(x1) | love(x1, sk2(x1))",
            "Italians(sk2(x1)) | -Romans(x1)",
        ]

    def test_negated_universal_becomes_ground_witness(self):
        clauses = clausify(formula_of("not all Romans love some Italians"))
        # exists a Roman who loves no Italian: one constant, one 1-var clause
        rendered = sorted(render_clause(c) for c in clauses)
        assert rendered == ["-Italians(x2) | -love(sk1, x2)", "Romans(sk1)"]

    def test_shared_name_source_never_reuses_symbols(self):
        names = NameSource()
        a = clausify(formula_of("some Romans love some Italians"), names)
        b = clausify(formula_of("some Germans hate some Europeans"), names)
        symbols = set()
        for clause in a + b:
            for _, _, args in clause:
                for t in args:
                    stack = [t]
                    while stack:
                        term = stack.pop()
                        symbols.add(term[1])
                        if term[0] == "f":
                            stack.extend(term[2])
        skolems = {s for s in symbols if s.startswith("sk")}
        assert len(skolems) == 4

    def test_double_negation_cancels(self):
        f = formula_of("not all Romans love some Italians")
        assert clausify(Not(f)) == clausify(formula_of("all Romans love some Italians"))

    def test_conjunction_splits_into_clause_list(self):
        f = And(Atom("A", (fnc("c"),)), Not(Atom("B", (fnc("c"),))))
        clauses = clausify(f)
        assert frozenset(((True, "A", (fnc("c"),)),)) in clauses
        assert frozenset(((False, "B", (fnc("c"),)),)) in clauses

    def test_every_sentence_of_the_language_clausifies(self):
        for s in enumerate_sentences():
            clauses = clausify(translate(s))
            assert clauses
            for clause in clauses:
                assert clause  # no accidental empty clause
                for sign, pred, args in clause:
                    assert isinstance(sign, bool)
                    assert isinstance(pred, str)


def fnc(name: str) -> tuple:
    return ("f", name, ())
