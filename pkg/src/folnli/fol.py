"""First-order translations of sentences, background axioms, clausal form.

Sentences map into the two-variable fragment over {x, y}: nouns become unary
predicates, verbs binary ones, both named by the surface word.  The lexical
taxonomy compiles into a set of closed axioms (one or two per word pair,
depending on the relation), and before proving, the axiom set is filtered
down to those whose predicates all occur in the sentence pair at hand.

Terms are tagged tuples so they hash and compare structurally:

    ("v", name)        variable
    ("f", name, args)  function application; constants have args == ()

A literal is (sign, predicate, args); a clause is a frozenset of literals,
read as the disjunction of its members with all variables universal.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .lang import Sentence
from .relations import RELATIONS
from .errors import ConfigError


# --- formulas ---------------------------------------------------------------

@dataclass(frozen=True)
class Atom:
    pred: str
    args: tuple


@dataclass(frozen=True)
class Not:
    sub: "Formula"


@dataclass(frozen=True)
class And:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Or:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Implies:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class ForAll:
    var: str
    body: "Formula"


@dataclass(frozen=True)
class Exists:
    var: str
    body: "Formula"


Formula = Atom | Not | And | Or | Implies | ForAll | Exists


def var(name: str) -> tuple:
    return ("v", name)


def fn(name: str, *args: tuple) -> tuple:
    return ("f", name, tuple(args))


def predicates(f: Formula) -> frozenset[str]:
    """All predicate symbols occurring in a formula."""
    if isinstance(f, Atom):
        return frozenset((f.pred,))
    if isinstance(f, Not):
        return predicates(f.sub)
    if isinstance(f, (And, Or, Implies)):
        return predicates(f.left) | predicates(f.right)
    return predicates(f.body)


# --- translation ------------------------------------------------------------

def translate(s: Sentence) -> Formula:
    """First-order formula of one sentence.

    Scope order, outermost first: subject-determiner negation, subject
    quantifier, verb negation, object-determiner negation, object
    quantifier.  Noun negations stay on the atom.  So "some Romans not love
    all Italians" reads: some Roman x fails to love every Italian, not
    "loves every non-Italian" or similar.
    """
    x, y = var("x"), var("y")

    def noun(word: str, negated: bool, term) -> Formula:
        atom = Atom(word, (term,))
        return Not(atom) if negated else atom

    verb_atom = Atom(s.verb, (x, y))
    obj_noun = noun(s.obj_noun, s.obj_noun_neg, y)
    if s.obj_quant == "all":
        obj: Formula = ForAll("y", Implies(obj_noun, verb_atom))
    else:
        obj = Exists("y", And(obj_noun, verb_atom))
    if s.obj_det_neg:
        obj = Not(obj)
    vp = Not(obj) if s.verb_neg else obj

    subj_noun = noun(s.subj_noun, s.subj_noun_neg, x)
    if s.subj_quant == "all":
        body: Formula = ForAll("x", Implies(subj_noun, vp))
    else:
        body = Exists("x", And(subj_noun, vp))
    return Not(body) if s.subj_det_neg else body


# --- axioms -----------------------------------------------------------------

def _axiom_schemas(rel: str, a: Formula, b: Formula, close) -> list[Formula]:
    """Axioms for one related word pair, over open formulas a, b.

    `close` universally quantifies an open formula (over one variable for
    nouns, two for verbs).  Relations "=" and "#" contribute nothing: "="
    never holds between distinct words of a sane taxonomy, and independence
    is exactly the absence of constraints.
    """
    if rel == "<":
        return [close(Implies(a, b))]
    if rel == ">":
        return [close(Implies(b, a))]
    if rel == "^":
        return [close(Not(And(a, b))), close(Or(a, b))]
    if rel == "|":
        return [close(Not(And(a, b))), Not(close(Or(a, b)))]
    if rel == "v":
        return [close(Implies(Not(a), b))]
    if rel in ("=", "#"):
        return []
    raise ConfigError(f"unknown relation symbol {rel!r}")


def compile_axioms(taxonomy) -> list[Formula]:
    """Closed background axioms for every related word pair of a taxonomy."""
    x, y = var("x"), var("y")

    def close_unary(f: Formula) -> Formula:
        return ForAll("x", f)

    def close_binary(f: Formula) -> Formula:
        return ForAll("x", ForAll("y", f))

    axioms: list[Formula] = []
    for w, rel, v in taxonomy.pairs("noun"):
        axioms.extend(_axiom_schemas(rel, Atom(w, (x,)), Atom(v, (x,)), close_unary))
    for w, rel, v in taxonomy.pairs("verb"):
        axioms.extend(
            _axiom_schemas(rel, Atom(w, (x, y)), Atom(v, (x, y)), close_binary)
        )
    return axioms


def normalize(f: Formula) -> tuple:
    """Syntactic canonical form: bound variables renamed in traversal order,
    operands of commutative connectives sorted.  Equal normal forms mean the
    formulas are duplicates up to renaming and commutation; unequal forms
    prove nothing.
    """

    def walk(g: Formula, env: dict) -> tuple:
        if isinstance(g, Atom):
            args = tuple(env.get(t, t) for t in g.args)
            return ("atom", g.pred, args)
        if isinstance(g, Not):
            return ("not", walk(g.sub, env))
        if isinstance(g, (And, Or)):
            tag = "and" if isinstance(g, And) else "or"
            kids = sorted((walk(g.left, env), walk(g.right, env)))
            return (tag, *kids)
        if isinstance(g, Implies):
            return ("implies", walk(g.left, env), walk(g.right, env))
        tag = "all" if isinstance(g, ForAll) else "exists"
        fresh = ("v", f"_{len(env)}")
        return (tag, walk(g.body, {**env, var(g.var): fresh}))

    return walk(f, {})


def filter_axioms(axioms: list[Formula], *formulas: Formula) -> list[Formula]:
    """Keep axioms whose predicates all occur in the given formulas.

    Dropping the rest leaves the entailment label unchanged: an axiom about
    words absent from both sentences constrains predicates the sentences
    never mention, so it cannot flip the satisfiability of any of the four
    sign combinations (its models restrict and extend freely over the
    untouched predicates).  Duplicate axioms are removed by normal form.
    """
    mentioned: frozenset[str] = frozenset().union(*(predicates(f) for f in formulas))
    kept: list[Formula] = []
    seen: set[tuple] = set()
    for ax in axioms:
        if not predicates(ax) <= mentioned:
            continue
        key = normalize(ax)
        if key in seen:
            continue
        seen.add(key)
        kept.append(ax)
    return kept


# --- clausal form -----------------------------------------------------------

class NameSource:
    """Fresh variable and Skolem names.  Share one instance across every
    formula entering a single satisfiability question, so names never
    collide between clauses of different formulas."""

    def __init__(self):
        self._counter = itertools.count(1)

    def fresh_var(self) -> tuple:
        return ("v", f"x{next(self._counter)}")

    def skolem(self, args: tuple) -> tuple:
        return ("f", f"sk{next(self._counter)}", tuple(args))


def _nnf(f: Formula, positive: bool) -> Formula:
    """Negation normal form with implications removed."""
    if isinstance(f, Atom):
        return f if positive else Not(f)
    if isinstance(f, Not):
        return _nnf(f.sub, not positive)
    if isinstance(f, And):
        cls = And if positive else Or
        return cls(_nnf(f.left, positive), _nnf(f.right, positive))
    if isinstance(f, Or):
        cls = Or if positive else And
        return cls(_nnf(f.left, positive), _nnf(f.right, positive))
    if isinstance(f, Implies):
        if positive:
            return Or(_nnf(f.left, False), _nnf(f.right, True))
        return And(_nnf(f.left, True), _nnf(f.right, False))
    if isinstance(f, ForAll):
        cls = ForAll if positive else Exists
        return cls(f.var, _nnf(f.body, positive))
    cls = Exists if positive else ForAll
    return cls(f.var, _nnf(f.body, positive))


def _skolemize(f: Formula, env: dict, universals: tuple, names: NameSource) -> Formula:
    """Drop quantifiers from an NNF formula, replacing each bound variable:
    universals by fresh variables, existentials by Skolem terms over the
    universals in scope."""
    if isinstance(f, Atom):
        return Atom(f.pred, tuple(env.get(t, t) for t in f.args))
    if isinstance(f, Not):
        return Not(_skolemize(f.sub, env, universals, names))
    if isinstance(f, (And, Or)):
        cls = type(f)
        return cls(
            _skolemize(f.left, env, universals, names),
            _skolemize(f.right, env, universals, names),
        )
    if isinstance(f, ForAll):
        fresh = names.fresh_var()
        return _skolemize(
            f.body, {**env, var(f.var): fresh}, universals + (fresh,), names
        )
    if isinstance(f, Exists):
        witness = names.skolem(universals)
        return _skolemize(f.body, {**env, var(f.var): witness}, universals, names)
    raise TypeError(f"not in negation normal form: {f!r}")


def _cnf(f: Formula) -> list[frozenset]:
    if isinstance(f, Atom):
        return [frozenset(((True, f.pred, f.args),))]
    if isinstance(f, Not):
        assert isinstance(f.sub, Atom)
        return [frozenset(((False, f.sub.pred, f.sub.args),))]
    if isinstance(f, And):
        return _cnf(f.left) + _cnf(f.right)
    if isinstance(f, Or):
        return [a | b for a in _cnf(f.left) for b in _cnf(f.right)]
    raise TypeError(f"quantifier survived skolemization: {f!r}")


def clausify(formulas, names: NameSource | None = None) -> list[frozenset]:
    """Clausal form of one formula or an iterable of formulas."""
    if names is None:
        names = NameSource()
    if isinstance(formulas, (Atom, Not, And, Or, Implies, ForAll, Exists)):
        formulas = [formulas]
    clauses: list[frozenset] = []
    seen: set[frozenset] = set()
    for f in formulas:
        stripped = _skolemize(_nnf(f, True), {}, (), names)
        for clause in _cnf(stripped):
            if clause not in seen:
                seen.add(clause)
                clauses.append(clause)
    return clauses


# --- rendering --------------------------------------------------------------

def render_term(t: tuple) -> str:
    if t[0] == "v":
        return t[1]
    name, args = t[1], t[2]
    if not args:
        return name
    return f"{name}({', '.join(render_term(a) for a in args)})"


def render_formula(f: Formula) -> str:
    if isinstance(f, Atom):
        return f"{f.pred}({', '.join(render_term(a) for a in f.args)})"
    if isinstance(f, Not):
        return f"-{_wrap(f.sub)}"
    if isinstance(f, And):
        return f"{_wrap(f.left)} & {_wrap(f.right)}"
    if isinstance(f, Or):
        return f"{_wrap(f.left)} | {_wrap(f.right)}"
    if isinstance(f, Implies):
        return f"{_wrap(f.left)} -> {_wrap(f.right)}"
    if isinstance(f, ForAll):
        return f"all {f.var} {_wrap(f.body)}"
    return f"exists {f.var} {_wrap(f.body)}"


def _wrap(f: Formula) -> str:
    text = render_formula(f)
    if isinstance(f, Atom):
        return text
    if isinstance(f, Not) and isinstance(f.sub, Atom):
        return text
    return f"({text})"


def render_clause(clause: frozenset) -> str:
    if not clause:
        return "[]"
    parts = []
    for sign, pred, args in sorted(clause, key=lambda l: (l[1], str(l[2]), not l[0])):
        lit = f"{pred}({', '.join(render_term(a) for a in args)})"
        parts.append(lit if sign else f"-{lit}")
    return " | ".join(parts)
