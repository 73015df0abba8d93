"""Satisfiability of clause sets and entailment labels for sentence pairs.

`check_sat` answers whether a clause set has a model.  It first searches for
a finite model by grounding the clauses over domains of growing size into
propositional CNF and running DPLL; a hit is verified against the original
clauses and returned.  If no model exists up to the domain cap, saturation
resolution with factoring and subsumption takes over; an empty clause yields
an UNSAT verdict carrying a derivation that is replayed step by step before
being returned.  A saturated set without the empty clause is satisfiable.
If the step budget runs out first the answer is undecided.

`PairLabeler.label` turns that into the seven-way entailment label of an
ordered sentence pair: with A the background axioms filtered to the words of
the pair, the satisfiability bits of A + {phi, psi}, {phi, -psi}, {-phi, psi}
and {-phi, -psi} determine the relation between the model sets of the two
sentences (see `label_from_bits`).

`BruteForceLabeler` computes the same label by enumerating every
interpretation of the whole vocabulary over small domains with numpy.  Its
cost is exponential in vocabulary size and domain; it exists as an
independent reference for the proving path, so it shares no code with it
beyond the translation step.
"""

from __future__ import annotations

import hashlib
import heapq
import itertools
from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigError, UndecidedError
from .fol import (
    Atom,
    And,
    Exists,
    ForAll,
    Implies,
    NameSource,
    Not,
    Or,
    clausify,
    compile_axioms,
    predicates,
    render_clause,
    translate,
)
from .lang import LanguageConfig, Sentence, default_config, parse, sentence_text


# --- terms and substitutions -------------------------------------------------

def _walk(term: tuple, subst: dict) -> tuple:
    while term[0] == "v" and term in subst:
        term = subst[term]
    return term


def apply_subst(term: tuple, subst: dict) -> tuple:
    term = _walk(term, subst)
    if term[0] == "v":
        return term
    return ("f", term[1], tuple(apply_subst(a, subst) for a in term[2]))


def _occurs(v: tuple, term: tuple, subst: dict) -> bool:
    term = _walk(term, subst)
    if term == v:
        return True
    if term[0] == "f":
        return any(_occurs(v, a, subst) for a in term[2])
    return False


def unify(xs: tuple, ys: tuple, subst: dict | None = None) -> dict | None:
    """Most general unifier of two argument tuples, or None."""
    if len(xs) != len(ys):
        return None
    s = dict(subst) if subst else {}
    stack = list(zip(xs, ys))
    while stack:
        a, b = stack.pop()
        a, b = _walk(a, s), _walk(b, s)
        if a == b:
            continue
        if a[0] == "v":
            if _occurs(a, b, s):
                return None
            s[a] = b
        elif b[0] == "v":
            if _occurs(b, a, s):
                return None
            s[b] = a
        elif a[1] == b[1] and len(a[2]) == len(b[2]):
            stack.extend(zip(a[2], b[2]))
        else:
            return None
    return s


def _match(xs: tuple, ys: tuple, subst: dict) -> dict | None:
    """One-sided matching: binds variables of xs only, ys stays rigid."""
    if len(xs) != len(ys):
        return None
    s = dict(subst)
    stack = list(zip(xs, ys))
    while stack:
        a, b = stack.pop()
        if a[0] == "v":
            bound = s.get(a)
            if bound is None:
                s[a] = b
            elif bound != b:
                return None
        elif b[0] == "f" and a[1] == b[1] and len(a[2]) == len(b[2]):
            stack.extend(zip(a[2], b[2]))
        else:
            return None
    return s


# --- clauses ------------------------------------------------------------------

def _term_vars(term: tuple, out: set):
    if term[0] == "v":
        out.add(term)
    else:
        for a in term[2]:
            _term_vars(a, out)


def clause_vars(clause: frozenset) -> set:
    out: set = set()
    for _, _, args in clause:
        for t in args:
            _term_vars(t, out)
    return out


def _sorted_lits(clause: frozenset) -> list:
    # str() of nested tuples is deterministic; never rely on set order
    return sorted(clause, key=lambda l: (l[1], not l[0], str(l[2])))


def canonical_clause(clause: frozenset) -> frozenset:
    """Variables renamed x1, x2, ... in deterministic traversal order."""
    mapping: dict = {}

    def walk(t: tuple) -> tuple:
        if t[0] == "v":
            if t not in mapping:
                mapping[t] = ("v", f"x{len(mapping) + 1}")
            return mapping[t]
        return ("f", t[1], tuple(walk(a) for a in t[2]))

    return frozenset(
        (sign, pred, tuple(walk(a) for a in args))
        for sign, pred, args in _sorted_lits(clause)
    )


def _rename_clause(clause: frozenset, prefix: str) -> list:
    """Literals in deterministic order with variables renamed apart."""
    mapping: dict = {}

    def walk(t: tuple) -> tuple:
        if t[0] == "v":
            if t not in mapping:
                mapping[t] = ("v", f"{prefix}{len(mapping) + 1}")
            return mapping[t]
        return ("f", t[1], tuple(walk(a) for a in t[2]))

    return [
        (sign, pred, tuple(walk(a) for a in args))
        for sign, pred, args in _sorted_lits(clause)
    ]


def is_tautology(clause: frozenset) -> bool:
    return any((not sign, pred, args) in clause for sign, pred, args in clause)


def subsumes(c: frozenset, d: frozenset) -> bool:
    """True when some substitution maps every literal of c into d."""
    if len(c) > len(d):
        return False
    c_lits = _rename_clause(c, "_s")
    d_lits = list(d)

    def match_from(i: int, subst: dict) -> bool:
        if i == len(c_lits):
            return True
        sign, pred, args = c_lits[i]
        for dsign, dpred, dargs in d_lits:
            if dsign != sign or dpred != pred:
                continue
            s = _match(args, dargs, subst)
            if s is not None and match_from(i + 1, s):
                return True
        return False

    return match_from(0, {})


def factors(clause: frozenset):
    """Binary factors: unify two same-sign literals, yield merged clause."""
    lits = _sorted_lits(clause)
    for i, j in itertools.combinations(range(len(lits)), 2):
        si, pi, ai = lits[i]
        sj, pj, aj = lits[j]
        if si != sj or pi != pj:
            continue
        theta = unify(ai, aj)
        if theta is None:
            continue
        merged = frozenset(
            (s, p, tuple(apply_subst(t, theta) for t in args)) for s, p, args in lits
        )
        yield canonical_clause(merged), (i, j)


def resolvents(c1: frozenset, c2: frozenset):
    """All binary resolvents of two clauses, renamed apart first.

    Yields (clause, (index of literal in c1, index in c2)) with indices into
    the deterministic literal order, so a derivation can be replayed.
    """
    lits1 = _rename_clause(c1, "_l")
    lits2 = _rename_clause(c2, "_r")
    for i, (s1, p1, a1) in enumerate(lits1):
        for j, (s2, p2, a2) in enumerate(lits2):
            if s1 == s2 or p1 != p2:
                continue
            theta = unify(a1, a2)
            if theta is None:
                continue
            rest = [l for k, l in enumerate(lits1) if k != i]
            rest += [l for k, l in enumerate(lits2) if k != j]
            resolvent = frozenset(
                (s, p, tuple(apply_subst(t, theta) for t in args))
                for s, p, args in rest
            )
            yield canonical_clause(resolvent), (i, j)


# --- resolution ---------------------------------------------------------------

@dataclass(frozen=True)
class DerivationStep:
    index: int
    clause: frozenset
    rule: str                      # "input" | "factor" | "resolve"
    parents: tuple[int, ...]
    literals: tuple[int, ...]      # literal indices the rule acted on


def _clause_weight(clause: frozenset) -> int:
    symbols = len(clause)
    stack = [t for _, _, args in clause for t in args]
    while stack:
        t = stack.pop()
        symbols += 1
        if t[0] == "f":
            stack.extend(t[2])
    return symbols


# One in every _AGE_INTERVAL given-clause selections takes the oldest
# passive clause instead of the lightest.  Without this, a chain of ever
# deeper unit clauses can starve the heavier clauses a refutation needs.
_AGE_INTERVAL = 4


def saturate(clauses, max_steps: int = 50000, support=None):
    """Given-clause resolution until refutation, saturation, or step cap.

    Returns (status, steps, empty_index) where status is "unsat", "sat"
    (saturated without the empty clause) or "undecided" (budget exhausted),
    and steps maps indices to DerivationSteps for every registered clause.

    `support` (a boolean per input clause) marks the set of support: clauses
    outside it go straight to the active set and are never selected as given
    clauses, so every derived clause descends from the support.  Sound and
    complete only when the non-support clauses are satisfiable on their own,
    which holds for taxonomy axioms validated by a set witness.
    """
    records: dict[int, DerivationStep] = {}
    by_weight: list = []
    age_cursor = 0
    done: set[int] = set()
    active: list[tuple[int, frozenset]] = []
    seen: set[frozenset] = set()
    tie = itertools.count()
    selections = itertools.count(1)
    empty_index: int | None = None

    def register(clause, rule, parents, literals) -> int | None:
        nonlocal empty_index
        clause = canonical_clause(clause)
        if is_tautology(clause) or clause in seen:
            return None
        seen.add(clause)
        idx = len(records)
        records[idx] = DerivationStep(idx, clause, rule, parents, literals)
        heapq.heappush(by_weight, (_clause_weight(clause), next(tie), idx))
        if not clause:
            empty_index = idx
        return idx

    def pop_oldest() -> int | None:
        nonlocal age_cursor
        while age_cursor < len(records):
            idx = age_cursor
            age_cursor += 1
            if idx not in done:
                return idx
        return None

    def pop_lightest() -> int | None:
        while by_weight:
            _, _, idx = heapq.heappop(by_weight)
            if idx not in done:
                return idx
        return None

    def next_given() -> int | None:
        if next(selections) % _AGE_INTERVAL == 0:
            idx = pop_oldest()
            return idx if idx is not None else pop_lightest()
        idx = pop_lightest()
        return idx if idx is not None else pop_oldest()

    # pred -> active clause ids containing it, for resolution partner and
    # subsumption candidate lookup; profiles of (length, pred set) allow
    # cheap subsumption pre-rejection
    partner_index: dict[str, set[int]] = {}
    profile: dict[int, tuple[int, frozenset]] = {}

    def activate(idx: int, clause: frozenset):
        active.append((idx, clause))
        preds = frozenset(pred for _, pred, _ in clause)
        profile[idx] = (len(clause), preds)
        for pred in preds:
            partner_index.setdefault(pred, set()).add(idx)

    def is_redundant(clause: frozenset) -> bool:
        length = len(clause)
        preds = frozenset(pred for _, pred, _ in clause)
        candidates: set[int] = set()
        for pred in preds:
            candidates |= partner_index.get(pred, set())
        for idx in candidates:
            alen, apreds = profile[idx]
            if alen <= length and apreds <= preds and subsumes(records[idx].clause, clause):
                return True
        return False

    if support is None:
        support = [True] * len(clauses)
    for c, supported in zip(clauses, support):
        idx = register(c, "input", (), ())
        if empty_index is not None:
            return ("unsat", records, empty_index)
        if idx is not None and not supported:
            done.add(idx)
            activate(idx, records[idx].clause)

    while True:
        if len(records) > max_steps:
            return ("undecided", records, None)
        given_idx = next_given()
        if given_idx is None:
            return ("sat", records, None)
        done.add(given_idx)
        given = records[given_idx].clause
        if is_redundant(given):
            continue
        for factor, lits in factors(given):
            register(factor, "factor", (given_idx,), lits)
            if empty_index is not None:
                return ("unsat", records, empty_index)
        given_preds = {pred for _, pred, _ in given}
        partners: set[int] = set()
        for pred in given_preds:
            partners |= partner_index.get(pred, set())
        for other_idx in sorted(partners) + [given_idx]:
            other = given if other_idx == given_idx else records[other_idx].clause
            for resolvent, lits in resolvents(given, other):
                register(resolvent, "resolve", (given_idx, other_idx), lits)
                if empty_index is not None:
                    return ("unsat", records, empty_index)
        activate(given_idx, given)


def extract_refutation(records: dict, empty_index: int) -> list[DerivationStep]:
    """The sub-derivation ending in the empty clause, in derivation order."""
    needed: set[int] = set()
    stack = [empty_index]
    while stack:
        idx = stack.pop()
        if idx in needed:
            continue
        needed.add(idx)
        stack.extend(records[idx].parents)
    return [records[i] for i in sorted(needed)]


def verify_refutation(steps: list[DerivationStep], inputs) -> bool:
    """Replay a refutation: every step must recompute exactly, inputs must
    come from the given clause set, and the last clause must be empty."""
    if not steps or steps[-1].clause != frozenset():
        return False
    input_set = {canonical_clause(c) for c in inputs}
    by_index = {s.index: s for s in steps}
    for s in steps:
        if s.rule == "input":
            if s.clause not in input_set:
                return False
            continue
        if any(p not in by_index or p >= s.index for p in s.parents):
            return False
        if s.rule == "factor":
            (parent,) = s.parents
            found = any(
                f == s.clause and lits == s.literals
                for f, lits in factors(by_index[parent].clause)
            )
            if not found:
                return False
        elif s.rule == "resolve":
            p1, p2 = s.parents
            found = any(
                r == s.clause and lits == s.literals
                for r, lits in resolvents(by_index[p1].clause, by_index[p2].clause)
            )
            if not found:
                return False
        else:
            return False
    return True


# --- finite model search ------------------------------------------------------

@dataclass
class Model:
    """Finite interpretation: domain {0..size-1}, predicate extensions as
    sets of argument tuples, function tables as dicts."""

    size: int
    preds: dict[str, set]
    funcs: dict[str, dict]

    def eval_term(self, term: tuple, env: dict) -> int:
        if term[0] == "v":
            return env[term[1]]
        args = tuple(self.eval_term(a, env) for a in term[2])
        return self.funcs[term[1]][args]

    def satisfies_clause(self, clause: frozenset) -> bool:
        names = sorted(v[1] for v in clause_vars(clause))
        for values in itertools.product(range(self.size), repeat=len(names)):
            env = dict(zip(names, values))
            if not any(
                (tuple(self.eval_term(t, env) for t in args) in self.preds.get(pred, set()))
                == sign
                for sign, pred, args in clause
            ):
                return False
        return True

    def satisfies(self, clauses) -> bool:
        return all(self.satisfies_clause(c) for c in clauses)


class _DomainGrounding:
    """Propositional encoding of clause groups at one fixed domain size.

    Variable ids are allocated once per (predicate, ground args) atom and
    per (function, ground args, value) cell, and ground clause lists are
    cached per group key, so repeated queries that reuse groups (axioms,
    previously seen sentences) skip the grounding work.
    """

    def __init__(self, n: int):
        self.n = n
        self._ids: dict[tuple, int] = {}
        self._keys: list = [None]  # ids are 1-based for DIMACS-style signs
        self._groups: dict = {}

    def vid(self, key: tuple) -> int:
        idx = self._ids.get(key)
        if idx is None:
            idx = len(self._keys)
            self._ids[key] = idx
            self._keys.append(key)
        return idx

    def _ground_term(self, term: tuple, env: dict, cells: dict):
        if term[0] == "v":
            return env[term[1]]
        args = []
        for a in term[2]:
            v = self._ground_term(a, env, cells)
            if not isinstance(v, int):
                raise ConfigError("nested function terms are not supported")
            args.append(v)
        cell = (term[1], tuple(args))
        if cell not in cells:
            cells[cell] = len(cells)
        return ("slot", cells[cell])

    def ground_group(self, key, clauses):
        cached = self._groups.get(key)
        if cached is not None:
            return cached
        n = self.n
        prop: list[list[int]] = []
        all_cells: set = set()
        for clause in clauses:
            lits = _sorted_lits(clause)
            names = sorted(v[1] for v in clause_vars(clause))
            for values in itertools.product(range(n), repeat=len(names)):
                env = dict(zip(names, values))
                cells: dict = {}
                glits = []
                for sign, pred, args in lits:
                    gargs = tuple(self._ground_term(t, env, cells) for t in args)
                    glits.append((sign, pred, gargs))
                all_cells.update(cells)
                slots = list(cells)
                for cell_values in itertools.product(range(n), repeat=len(slots)):
                    out: list[int] = [
                        -self.vid(("c", fname, fargs, cell_values[slot]))
                        for (fname, fargs), slot in cells.items()
                    ]
                    lset: set[int] = set()
                    for sign, pred, gargs in glits:
                        vals = tuple(
                            g if isinstance(g, int) else cell_values[g[1]]
                            for g in gargs
                        )
                        lit = self.vid(("p", pred, vals))
                        lset.add(lit if sign else -lit)
                    if any(-l in lset for l in lset):
                        continue
                    prop.append(out + sorted(lset))
        result = (prop, all_cells)
        if key is not None:
            self._groups[key] = result
        return result

    def assemble(self, groups):
        """Full propositional problem: cached group clauses, totality and
        uniqueness constraints for every function cell, plus a symmetry
        breaker pinning the alphabetically first constant to element 0."""
        prop: list[list[int]] = []
        cells: set = set()
        for key, clauses in groups:
            gprop, gcells = self.ground_group(key, clauses)
            prop.extend(gprop)
            cells.update(gcells)
        for fname, fargs in sorted(cells):
            vals = [self.vid(("c", fname, fargs, v)) for v in range(self.n)]
            prop.append(vals)
            prop.extend([-a, -b] for a, b in itertools.combinations(vals, 2))
        constants = sorted(c[0] for c in cells if c[1] == ())
        if constants:
            prop.append([self.vid(("c", constants[0], (), 0))])
        return prop

    def extract_model(self, assignment: dict) -> Model:
        preds: dict[str, set] = {}
        funcs: dict[str, dict] = {}
        for var_id, value in assignment.items():
            if not value:
                continue
            key = self._keys[var_id]
            if key[0] == "p":
                preds.setdefault(key[1], set()).add(key[2])
            else:
                funcs.setdefault(key[1], {})[key[2]] = key[3]
        return Model(self.n, preds, funcs)


OUT_OF_BUDGET = object()


def dpll(clauses: list[list[int]], max_decisions: int | None = None):
    """Satisfying assignment of a propositional CNF, None if unsatisfiable,
    or OUT_OF_BUDGET once the decision budget runs out.  Callers treat the
    budget sentinel like "no model found here", which is sound because model
    search only ever accelerates: absence of a model proves nothing."""

    decisions = [0]

    def simplify(cls, lit):
        out = []
        for c in cls:
            if lit in c:
                continue
            if -lit in c:
                reduced = [x for x in c if x != -lit]
                if not reduced:
                    return None
                out.append(reduced)
            else:
                out.append(c)
        return out

    def solve(cls, assign):
        while True:
            unit = next((c[0] for c in cls if len(c) == 1), None)
            if unit is None:
                break
            assign[abs(unit)] = unit > 0
            cls = simplify(cls, unit)
            if cls is None:
                return None
        if not cls:
            return assign
        decisions[0] += 1
        if max_decisions is not None and decisions[0] > max_decisions:
            return OUT_OF_BUDGET
        lit = min(cls, key=len)[0]
        for branch in (lit, -lit):
            reduced = simplify(cls, branch)
            if reduced is None:
                continue
            result = solve(reduced, {**assign, abs(branch): branch > 0})
            if result is not None:
                return result
        return None

    cleaned = []
    for c in clauses:
        lits = sorted(set(c))
        if any(-l in lits for l in lits):
            continue
        if not lits:
            return None
        cleaned.append(lits)
    return solve(cleaned, {})


class ModelFinder:
    """Finite model search over growing domain sizes, with per-domain
    grounding caches shared across queries."""

    def __init__(self, max_domain: int = 4):
        self.max_domain = max_domain
        self._domains: dict[int, _DomainGrounding] = {}

    def find(
        self,
        groups,
        start: int = 1,
        upto: int | None = None,
        max_decisions: int | None = None,
    ) -> Model | None:
        upto = self.max_domain if upto is None else min(upto, self.max_domain)
        for n in range(start, upto + 1):
            grounding = self._domains.get(n)
            if grounding is None:
                grounding = self._domains[n] = _DomainGrounding(n)
            assignment = dpll(grounding.assemble(groups), max_decisions)
            if assignment is OUT_OF_BUDGET or assignment is None:
                continue
            model = grounding.extract_model(assignment)
            all_clauses = [c for _, clauses in groups for c in clauses]
            if not model.satisfies(all_clauses):
                raise RuntimeError("model search produced an invalid model")
            return model
        return None


# --- satisfiability verdicts ----------------------------------------------------

@dataclass
class Verdict:
    status: str                                  # "sat" | "unsat" | "undecided"
    model: Model | None = None
    refutation: list[DerivationStep] = field(default_factory=list)


def check_sat(
    clauses,
    max_domain: int = 4,
    max_resolution_steps: int = 50000,
    model_finder: ModelFinder | None = None,
    groups=None,
    non_support_keys: frozenset = frozenset(),
) -> Verdict:
    """Decide satisfiability of a clause set (or of pre-keyed groups).

    Model search and resolution complement each other: DPLL on the grounded
    problem finds models fast but is slow at exhausting large domains, while
    resolution refutes fast but can diverge on satisfiable input.  So the
    stages interleave, cheapest first: small domains, a decision-budgeted
    pass over the largest domain, a short resolution attempt, the largest
    domain without budget, and finally resolution with the full step cap.

    Groups whose key is in `non_support_keys` are excluded from the
    resolution set of support; only do that for clause groups known to be
    jointly satisfiable (background axioms with a validated witness).
    """
    if groups is None:
        groups = [(None, list(clauses))]
    finder = model_finder or ModelFinder(max_domain)
    all_clauses = []
    support = []
    for key, cs in groups:
        all_clauses.extend(cs)
        support.extend([key not in non_support_keys] * len(cs))

    def resolve(cap: int) -> Verdict | None:
        status, records, empty_index = saturate(all_clauses, cap, support)
        if status == "unsat":
            refutation = extract_refutation(records, empty_index)
            if not verify_refutation(refutation, all_clauses):
                raise RuntimeError("refutation failed verification")
            return Verdict("unsat", refutation=refutation)
        if status == "sat":
            return Verdict("sat")
        return None

    model = finder.find(groups, upto=3)
    if model is not None:
        return Verdict("sat", model=model)
    if finder.max_domain >= 4:
        model = finder.find(groups, start=4, max_decisions=2000)
        if model is not None:
            return Verdict("sat", model=model)
    quick_cap = min(600, max_resolution_steps)
    verdict = resolve(quick_cap)
    if verdict is not None:
        return verdict
    if finder.max_domain >= 4:
        model = finder.find(groups, start=4)
        if model is not None:
            return Verdict("sat", model=model)
    if quick_cap < max_resolution_steps:
        verdict = resolve(max_resolution_steps)
        if verdict is not None:
            return verdict
    return Verdict("undecided")


# --- pair labeling ---------------------------------------------------------------

def label_from_bits(b1: bool, b2: bool, b3: bool, b4: bool) -> str:
    """Entailment label from the four satisfiability bits.

    With X the models of phi and Y the models of psi (inside the models of
    the axioms), the bits witness the four regions: b1 = X and Y overlap,
    b2 = X has a part outside Y, b3 = Y has a part outside X, b4 = something
    lies outside both.  Containment is checked before the disjointness and
    exhaustion cases, so degenerate model sets still get a single label.
    """
    if not b2 and not b3:
        return "="
    if not b2:
        return "<"
    if not b3:
        return ">"
    if not b1 and not b4:
        return "^"
    if not b1:
        return "|"
    if not b4:
        return "v"
    return "#"


@dataclass
class _SentenceEntry:
    text: str
    sign: bool
    preds: frozenset
    key: tuple
    clauses: list
    uid: int


class PairLabeler:
    """Labels ordered sentence pairs through translation and proving.

    One instance caches, per sentence and sign, the clausal form (with
    Skolem symbols made unique per entry) and, per unordered signed pair,
    the satisfiability answer; grounding caches live in the shared
    ModelFinder.  Reuse one labeler when labeling many pairs.
    """

    def __init__(
        self,
        config: LanguageConfig | None = None,
        max_domain: int = 4,
        max_resolution_steps: int = 50000,
    ):
        self.config = config or default_config()
        self.max_resolution_steps = max_resolution_steps
        self._finder = ModelFinder(max_domain)
        names = NameSource()
        self._axioms = []
        for i, formula in enumerate(compile_axioms(self.config.taxonomy)):
            self._axioms.append(
                (predicates(formula), ("ax", i), clausify(formula, names), formula)
            )
        self._entries: dict[tuple[str, bool], _SentenceEntry] = {}
        self._sat_memo: dict[int, bool] = {}
        self._undecided: set[int] = set()

    def _entry(self, sentence: Sentence, sign: bool) -> _SentenceEntry:
        text = sentence_text(sentence)
        entry = self._entries.get((text, sign))
        if entry is None:
            formula = translate(sentence)
            if not sign:
                formula = Not(formula)
            prefix = f"s{len(self._entries)}_"
            clauses = clausify(formula, _PrefixedNames(prefix))
            entry = _SentenceEntry(
                text, sign, predicates(formula), ("sent", text, sign), clauses,
                len(self._entries),
            )
            self._entries[(text, sign)] = entry
        return entry

    def _check(self, e1: _SentenceEntry, e2: _SentenceEntry) -> Verdict:
        mentioned = e1.preds | e2.preds
        axiom_keys = []
        groups = []
        for preds, gkey, clauses, _ in self._axioms:
            if preds <= mentioned:
                groups.append((gkey, clauses))
                axiom_keys.append(gkey)
        groups.append((e1.key, e1.clauses))
        groups.append((e2.key, e2.clauses))
        return check_sat(
            None,
            max_resolution_steps=self.max_resolution_steps,
            model_finder=self._finder,
            groups=groups,
            non_support_keys=frozenset(axiom_keys),
        )

    def _sat(self, e1: _SentenceEntry, e2: _SentenceEntry) -> bool:
        # packed int key keeps the memo compact over long generation runs
        key = (min(e1.uid, e2.uid) << 21) | max(e1.uid, e2.uid)
        cached = self._sat_memo.get(key)
        if cached is not None:
            return cached
        described = f"({e1.text!r}, sign {e1.sign}) with ({e2.text!r}, sign {e2.sign})"
        if key in self._undecided:
            raise UndecidedError(f"satisfiability undecided for {described}")
        verdict = self._check(e1, e2)
        if verdict.status == "undecided":
            self._undecided.add(key)
            raise UndecidedError(
                f"cannot decide satisfiability of {described} within the step budget"
            )
        result = verdict.status == "sat"
        self._sat_memo[key] = result
        return result

    def _coerce(self, sentence) -> Sentence:
        if isinstance(sentence, Sentence):
            return sentence
        return parse(sentence, self.config.vocabulary)

    def bits(self, s1, s2) -> tuple[bool, bool, bool, bool]:
        s1, s2 = self._coerce(s1), self._coerce(s2)
        pos1, neg1 = self._entry(s1, True), self._entry(s1, False)
        pos2, neg2 = self._entry(s2, True), self._entry(s2, False)
        return (
            self._sat(pos1, pos2),
            self._sat(pos1, neg2),
            self._sat(neg1, pos2),
            self._sat(neg1, neg2),
        )

    def label(self, s1, s2) -> str:
        """Entailment relation of an ordered pair; the overlap bits b1 and
        b4 are only computed when containment alone cannot settle it."""
        s1, s2 = self._coerce(s1), self._coerce(s2)
        pos1, neg1 = self._entry(s1, True), self._entry(s1, False)
        pos2, neg2 = self._entry(s2, True), self._entry(s2, False)
        b2 = self._sat(pos1, neg2)
        b3 = self._sat(neg1, pos2)
        if not b2 and not b3:
            return "="
        if not b2:
            return "<"
        if not b3:
            return ">"
        b1 = self._sat(pos1, pos2)
        b4 = self._sat(neg1, neg2)
        return label_from_bits(b1, b2, b3, b4)

    def explain(self, s1, s2) -> dict:
        """Label a pair and keep the evidence.

        Returns a dict with the label, the four bits, the axioms retained
        by the word filter, and one Verdict per bit (in b1..b4 order) whose
        model or refutation backs the corresponding answer.  All four bits
        are computed, without the containment shortcut of `label`.
        """
        s1, s2 = self._coerce(s1), self._coerce(s2)
        pos1, neg1 = self._entry(s1, True), self._entry(s1, False)
        pos2, neg2 = self._entry(s2, True), self._entry(s2, False)
        verdicts = tuple(
            self._check(a, b)
            for a, b in ((pos1, pos2), (pos1, neg2), (neg1, pos2), (neg1, neg2))
        )
        undecided = [i + 1 for i, v in enumerate(verdicts) if v.status == "undecided"]
        if undecided:
            raise UndecidedError(
                f"cannot decide bits {undecided} of the pair within the step budget"
            )
        bits = tuple(v.status == "sat" for v in verdicts)
        mentioned = pos1.preds | pos2.preds
        axioms = [f for preds, _, _, f in self._axioms if preds <= mentioned]
        return {
            "label": label_from_bits(*bits),
            "bits": bits,
            "axioms": axioms,
            "verdicts": verdicts,
        }


class _PrefixedNames(NameSource):
    """Name source whose Skolem symbols carry a distinguishing prefix, so
    independently clausified formulas can share one proving context."""

    def __init__(self, prefix: str):
        super().__init__()
        self._prefix = prefix

    def skolem(self, args: tuple) -> tuple:
        base = super().skolem(args)
        return ("f", f"sk{self._prefix}{base[1][2:]}", base[2])


def classify_pair(s1, s2, config: LanguageConfig | None = None, labeler: PairLabeler | None = None) -> str:
    """Label one ordered pair.  For bulk work build a PairLabeler once."""
    if labeler is None:
        labeler = PairLabeler(config)
    return labeler.label(s1, s2)


# --- brute-force reference ------------------------------------------------------

class _DomainEvaluator:
    """Truth masks over every interpretation of a fixed vocabulary at one
    domain size.  Interpretation i assigns to each predicate cell the bit
    at its offset in i, so masks are vectors of length 2**(total cells)."""

    def __init__(self, preds: list[tuple[str, int]], n: int, max_interpretations: int):
        self.n = n
        offset = 0
        self._layout: dict[str, tuple[int, int]] = {}
        for name, arity in preds:
            cells = n**arity
            self._layout[name] = (offset, cells)
            offset += cells
        if 2**offset > max_interpretations:
            raise ConfigError(
                f"{2**offset} interpretations at domain size {n}; "
                "restrict the vocabulary or lower max_domain"
            )
        self.count = 2**offset
        index = np.arange(self.count, dtype=np.int64)
        self._tables = {}
        for name, (off, cells) in self._layout.items():
            table = np.empty((self.count, cells), dtype=bool)
            for j in range(cells):
                table[:, j] = (index >> (off + j)) & 1
            self._tables[name] = table

    def _eval(self, f, env: tuple) -> np.ndarray:
        if isinstance(f, Atom):
            scope = dict(env)
            column = 0
            for t in f.args:
                column = column * self.n + scope[t[1]]
            return self._tables[f.pred][:, column]
        if isinstance(f, Not):
            return ~self._eval(f.sub, env)
        if isinstance(f, And):
            return self._eval(f.left, env) & self._eval(f.right, env)
        if isinstance(f, Or):
            return self._eval(f.left, env) | self._eval(f.right, env)
        if isinstance(f, Implies):
            return ~self._eval(f.left, env) | self._eval(f.right, env)
        if isinstance(f, ForAll):
            parts = [
                self._eval(f.body, env + ((f.var, d),)) for d in range(self.n)
            ]
            return np.logical_and.reduce(parts)
        if isinstance(f, Exists):
            parts = [
                self._eval(f.body, env + ((f.var, d),)) for d in range(self.n)
            ]
            return np.logical_or.reduce(parts)
        raise TypeError(f"cannot evaluate {f!r}")

    def mask(self, formula) -> np.ndarray:
        return self._eval(formula, ())


def _pack(mask: np.ndarray) -> np.ndarray:
    return np.packbits(mask)


def _invert_packed(packed: np.ndarray, count: int) -> np.ndarray:
    out = ~packed
    pad = -count % 8
    if pad:
        out[-1] &= (0xFF << pad) & 0xFF
    return out


class BruteForceLabeler:
    """Reference labeler by exhaustive interpretation of the vocabulary.

    Enumerates every assignment of extensions to all nouns and verbs over
    domains 1..max_domain and reads the four bits off bit masks over the
    interpretation space, applying the same per-pair axiom filter as
    PairLabeler.  Exponential in vocabulary size: about four nouns and one
    verb fit at domain size 3, two nouns and one verb at domain size 4
    (with max_interpretations raised to 2**24).
    """

    def __init__(
        self,
        config: LanguageConfig | None = None,
        max_domain: int = 3,
        max_interpretations: int = 2**22,
    ):
        self.config = config or default_config()
        vocab = self.config.vocabulary
        preds = [(w, 1) for w in vocab.nouns] + [(w, 2) for w in vocab.verbs]
        self._domains = [
            _DomainEvaluator(preds, n, max_interpretations)
            for n in range(1, max_domain + 1)
        ]
        self._axioms = [
            (predicates(ax), [_pack(dom.mask(ax)) for dom in self._domains])
            for ax in compile_axioms(self.config.taxonomy)
        ]
        self._sentences: dict[str, tuple[list[np.ndarray], bytes]] = {}
        self._bit_memo: dict[tuple, tuple] = {}

    def _masks(self, s: Sentence) -> tuple[list[np.ndarray], bytes]:
        text = sentence_text(s)
        cached = self._sentences.get(text)
        if cached is None:
            f = translate(s)
            masks = [_pack(dom.mask(f)) for dom in self._domains]
            digest = hashlib.sha256()
            for m in masks:
                digest.update(m)
            cached = (masks, digest.digest())
            self._sentences[text] = cached
        return cached

    def _coerce(self, sentence) -> Sentence:
        if isinstance(sentence, Sentence):
            return sentence
        return parse(sentence, self.config.vocabulary)

    def _satisfiable(self, axioms, left, right) -> bool:
        for d, dom in enumerate(self._domains):
            acc = left[d] & right[d]
            for m in axioms:
                acc &= m[d]
            if acc.any():
                return True
        return False

    def bits(self, s1, s2) -> tuple[bool, bool, bool, bool]:
        s1, s2 = self._coerce(s1), self._coerce(s2)
        wanted = predicates(translate(s1)) | predicates(translate(s2))
        x, xdigest = self._masks(s1)
        y, ydigest = self._masks(s2)
        # the memo collapses sentences with equal masks, so it must key on
        # the kept axioms as well, which depend on the surface words
        kept = tuple(i for i, (preds, _) in enumerate(self._axioms) if preds <= wanted)
        key = (xdigest, ydigest, kept)
        cached = self._bit_memo.get(key)
        if cached is not None:
            return cached
        axioms = [self._axioms[i][1] for i in kept]
        nx = [_invert_packed(m, dom.count) for m, dom in zip(x, self._domains)]
        ny = [_invert_packed(m, dom.count) for m, dom in zip(y, self._domains)]
        result = (
            self._satisfiable(axioms, x, y),
            self._satisfiable(axioms, x, ny),
            self._satisfiable(axioms, nx, y),
            self._satisfiable(axioms, nx, ny),
        )
        self._bit_memo[key] = result
        return result

    def label(self, s1, s2) -> str:
        return label_from_bits(*self.bits(s1, s2))


def brute_force_label(
    s1, s2, config: LanguageConfig | None = None, max_domain: int = 3
) -> str:
    """One-off reference label.  For bulk work build a BruteForceLabeler."""
    return BruteForceLabeler(config, max_domain).label(s1, s2)


# --- rendering -------------------------------------------------------------------

def render_refutation(steps: list[DerivationStep]) -> str:
    lines = []
    for s in steps:
        origin = s.rule
        if s.parents:
            origin += "(" + ", ".join(str(p) for p in s.parents) + ")"
        lines.append(f"{s.index:>4}  {render_clause(s.clause):<60} {origin}")
    return "\n".join(lines)


def render_model(model: Model) -> str:
    lines = [f"domain size {model.size}"]
    for pred in sorted(model.preds):
        ext = sorted(model.preds[pred])
        shown = ", ".join(str(t[0]) if len(t) == 1 else str(t) for t in ext)
        lines.append(f"  {pred} = {{{shown}}}")
    for fname in sorted(model.funcs):
        for args, val in sorted(model.funcs[fname].items()):
            call = fname if not args else f"{fname}{args}"
            lines.append(f"  {call} = {val}")
    return "\n".join(lines)
