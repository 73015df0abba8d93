"""The artificial language: vocabulary, lexical taxonomy, grammar, sentences.

Every sentence has the fixed shape

    [not] Quant [not] Noun [not] Verb [not] Quant [not] Noun

i.e. a quantified subject, a transitive verb, and a quantified object, where
each of the bracketed slots may carry a negation.  By default four of the
five negation slots are live; the object-determiner slot exists in the data
model but is switched off unless a config enables it.  With the default
vocabulary (2 quantifiers, 5 nouns, 4 verbs) and 4 negation slots the
language contains exactly 6400 distinct sentences.

Lexical meaning lives in a `Taxonomy`: a symmetric table of pairwise
entailment relations between nouns and between verbs.  Each shipped taxonomy
carries a set witness (explicit finite extensions) from which every declared
relation can be recomputed, so a config is checkable rather than taken on
faith.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field, replace
from pathlib import Path
from importlib import resources

import numpy as np

from .errors import ConfigError, SentenceParseError
from .relations import RELATIONS, converse, relation_of_sets

NEGATION_WORD = "not"

DEFAULT_QUANTIFIERS = ("all", "some")
DEFAULT_NOUNS = ("Romans", "Italians", "Germans", "Europeans", "children")
DEFAULT_VERBS = ("love", "like", "hate", "fear")


@dataclass(frozen=True)
class Vocabulary:
    """Word classes of the language.

    The adverb class is fixed to {"not", empty} and is not configurable.
    """

    quantifiers: tuple[str, ...] = DEFAULT_QUANTIFIERS
    nouns: tuple[str, ...] = DEFAULT_NOUNS
    verbs: tuple[str, ...] = DEFAULT_VERBS

    def __post_init__(self):
        classes = {
            "quantifiers": self.quantifiers,
            "nouns": self.nouns,
            "verbs": self.verbs,
        }
        seen: dict[str, str] = {}
        for cls_name, words in classes.items():
            if not words:
                raise ConfigError(f"word class '{cls_name}' is empty")
            for w in words:
                if not w or w == NEGATION_WORD:
                    raise ConfigError(f"invalid word {w!r} in class '{cls_name}'")
                if w in seen:
                    raise ConfigError(
                        f"word {w!r} appears in both '{seen[w]}' and '{cls_name}'"
                    )
                seen[w] = cls_name

    def word_class(self, word: str) -> str | None:
        if word in self.quantifiers:
            return "quantifier"
        if word in self.nouns:
            return "noun"
        if word in self.verbs:
            return "verb"
        return None

    @property
    def words(self) -> tuple[str, ...]:
        return self.quantifiers + self.nouns + self.verbs + (NEGATION_WORD,)


@dataclass(frozen=True)
class Sentence:
    """One parsed sentence; flags mark which negation slots are filled."""

    subj_det_neg: bool
    subj_quant: str
    subj_noun_neg: bool
    subj_noun: str
    verb_neg: bool
    verb: str
    obj_det_neg: bool
    obj_quant: str
    obj_noun_neg: bool
    obj_noun: str

    @property
    def length(self) -> int:
        """Number of surface tokens: 5 content words plus the negations."""
        return 5 + sum(
            (
                self.subj_det_neg,
                self.subj_noun_neg,
                self.verb_neg,
                self.obj_det_neg,
                self.obj_noun_neg,
            )
        )


def render(s: Sentence) -> list[str]:
    """Surface token sequence; the empty adverb contributes nothing."""
    out: list[str] = []
    for neg, word in (
        (s.subj_det_neg, s.subj_quant),
        (s.subj_noun_neg, s.subj_noun),
        (s.verb_neg, s.verb),
        (s.obj_det_neg, s.obj_quant),
        (s.obj_noun_neg, s.obj_noun),
    ):
        if neg:
            out.append(NEGATION_WORD)
        out.append(word)
    return out


def sentence_text(s: Sentence) -> str:
    return " ".join(render(s))


def parse(
    tokens: list[str] | str,
    vocab: Vocabulary | None = None,
    allow_unknown_words: bool = False,
) -> Sentence:
    """Parse a token sequence (or a space-separated string) into a Sentence.

    The grammar is fixed-shape, so parsing is a single left-to-right pass:
    at every point exactly one word class (or "not") is admissible.  With
    `allow_unknown_words` the noun and verb slots accept out-of-vocabulary
    words; quantifiers and "not" are always matched exactly.  That mode is
    what lets substituted datasets (containing deliberately unseen words)
    round-trip through the file format.
    """
    if vocab is None:
        vocab = Vocabulary()
    if isinstance(tokens, str):
        tokens = tokens.split()

    pos = 0

    def peek() -> str | None:
        return tokens[pos] if pos < len(tokens) else None

    def take_negation() -> bool:
        nonlocal pos
        if peek() == NEGATION_WORD:
            pos += 1
            return True
        return False

    def take(cls_words: tuple[str, ...], cls_name: str, lenient: bool) -> str:
        nonlocal pos
        tok = peek()
        if tok is None:
            raise SentenceParseError(f"expected {cls_name}, got end of input", pos + 1)
        known = vocab.word_class(tok)
        if tok in cls_words or (lenient and known is None and tok != NEGATION_WORD):
            pos += 1
            return tok
        if known is None and not lenient:
            raise SentenceParseError(f"unknown word {tok!r}", pos + 1)
        raise SentenceParseError(f"expected {cls_name}, got {tok!r}", pos + 1)

    lenient = allow_unknown_words
    subj_det_neg = take_negation()
    subj_quant = take(vocab.quantifiers, "quantifier", False)
    subj_noun_neg = take_negation()
    subj_noun = take(vocab.nouns, "noun", lenient)
    verb_neg = take_negation()
    verb = take(vocab.verbs, "verb", lenient)
    obj_det_neg = take_negation()
    obj_quant = take(vocab.quantifiers, "quantifier", False)
    obj_noun_neg = take_negation()
    obj_noun = take(vocab.nouns, "noun", lenient)
    if pos != len(tokens):
        raise SentenceParseError(f"unexpected trailing token {tokens[pos]!r}", pos + 1)

    return Sentence(
        subj_det_neg,
        subj_quant,
        subj_noun_neg,
        subj_noun,
        verb_neg,
        verb,
        obj_det_neg,
        obj_quant,
        obj_noun_neg,
        obj_noun,
    )


def generate_sentence(
    rng: np.random.Generator,
    vocab: Vocabulary | None = None,
    object_det_negation: bool = False,
) -> Sentence:
    """Draw a sentence with every slot sampled uniformly and independently."""
    if vocab is None:
        vocab = Vocabulary()

    def flip() -> bool:
        return bool(rng.integers(2))

    def pick(words: tuple[str, ...]) -> str:
        return words[rng.integers(len(words))]

    return Sentence(
        subj_det_neg=flip(),
        subj_quant=pick(vocab.quantifiers),
        subj_noun_neg=flip(),
        subj_noun=pick(vocab.nouns),
        verb_neg=flip(),
        verb=pick(vocab.verbs),
        obj_det_neg=flip() if object_det_negation else False,
        obj_quant=pick(vocab.quantifiers),
        obj_noun_neg=flip(),
        obj_noun=pick(vocab.nouns),
    )


def enumerate_sentences(
    vocab: Vocabulary | None = None, object_det_negation: bool = False
):
    """Yield every sentence of the language exactly once, in a fixed order."""
    if vocab is None:
        vocab = Vocabulary()
    flags = (False, True)
    obj_det_flags = flags if object_det_negation else (False,)
    for sdn, sq, snn, sn, vn, v, odn, oq, onn, on in itertools.product(
        flags,
        vocab.quantifiers,
        flags,
        vocab.nouns,
        flags,
        vocab.verbs,
        obj_det_flags,
        vocab.quantifiers,
        flags,
        vocab.nouns,
    ):
        yield Sentence(sdn, sq, snn, sn, vn, v, odn, oq, onn, on)


class Taxonomy:
    """Pairwise lexical entailment relations for nouns and for verbs.

    Lookups are symmetric under converse: storing A < B makes (B, A) answer
    ">".  Same-word queries answer "=", unrelated pairs "#".  Cross-class
    queries are an error because noun/verb extensions live over different
    universes (elements vs. pairs of elements).
    """

    def __init__(
        self,
        nouns: tuple[str, ...],
        verbs: tuple[str, ...],
        noun_relations: list[tuple[str, str, str]],
        verb_relations: list[tuple[str, str, str]],
    ):
        self.nouns = tuple(nouns)
        self.verbs = tuple(verbs)
        self._table: dict[tuple[str, str], str] = {}
        for words, rels, cls in (
            (self.nouns, noun_relations, "noun"),
            (self.verbs, verb_relations, "verb"),
        ):
            wordset = set(words)
            for w, rel, v in rels:
                if w not in wordset or v not in wordset:
                    raise ConfigError(f"{cls} relation mentions unknown word: {w} {rel} {v}")
                if rel not in RELATIONS:
                    raise ConfigError(f"unknown relation symbol {rel!r}")
                if w == v:
                    if rel != "=":
                        raise ConfigError(f"self-pair {w!r} must be '=', got {rel!r}")
                    continue
                prior = self._table.get((w, v))
                if prior is not None and prior != rel:
                    raise ConfigError(f"conflicting relations for ({w}, {v}): {prior} vs {rel}")
                self._table[(w, v)] = rel
                self._table[(v, w)] = converse(rel)

    def lexical_relation(self, w: str, v: str) -> str:
        wc = "noun" if w in self.nouns else "verb" if w in self.verbs else None
        vc = "noun" if v in self.nouns else "verb" if v in self.verbs else None
        if wc is None or vc is None:
            raise ConfigError(f"word not in taxonomy: {w if wc is None else v!r}")
        if wc != vc:
            raise ConfigError(f"cross-class relation query: {w!r} is a {wc}, {v!r} a {vc}")
        if w == v:
            return "="
        return self._table.get((w, v), "#")

    def pairs(self, cls: str) -> list[tuple[str, str, str]]:
        """All stored (w, rel, v) for one class, each unordered pair once."""
        words = self.nouns if cls == "noun" else self.verbs
        out = []
        for w, v in itertools.combinations(words, 2):
            rel = self._table.get((w, v))
            if rel is not None:
                out.append((w, rel, v))
        return out


@dataclass(frozen=True)
class LanguageConfig:
    """A vocabulary plus its taxonomy and the validating set witness."""

    vocabulary: Vocabulary
    taxonomy: Taxonomy
    set_witness: dict[str, frozenset[int]] = field(default_factory=dict)
    universe: frozenset[int] = frozenset()
    object_det_negation: bool = False

    def with_object_det_negation(self, enabled: bool) -> "LanguageConfig":
        return replace(self, object_det_negation=enabled)


def encode_pair(a: int, b: int, universe_size: int) -> int:
    """Pack an ordered domain pair into one integer for verb witnesses."""
    return a * universe_size + b


def decode_pair(code: int, universe_size: int) -> tuple[int, int]:
    return divmod(code, universe_size)


def validate_witness(config: LanguageConfig) -> list[str]:
    """Recompute every declared relation from the set witness.

    Returns a list of human-readable mismatches (empty when coherent).
    Noun witnesses are subsets of the universe; verb witnesses are sets of
    encoded ordered pairs (a * |D| + b) and are compared inside the product
    universe D x D.
    """
    problems: list[str] = []
    witness = config.set_witness
    universe = config.universe
    if not universe:
        return ["witness universe is empty"]
    n = len(universe)
    elements = sorted(universe)
    index = {d: i for i, d in enumerate(elements)}
    pair_universe = frozenset(range(n * n))

    for w in config.vocabulary.nouns:
        if w in witness and not witness[w] <= universe:
            problems.append(f"witness for noun {w!r} leaves the universe")
    for w in config.vocabulary.verbs:
        if w in witness and not witness[w] <= pair_universe:
            problems.append(f"witness for verb {w!r} leaves the pair universe")

    def check(words, pairs, extension, dom, what):
        for w in words:
            if w not in witness:
                problems.append(f"no witness set for {what} {w!r}")
        for w, rel, v in pairs:
            if w not in witness or v not in witness:
                continue
            actual = relation_of_sets(extension(w), extension(v), dom)
            if actual != rel:
                problems.append(
                    f"{what} pair ({w}, {v}) declared {rel!r} but witness gives {actual!r}"
                )

    tax = config.taxonomy
    noun_universe = frozenset(index.values())
    check(
        config.vocabulary.nouns,
        tax.pairs("noun"),
        lambda w: frozenset(index[d] for d in witness[w] if d in index),
        noun_universe,
        "noun",
    )
    check(
        config.vocabulary.verbs,
        tax.pairs("verb"),
        lambda w: witness[w] & pair_universe,
        pair_universe,
        "verb",
    )
    return problems


def load_config(path: str | Path) -> LanguageConfig:
    """Read a taxonomy/vocabulary JSON file and validate its witness."""
    with open(path, encoding="utf-8") as fh:
        raw = json.load(fh)
    return config_from_dict(raw)


def config_from_dict(raw: dict) -> LanguageConfig:
    try:
        nouns = tuple(raw["nouns"])
        verbs = tuple(raw["verbs"])
        noun_relations = [tuple(entry) for entry in raw["noun_relations"]]
        verb_relations = [tuple(entry) for entry in raw["verb_relations"]]
    except KeyError as missing:
        raise ConfigError(f"taxonomy config is missing section {missing}")
    quantifiers = tuple(raw.get("quantifiers", DEFAULT_QUANTIFIERS))
    vocab = Vocabulary(quantifiers=quantifiers, nouns=nouns, verbs=verbs)
    taxonomy = Taxonomy(nouns, verbs, noun_relations, verb_relations)
    witness = {w: frozenset(v) for w, v in raw.get("set_witness", {}).items()}
    universe = frozenset(raw.get("universe", ()))
    config = LanguageConfig(
        vocabulary=vocab,
        taxonomy=taxonomy,
        set_witness=witness,
        universe=universe,
    )
    if witness:
        problems = validate_witness(config)
        if problems:
            raise ConfigError("taxonomy witness mismatch: " + "; ".join(problems))
    return config


def default_config() -> LanguageConfig:
    """The shipped language: 5 nouns, 4 verbs, two small hierarchies."""
    data = resources.files("folnli.resources").joinpath("default_taxonomy.json")
    return config_from_dict(json.loads(data.read_text(encoding="utf-8")))


def restrict_config(
    config: LanguageConfig, nouns: tuple[str, ...], verbs: tuple[str, ...]
) -> LanguageConfig:
    """Sub-language over a subset of the nouns and verbs.

    The induced taxonomy keeps exactly the declared relations between kept
    words, and the witness restricts along.  Useful for exhaustive checks
    whose cost is exponential in vocabulary size.
    """
    for w in nouns:
        if w not in config.vocabulary.nouns:
            raise ConfigError(f"unknown noun {w!r}")
    for w in verbs:
        if w not in config.vocabulary.verbs:
            raise ConfigError(f"unknown verb {w!r}")
    keep = set(nouns) | set(verbs)
    taxonomy = Taxonomy(
        tuple(nouns),
        tuple(verbs),
        [p for p in config.taxonomy.pairs("noun") if p[0] in keep and p[2] in keep],
        [p for p in config.taxonomy.pairs("verb") if p[0] in keep and p[2] in keep],
    )
    vocab = Vocabulary(
        quantifiers=config.vocabulary.quantifiers,
        nouns=tuple(nouns),
        verbs=tuple(verbs),
    )
    witness = {w: s for w, s in config.set_witness.items() if w in keep}
    return LanguageConfig(
        vocabulary=vocab,
        taxonomy=taxonomy,
        set_witness=witness,
        universe=config.universe,
        object_det_negation=config.object_det_negation,
    )
