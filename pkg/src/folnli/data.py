"""Labeled sentence-pair datasets: sampling, splits, substitutions, files.

`generate_dataset` rejection-samples random ordered pairs, labels each with
the prover, and returns disjoint train and test lists.  The candidate stream
is drawn from one seeded generator and filtered by length and uniqueness
before labeling, so the output is byte-for-byte reproducible for a given
SplitSpec no matter how the labeling work is chunked or parallelized.
Pairs the prover cannot decide within its limits are skipped and reported.

The file format is UTF-8 TSV, one `relation<TAB>left<TAB>right` line per
pair.  Reading is lenient about out-of-vocabulary nouns and verbs so that
substituted datasets (see `apply_substitution`) round-trip.
"""

from __future__ import annotations

import dataclasses
import hashlib
import json
import math
import multiprocessing
from collections import Counter
from dataclasses import dataclass

import numpy as np

from .errors import ConfigError, DataError, SentenceParseError, UndecidedError
from .lang import (
    LanguageConfig,
    Sentence,
    Vocabulary,
    default_config,
    generate_sentence,
    parse,
    sentence_text,
)
from .prover import PairLabeler
from .relations import RELATIONS, is_relation


@dataclass(frozen=True)
class LabeledPair:
    relation: str
    left: Sentence
    right: Sentence


@dataclass(frozen=True)
class SplitSpec:
    """Sizes, optional per-split sentence-length filters, and the seed.

    A length filter restricts both sentences of a pair to the given token
    counts; None admits every length.  Train and test draw from one stream,
    so ordered pairs never repeat across the two splits.

    Under uniform sentence sampling almost every pair is logically
    independent, which makes the class distribution so lopsided that a
    constant classifier is nearly unbeatable.  `keep_independence` is the
    probability of keeping each "#"-labeled candidate; values well below 1
    flatten the distribution while leaving the other six classes untouched.
    The coin is a per-pair hash, so the outcome depends only on the seed and
    the two sentences, never on chunking or worker count.
    """

    train_size: int = 30000
    test_size: int = 5000
    train_lengths: frozenset[int] | None = None
    test_lengths: frozenset[int] | None = None
    seed: int = 0
    keep_independence: float = 1.0

    def __post_init__(self):
        if self.train_size < 0 or self.test_size < 0:
            raise ConfigError("split sizes must be nonnegative")
        if not 0.0 < self.keep_independence <= 1.0:
            raise ConfigError("keep_independence must be in (0, 1]")
        for name in ("train_lengths", "test_lengths"):
            value = getattr(self, name)
            if value is not None:
                object.__setattr__(self, name, frozenset(value))


@dataclass
class GenerationResult:
    train: list[LabeledPair]
    test: list[LabeledPair]
    undecided: list[tuple[str, str]]
    attempts: int = 0
    duplicates: int = 0
    length_rejected: int = 0
    independence_rejected: int = 0


def sentence_count_by_length(
    vocab: Vocabulary, object_det_negation: bool = False
) -> dict[int, int]:
    """Number of distinct sentences at each token count."""
    slots = 5 if object_det_negation else 4
    base = len(vocab.quantifiers) ** 2 * len(vocab.nouns) ** 2 * len(vocab.verbs)
    return {5 + k: math.comb(slots, k) * base for k in range(slots + 1)}


def _sentences_under(counts: dict[int, int], lengths: frozenset[int] | None) -> int:
    return sum(c for length, c in counts.items() if lengths is None or length in lengths)


def _check_feasible(spec: SplitSpec, config: LanguageConfig):
    counts = sentence_count_by_length(config.vocabulary, config.object_det_negation)
    train_n = _sentences_under(counts, spec.train_lengths)
    test_n = _sentences_under(counts, spec.test_lengths)
    both = frozenset(counts) if spec.train_lengths is None else spec.train_lengths
    both = both if spec.test_lengths is None else both & spec.test_lengths
    overlap = _sentences_under(counts, both)
    if spec.train_size > train_n**2:
        raise DataError(
            f"train split wants {spec.train_size} pairs but only "
            f"{train_n**2} exist under its length filter"
        )
    if spec.test_size > test_n**2:
        raise DataError(
            f"test split wants {spec.test_size} pairs but only "
            f"{test_n**2} exist under its length filter"
        )
    distinct = train_n**2 + test_n**2 - overlap**2
    if spec.train_size + spec.test_size > distinct:
        raise DataError(
            f"{spec.train_size + spec.test_size} pairs requested but only "
            f"{distinct} distinct pairs exist under the length filters"
        )


# labeling workers hold one PairLabeler each, built on first use
_WORKER_LABELER: PairLabeler | None = None


def _worker_init(config: LanguageConfig, max_domain: int, max_resolution_steps: int):
    global _WORKER_LABELER
    _WORKER_LABELER = PairLabeler(config, max_domain, max_resolution_steps)


def _worker_label(pair: tuple[Sentence, Sentence]) -> str | None:
    return _safe_label(_WORKER_LABELER, *pair)


def _safe_label(labeler: PairLabeler, s1: Sentence, s2: Sentence) -> str | None:
    try:
        return labeler.label(s1, s2)
    except UndecidedError:
        return None


class _ChunkLabeler:
    def __init__(self, config, labeler, workers, max_domain, max_resolution_steps):
        self._pool = None
        if workers > 1:
            self._pool = multiprocessing.get_context("fork").Pool(
                workers,
                initializer=_worker_init,
                initargs=(config, max_domain, max_resolution_steps),
            )
        else:
            self._labeler = labeler or PairLabeler(
                config, max_domain, max_resolution_steps
            )

    def __call__(self, pairs: list[tuple[Sentence, Sentence]]) -> list[str | None]:
        if self._pool is not None:
            return self._pool.map(_worker_label, pairs)
        return [_safe_label(self._labeler, s1, s2) for s1, s2 in pairs]

    def close(self):
        if self._pool is not None:
            self._pool.close()
            self._pool.join()


def generate_dataset(
    spec: SplitSpec,
    config: LanguageConfig | None = None,
    labeler: PairLabeler | None = None,
    workers: int = 1,
    chunk_size: int = 256,
    max_domain: int = 4,
    max_resolution_steps: int = 50000,
) -> GenerationResult:
    """Sample, label, and split pairs according to `spec`.

    Draws uniform random sentences from the configured language, keeps a
    pair when both lengths pass the split's filter and the ordered pair is
    new, and labels accepted candidates in chunks (optionally across
    `workers` processes).  "#"-labeled candidates then survive with
    probability `spec.keep_independence`.  The train split fills first, then
    the test split continues from the same stream.  Raises DataError when
    the requested sizes exceed the distinct pairs available, or when
    rejection sampling stalls near that capacity.
    """
    config = config or default_config()
    _check_feasible(spec, config)
    rng = np.random.default_rng(spec.seed)
    seen: set[tuple[str, str]] = set()
    result = GenerationResult([], [], [])
    stall_cap = 1000 * (spec.train_size + spec.test_size) + 100000
    label_chunk = _ChunkLabeler(config, labeler, workers, max_domain, max_resolution_steps)
    try:
        for out, size, lengths in (
            (result.train, spec.train_size, spec.train_lengths),
            (result.test, spec.test_size, spec.test_lengths),
        ):
            _fill_split(
                out, size, lengths, rng, seen, config, label_chunk, result,
                chunk_size, stall_cap, spec,
            )
    finally:
        label_chunk.close()
    return result


def _keep_coin(seed: int, left: str, right: str) -> float:
    digest = hashlib.sha256(f"{seed}\x1f{left}\x1f{right}".encode("utf-8")).digest()
    return int.from_bytes(digest[:8], "big") / 2**64


def _fill_split(
    out, size, lengths, rng, seen, config, label_chunk, result, chunk_size,
    stall_cap, spec,
):
    vocab = config.vocabulary
    while len(out) < size:
        chunk: list[tuple[Sentence, Sentence]] = []
        want = min(chunk_size, size - len(out))
        while len(chunk) < want:
            if result.attempts >= stall_cap:
                raise DataError(
                    f"rejection sampling stalled after {result.attempts} draws; "
                    "the requested sizes sit too close to the number of "
                    "distinct pairs under the length filters"
                )
            result.attempts += 1
            s1 = generate_sentence(rng, vocab, config.object_det_negation)
            s2 = generate_sentence(rng, vocab, config.object_det_negation)
            if lengths is not None and (
                s1.length not in lengths or s2.length not in lengths
            ):
                result.length_rejected += 1
                continue
            key = (sentence_text(s1), sentence_text(s2))
            if key in seen:
                result.duplicates += 1
                continue
            seen.add(key)
            chunk.append((s1, s2))
        for (s1, s2), relation in zip(chunk, label_chunk(chunk)):
            if relation is None:
                result.undecided.append((sentence_text(s1), sentence_text(s2)))
            elif relation == "#" and spec.keep_independence < 1.0 and _keep_coin(
                spec.seed, sentence_text(s1), sentence_text(s2)
            ) >= spec.keep_independence:
                result.independence_rejected += 1
            else:
                out.append(LabeledPair(relation, s1, s2))


# --- statistics -----------------------------------------------------------------

def class_distribution(pairs: list[LabeledPair]) -> dict[str, float]:
    """Relative frequency of each of the seven relations; sums to 1."""
    if not pairs:
        raise DataError("empty dataset has no class distribution")
    counts = Counter(p.relation for p in pairs)
    total = len(pairs)
    return {rel: counts.get(rel, 0) / total for rel in RELATIONS}


def distribution_table(train: list[LabeledPair], test: list[LabeledPair]) -> str:
    """Plot-ready TSV: one row per relation with train and test frequency."""
    train_dist = class_distribution(train)
    test_dist = class_distribution(test)
    lines = ["relation\ttrain_freq\ttest_freq"]
    for rel in RELATIONS:
        lines.append(f"{rel}\t{train_dist[rel]:.6f}\t{test_dist[rel]:.6f}")
    return "\n".join(lines) + "\n"


# --- substitutions ----------------------------------------------------------------

@dataclass(frozen=True)
class SubstitutionSpec:
    """Word replacement map for zero-shot evaluation.

    Replacement words must be absent from the vocabulary (the point is that
    the model never saw them) and present in the embedding file named by
    `embedding_source` when one is used.
    """

    mapping: dict[str, str]
    embedding_source: str | None = None


def load_substitution(path) -> SubstitutionSpec:
    try:
        with open(path, encoding="utf-8") as fh:
            raw = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read substitution spec {path}: {exc}") from exc
    mapping = raw.get("mapping")
    if not isinstance(mapping, dict) or not mapping or not all(
        isinstance(k, str) and isinstance(v, str) for k, v in mapping.items()
    ):
        raise ConfigError(f"{path}: 'mapping' must be a nonempty word-to-word table")
    source = raw.get("embedding_source")
    if source is not None and not isinstance(source, str):
        raise ConfigError(f"{path}: 'embedding_source' must be a path string")
    return SubstitutionSpec(dict(mapping), source)


def _substitute_sentence(s: Sentence, mapping: dict[str, str]) -> Sentence:
    return dataclasses.replace(
        s,
        subj_noun=mapping.get(s.subj_noun, s.subj_noun),
        verb=mapping.get(s.verb, s.verb),
        obj_noun=mapping.get(s.obj_noun, s.obj_noun),
    )


def apply_substitution(
    pairs: list[LabeledPair],
    sub: SubstitutionSpec | dict[str, str],
    vocab: Vocabulary | None = None,
) -> tuple[list[LabeledPair], list[LabeledPair]]:
    """Rewrite the fragment of `pairs` that mentions mapped words.

    Returns (substituted, originals): `originals` collects the pairs
    containing at least one mapped word, `substituted` the same pairs with
    every occurrence replaced.  Labels carry over unchanged, which is sound
    only for mappings that preserve the lexical relations (synonyms, words
    with identical taxonomy rows, or a relocation of the whole hierarchy).
    """
    vocab = vocab or default_config().vocabulary
    mapping = dict(sub.mapping) if isinstance(sub, SubstitutionSpec) else dict(sub)
    for word, replacement in mapping.items():
        if vocab.word_class(word) not in ("noun", "verb"):
            raise ConfigError(f"substituted word {word!r} is not a noun or verb")
        if replacement in vocab.words:
            raise ConfigError(
                f"replacement {replacement!r} is already in the vocabulary"
            )
    originals: list[LabeledPair] = []
    substituted: list[LabeledPair] = []
    for p in pairs:
        words = {p.left.subj_noun, p.left.verb, p.left.obj_noun,
                 p.right.subj_noun, p.right.verb, p.right.obj_noun}
        if words.isdisjoint(mapping):
            continue
        originals.append(p)
        substituted.append(
            LabeledPair(
                p.relation,
                _substitute_sentence(p.left, mapping),
                _substitute_sentence(p.right, mapping),
            )
        )
    return substituted, originals


# --- file format -------------------------------------------------------------------

def write_dataset(pairs: list[LabeledPair], path):
    """One `relation<TAB>left<TAB>right` line per pair, UTF-8, LF endings."""
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for p in pairs:
            fh.write(
                f"{p.relation}\t{sentence_text(p.left)}\t{sentence_text(p.right)}\n"
            )


def read_dataset(
    path,
    vocab: Vocabulary | None = None,
    allow_unknown_words: bool = True,
) -> list[LabeledPair]:
    """Parse a dataset file back into labeled pairs.

    Unknown nouns and verbs are accepted by default so substituted test
    sets load; malformed lines raise DataError with the line number.
    """
    pairs: list[LabeledPair] = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.rstrip("\n")
            parts = line.split("\t")
            if len(parts) != 3:
                raise DataError(
                    f"{path}:{lineno}: expected 3 tab-separated fields, "
                    f"got {len(parts)}"
                )
            relation, left, right = parts
            if not is_relation(relation):
                raise DataError(f"{path}:{lineno}: unknown relation {relation!r}")
            try:
                pairs.append(
                    LabeledPair(
                        relation,
                        parse(left, vocab, allow_unknown_words=allow_unknown_words),
                        parse(right, vocab, allow_unknown_words=allow_unknown_words),
                    )
                )
            except SentenceParseError as exc:
                raise DataError(f"{path}:{lineno}: {exc}") from exc
    return pairs
