"""Properties of the shipped embedding file and substitution specs.

The zero-shot machinery relies on structural facts of the embedding
table, so they are pinned here: vocabulary words carry no mass in the
spare half of the space (those input weights stay untrained), benign
replacements are structural copies at a tuned cosine distance, the
adversarial verb replacement is dominated by the wrong verb, and the
relocated hierarchies are orthogonal to everything the model saw.
"""

import json
from importlib import resources
from pathlib import Path

import numpy as np
import pytest

from folnli import Vocabulary, load_substitution, net

EMBED_PATH = Path(str(resources.files("folnli.resources") / "embeddings_50d.txt"))
SUBS_DIR = Path(str(resources.files("folnli.resources") / "subs"))

VOCAB = (
    "all", "some", "not",
    "Romans", "Italians", "Germans", "Europeans", "children",
    "love", "like", "hate", "fear",
)

DISTANCES = {
    "kids": ("children", 0.21),
    "adore": ("love", 0.57),
    "dread": ("fear", 0.39),
    "detest": ("hate", 0.56),
    "Venetians": ("Romans", 0.28),
    "Milanese": ("Romans", 0.72),
    "Neapolitans": ("Romans", 0.57),
    "Polish": ("Germans", 0.37),
    "Dutch": ("Germans", 0.40),
    "Spanish": ("Germans", 0.50),
    "students": ("children", 0.27),
    "women": ("children", 0.24),
    "linguists": ("children", 0.92),
    "Parisians": ("Romans", 0.35),
    "French": ("Italians", 0.35),
    "Eurasians": ("Europeans", 0.45),
}

HIERARCHY_WORDS = (
    "rabbits", "rodents", "cats", "mammals", "pets",
    "calvinists", "protestants", "catholics", "christians", "orthodox",
    "Clevelanders", "Ohioans", "Californians", "Americans",
)


@pytest.fixture(scope="module")
def table():
    words = VOCAB + tuple(DISTANCES) + HIERARCHY_WORDS
    rows = net.load_pretrained_embeddings(EMBED_PATH, words)
    return dict(zip(words, rows))


def test_every_vector_is_50_dimensional(table):
    assert all(v.shape == (50,) for v in table.values())


def test_vocabulary_has_no_spare_mass(table):
    for word in VOCAB:
        assert np.all(table[word][25:] == 0.0), word


def test_vocabulary_is_orthonormal(table):
    grid = np.stack([table[w] for w in VOCAB])
    assert np.allclose(grid @ grid.T, np.eye(len(VOCAB)))


def test_tuned_cosine_distances(table):
    for word, (original, expected) in DISTANCES.items():
        got = net.cosine_distance(table[word], table[original])
        assert got == pytest.approx(expected, abs=1e-3), word


def test_benign_replacements_copy_the_structural_half(table):
    for word in ("kids", "adore", "dread", "students", "women"):
        original = DISTANCES[word][0]
        assert np.allclose(table[word][:25], table[original][:25])


def test_detest_is_dominated_by_love(table):
    struct = table["detest"][:25]
    on_love = float(struct @ table["love"][:25])
    on_hate = float(struct @ table["hate"][:25])
    assert on_love > on_hate > 0.0


def test_relocated_hierarchies_avoid_trained_directions(table):
    for word in HIERARCHY_WORDS:
        vector = table[word]
        assert np.all(vector[25:] == 0.0), word
        assert np.linalg.norm(vector) == pytest.approx(1.0, abs=1e-4)
        for seen in VOCAB:
            assert abs(float(vector @ table[seen])) < 1e-6, (word, seen)


def test_relocated_hierarchy_keeps_pairwise_angles(table):
    frame = np.stack([table[w] for w in ("rabbits", "rodents", "cats",
                                         "mammals", "pets")])
    assert np.allclose(frame @ frame.T, np.eye(5), atol=1e-4)


def test_substitution_specs_are_consistent(table):
    vocab = Vocabulary()
    specs = sorted(SUBS_DIR.glob("*.json"))
    assert len(specs) == 20
    for path in specs:
        sub = load_substitution(path)
        source = path.parent / sub.embedding_source
        assert source.resolve() == EMBED_PATH.resolve()
        for word, replacement in sub.mapping.items():
            assert word in vocab.nouns or word in vocab.verbs, path.name
            assert replacement in table, path.name


def test_specs_cover_every_replacement_word(table):
    mapped = set()
    for path in SUBS_DIR.glob("*.json"):
        mapped.update(json.loads(path.read_text())["mapping"].values())
    assert mapped == set(DISTANCES) | set(HIERARCHY_WORDS)
