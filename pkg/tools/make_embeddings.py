#!/usr/bin/env python3
"""Build the 50-dimensional embedding file and the substitution specs that
ship as package resources.

The file serves two jobs at once: it is the frozen pretrained table for
the in-vocabulary words, and it carries the out-of-vocabulary replacement
words used by the zero-shot substitution sweeps.  Because no real
distributional vectors are available here, the table is synthetic, built
so that every cosine distance is an exact design constant rather than an
accident of training:

 * Vocabulary words occupy an orthonormal frame inside the first 25
   dimensions ("structural" half) and have exactly zero mass in the last
   25 ("spare" half).  A network trained with this table frozen never
   receives gradient through the spare dimensions, so its input weights
   there keep their small random initialization.
 * A benign replacement copies the structural part of its original
   verbatim and spends spare-half mass on nothing but tuning the cosine
   distance: the trained pathway sees the original word plus a small
   amount of untrained noise.  For unit structural vectors the distance
   works out to 1 - 1/sqrt(1 + t**2) where t is the spare mass, so t is
   solved from the target distance.
 * An adversarial replacement blends structural parts of two vocabulary
   words.  The trained pathway then sees a mixture; when the foreign word
   dominates, the classifier inherits the foreign word's behavior and the
   substitution degrades sharply.  With the orthonormal frame the cosine
   to the original is simply the blend coefficient.
 * A relocated hierarchy maps every noun onto a fresh orthonormal frame
   in structural dimensions no vocabulary word touches.  Pairwise angles
   between the nouns are preserved exactly, but none of the trained
   directions fire, which is the "same structure, different place"
   regime.

Run from the repository root:  python3 tools/make_embeddings.py
"""

import json
import sys
from pathlib import Path

import numpy as np

STRUCT = 25
DIM = 50

VOCAB = [
    "all", "some", "not",
    "Romans", "Italians", "Germans", "Europeans", "children",
    "love", "like", "hate", "fear",
]

# target cosine distance of each benign replacement to its original
BENIGN = {
    "kids": ("children", 0.21),
    "adore": ("love", 0.57),
    "dread": ("fear", 0.39),
    "Venetians": ("Romans", 0.28),
    "Milanese": ("Romans", 0.72),
    "Neapolitans": ("Romans", 0.57),
    "Polish": ("Germans", 0.37),
    "students": ("children", 0.27),
    "women": ("children", 0.24),
    "linguists": ("children", 0.92),
    "Parisians": ("Romans", 0.35),
    "French": ("Italians", 0.35),
    "Eurasians": ("Europeans", 0.45),
}

# adversarial blends: (original, weight on original, contaminant, distance)
BLENDS = {
    "detest": ("hate", 0.44, "love", 0.56),
    "Dutch": ("Germans", 0.80, "Italians", 0.40),
    "Spanish": ("Germans", 0.60, "children", 0.50),
}

# relocated noun hierarchies, in Romans/Italians/Germans/Europeans/children order
HIERARCHIES = {
    "animals": ["rabbits", "rodents", "cats", "mammals", "pets"],
    "religion": ["calvinists", "protestants", "catholics", "christians", "orthodox"],
    "america": ["Clevelanders", "Ohioans", "Californians", "Americans"],
}

NOUNS = ["Romans", "Italians", "Germans", "Europeans", "children"]

SUBSTITUTIONS = {
    "kids": {"children": "kids"},
    "adore": {"love": "adore"},
    "dread": {"fear": "dread"},
    "detest": {"hate": "detest"},
    "venetians": {"Romans": "Venetians"},
    "milanese": {"Romans": "Milanese"},
    "neapolitans": {"Romans": "Neapolitans"},
    "polish": {"Germans": "Polish"},
    "dutch": {"Germans": "Dutch"},
    "spanish": {"Germans": "Spanish"},
    "students": {"children": "students"},
    "women": {"children": "women"},
    "linguists": {"children": "linguists"},
    "r1": {"Romans": "Parisians", "Italians": "French"},
    "r2": {"Romans": "Parisians", "Italians": "French", "Germans": "Polish"},
    "r3": {"Romans": "Parisians", "Italians": "French", "Germans": "Polish",
           "Europeans": "Eurasians"},
    "r4": {"Romans": "Parisians", "Italians": "French", "Germans": "Polish",
           "Europeans": "Eurasians", "children": "students"},
    "r_animals": {"Romans": "rabbits", "Italians": "rodents", "Germans": "cats",
                  "Europeans": "mammals", "children": "pets"},
    "r_religion": {"Romans": "calvinists", "Italians": "protestants",
                   "Germans": "catholics", "Europeans": "christians",
                   "children": "orthodox"},
    "r_america": {"Romans": "Clevelanders", "Italians": "Ohioans",
                  "Germans": "Californians", "Europeans": "Americans",
                  "children": "women"},
}


def spare_mass(distance: float) -> float:
    """Spare-half norm that puts a structural copy at the given cosine
    distance from its unit-norm original."""
    return float(np.sqrt(1.0 / (1.0 - distance) ** 2 - 1.0))


def spare_direction(rng) -> np.ndarray:
    v = np.zeros(DIM)
    noise = rng.standard_normal(DIM - STRUCT)
    v[STRUCT:] = noise / np.linalg.norm(noise)
    return v


def build() -> dict[str, np.ndarray]:
    rng = np.random.default_rng(20)
    table: dict[str, np.ndarray] = {}
    for i, word in enumerate(VOCAB):
        v = np.zeros(DIM)
        v[i] = 1.0
        table[word] = v

    for word, (original, distance) in BENIGN.items():
        table[word] = table[original] + spare_mass(distance) * spare_direction(rng)

    for word, (original, weight, contaminant, distance) in BLENDS.items():
        v = weight * table[original] + np.sqrt(1 - weight**2) * table[contaminant]
        # the blend alone sits at cosine weight; spare mass closes the gap
        # to the target distance
        t = float(np.sqrt((weight / (1.0 - distance)) ** 2 - 1.0))
        table[word] = v + t * spare_direction(rng)

    # fresh frames live in structural dimensions above the vocabulary's
    free = range(len(VOCAB), STRUCT)
    for name, words in HIERARCHIES.items():
        basis = rng.standard_normal((len(free), len(NOUNS)))
        frame, _ = np.linalg.qr(basis)
        for j, word in enumerate(words):
            v = np.zeros(DIM)
            v[list(free)] = frame[:, j]
            table[word] = v
    return table


def cosine_distance(a: np.ndarray, b: np.ndarray) -> float:
    return 1.0 - float(a @ b / (np.linalg.norm(a) * np.linalg.norm(b)))


def main() -> int:
    root = Path(__file__).resolve().parent.parent
    resources = root / "src" / "folnli" / "resources"
    table = build()

    lines = []
    for word, vector in table.items():
        cells = " ".join(f"{x:.6f}" for x in vector)
        lines.append(f"{word} {cells}")
    out = resources / "embeddings_50d.txt"
    out.write_text("\n".join(lines) + "\n", encoding="utf-8")
    print(f"wrote {out} ({len(table)} words)")

    subs_dir = resources / "subs"
    subs_dir.mkdir(exist_ok=True)
    for name, mapping in SUBSTITUTIONS.items():
        spec = {"mapping": mapping, "embedding_source": "../embeddings_50d.txt"}
        path = subs_dir / f"{name}.json"
        path.write_text(json.dumps(spec, indent=2) + "\n", encoding="utf-8")
    print(f"wrote {len(SUBSTITUTIONS)} substitution specs to {subs_dir}")

    # verify the tuned distances survive the 6-decimal file rounding
    worst = 0.0
    for word, (original, distance) in BENIGN.items():
        got = cosine_distance(table[word], table[original])
        worst = max(worst, abs(got - distance))
    for word, (original, _, _, distance) in BLENDS.items():
        got = cosine_distance(table[word], table[original])
        worst = max(worst, abs(got - distance))
    print(f"worst cosine-distance error: {worst:.2e}")
    return 0 if worst < 1e-6 else 1


if __name__ == "__main__":
    sys.exit(main())
