"""Zero-shot evaluation on words the model has never seen.

A classifier is trained with the shipped 50-dim embedding table kept
frozen, then tested on pairs whose words are swapped for out-of-vocabulary
replacements: the model only meets the new words through their embedding
vectors.  A replacement that mirrors the original's vector survives the
swap; one whose vector leans toward a different word does not.
Run:  python3 demos/05_zeroshot.py  (takes a couple of minutes)
"""

import dataclasses
from importlib import resources

import numpy as np

from folnli import (
    SplitSpec,
    apply_substitution,
    default_config,
    generate_dataset,
    load_substitution,
    restrict_config,
)
from folnli import net

package = resources.files("folnli.resources")
EMBEDDINGS = str(package / "embeddings_50d.txt")

config = restrict_config(
    default_config(), ("Romans", "Italians", "children"), ("love", "hate")
)
data = generate_dataset(SplitSpec(2500, 500, seed=5, keep_independence=0.05), config)

vocab = net.dataset_vocab(data.train, data.test)
table = net.load_pretrained_embeddings(EMBEDDINGS, vocab)
result = net.train(
    "gru", data.train, data.test,
    epochs=50, batch_size=16, hidden=32, seed=0,
    vocab=vocab, embeddings=table, freeze_embeddings=True,
)
print(f"trained with frozen embeddings: test {result.final_test_accuracy:.1f}\n")

for name in ("kids", "detest"):
    sub = load_substitution(str(package / "subs" / f"{name}.json"))
    substituted, originals = apply_substitution(data.test, sub, config.vocabulary)

    new_words = tuple(sorted(set(sub.mapping.values())))
    rows = net.load_pretrained_embeddings(EMBEDDINGS, new_words)
    extended = dataclasses.replace(result.config, vocab=result.config.vocab + new_words)
    params = dict(result.params)
    params["embed"] = np.vstack([result.params["embed"], rows])

    before = net.evaluate(result.config, result.params, originals)
    after = net.evaluate(extended, params, substituted)
    for word, replacement in sub.mapping.items():
        index = {w: i for i, w in enumerate(extended.vocab)}
        distance = net.cosine_distance(
            params["embed"][index[word]], params["embed"][index[replacement]]
        )
        print(f"{word} -> {replacement}  (cosine distance {distance:.2f})")
    print(f"  fragment of {len(originals)} pairs: "
          f"{before.accuracy:.1f} before, {after.accuracy:.1f} after\n")
