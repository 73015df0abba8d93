"""Building a labeled dataset of sentence pairs.

Pairs are sampled uniformly, labeled by the prover, deduplicated, and
split into train/test.  Uniform sampling makes almost every pair
logically independent ("#"), so generation can downsample that class
with a per-pair hash coin; the result only depends on the seed.
Run:  python3 demos/03_dataset.py
"""

from folnli import (
    SplitSpec,
    class_distribution,
    default_config,
    generate_dataset,
    restrict_config,
    sentence_text,
)

# a reduced language keeps this demo fast
config = restrict_config(
    default_config(), ("Romans", "Italians", "Europeans"), ("love", "like")
)

raw = generate_dataset(SplitSpec(400, 100, seed=7), config)
print(f"sampled {raw.attempts} candidate pairs to label 500")
print(f"duplicates skipped: {raw.duplicates}")

print("\nfirst five training pairs:")
for pair in raw.train[:5]:
    print(f"  {pair.relation}  {sentence_text(pair.left)}  /  "
          f"{sentence_text(pair.right)}")

dist = class_distribution(raw.train)
print("\nraw class distribution (train):")
for relation, share in sorted(dist.items(), key=lambda kv: -kv[1]):
    print(f"  {relation}  {share:6.2%}")

# the same split with "#" candidates kept at 10%: far flatter
flat = generate_dataset(SplitSpec(400, 100, seed=7, keep_independence=0.10), config)
dist = class_distribution(flat.train)
print(f"\nwith keep_independence=0.10 ({flat.independence_rejected} pairs rejected):")
for relation, share in sorted(dist.items(), key=lambda kv: -kv[1]):
    print(f"  {relation}  {share:6.2%}")

# length-filtered splits train on short sentences, test on longer ones
split = SplitSpec(200, 50, train_lengths=(5, 6), test_lengths=(7,), seed=7)
held_out = generate_dataset(split, config)
lengths = {len(sentence_text(p.left).split()) for p in held_out.test}
print(f"\nlength-split test pairs use sentence lengths {sorted(lengths)}")
