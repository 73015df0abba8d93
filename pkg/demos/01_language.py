"""Tour of the artificial language: vocabulary, grammar, and taxonomy.

Sentences have a fixed quantifier-noun-verb-quantifier-noun skeleton with
four optional negation slots, so the whole language is small enough to
enumerate.  Run:  python3 demos/01_language.py
"""

from folnli import (
    Vocabulary,
    default_config,
    enumerate_sentences,
    parse,
    render,
    sentence_count_by_length,
)

vocab = Vocabulary()
print("quantifiers:", ", ".join(vocab.quantifiers))
print("nouns:      ", ", ".join(vocab.nouns))
print("verbs:      ", ", ".join(vocab.verbs))

# parse / render round-trip on a sentence using every negation slot
text = "not all not Germans not fear all not Italians"
sentence = parse(text)
print("\nparsed:", sentence)
print("rendered back:", " ".join(render(sentence)))

# the taxonomy stores one of seven relations per word pair
config = default_config()
for a, b in [("Romans", "Italians"), ("Italians", "Romans"),
             ("Romans", "Germans"), ("children", "Europeans"),
             ("love", "like"), ("love", "hate")]:
    print(f"{a:>9} {config.taxonomy.lexical_relation(a, b)} {b}")

# the language is finite: count every sentence by surface length
by_length = sentence_count_by_length(vocab)
total = sum(by_length.values())
print("\nsentences by length:", dict(sorted(by_length.items())))
print(f"total {total} sentences -> {total**2:,} ordered pairs")

# and it can be enumerated outright
first = next(iter(enumerate_sentences()))
print("first sentence in enumeration order:", " ".join(render(first)))
