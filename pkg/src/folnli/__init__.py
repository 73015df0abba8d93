"""Quantified artificial language, logical entailment labels, and Siamese
recurrent classifiers trained to recognize the entailment relation between
sentence pairs.

The package splits into:

- `relations`: the seven entailment relations and their set semantics
- `lang`: vocabulary, taxonomy, sentence grammar, generation and parsing
- `fol`: translation of sentences to first-order logic, background axioms,
  clausal form
- `prover`: resolution theorem proving, finite model search, pair labeling
- `data`: labeled dataset generation, splits, substitutions, file format
- `net`: recurrent sentence encoders and the entailment classifier, with
  training and evaluation loops
- `cli`: command-line entry points wrapping the above
"""

from .data import (
    GenerationResult,
    LabeledPair,
    SplitSpec,
    SubstitutionSpec,
    apply_substitution,
    class_distribution,
    distribution_table,
    generate_dataset,
    load_substitution,
    read_dataset,
    sentence_count_by_length,
    write_dataset,
)
from .errors import (
    ConfigError,
    DataError,
    FolnliError,
    NumericsError,
    SentenceParseError,
    UndecidedError,
)
from .fol import (
    clausify,
    compile_axioms,
    filter_axioms,
    render_formula,
    translate,
)
from .lang import (
    LanguageConfig,
    Sentence,
    Taxonomy,
    Vocabulary,
    default_config,
    enumerate_sentences,
    generate_sentence,
    load_config,
    parse,
    render,
    restrict_config,
    sentence_text,
)
from .prover import (
    BruteForceLabeler,
    PairLabeler,
    brute_force_label,
    check_sat,
    classify_pair,
    label_from_bits,
)
from .relations import RELATIONS, converse, relation_of_sets

__all__ = [
    "RELATIONS",
    "converse",
    "relation_of_sets",
    "FolnliError",
    "ConfigError",
    "SentenceParseError",
    "DataError",
    "UndecidedError",
    "NumericsError",
    "Vocabulary",
    "Sentence",
    "Taxonomy",
    "LanguageConfig",
    "default_config",
    "load_config",
    "parse",
    "render",
    "restrict_config",
    "sentence_text",
    "generate_sentence",
    "enumerate_sentences",
    "translate",
    "compile_axioms",
    "filter_axioms",
    "clausify",
    "render_formula",
    "check_sat",
    "classify_pair",
    "label_from_bits",
    "PairLabeler",
    "BruteForceLabeler",
    "brute_force_label",
    "LabeledPair",
    "SplitSpec",
    "GenerationResult",
    "generate_dataset",
    "sentence_count_by_length",
    "class_distribution",
    "distribution_table",
    "SubstitutionSpec",
    "load_substitution",
    "apply_substitution",
    "write_dataset",
    "read_dataset",
]

__version__ = "0.1.0"
