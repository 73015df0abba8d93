"""From sentences to first-order logic to a verified entailment label.

Each sentence pair is classified into one of seven relations by asking
four satisfiability questions about the conjunction of the translated
formulas (and their negations) with the taxonomy axioms that mention the
pair's words.  Run:  python3 demos/02_proving.py
"""

from folnli import (
    PairLabeler,
    compile_axioms,
    default_config,
    parse,
    render_formula,
    translate,
)

config = default_config()

left = parse("all Europeans like some Italians")
right = parse("not some Italians not like some Europeans")
print("left: ", render_formula(translate(left)))
print("right:", render_formula(translate(right)))

# the full axiom set encodes the taxonomy; the labeler filters it per pair
axioms = compile_axioms(config.taxonomy)
print(f"\ntaxonomy compiles to {len(axioms)} axioms, e.g.")
for formula in axioms[:3]:
    print(" ", render_formula(formula))

labeler = PairLabeler(config)
info = labeler.explain(left, right)
print(f"\nrelation: {info['label']}")
print("axioms kept for this pair:")
for formula in info["axioms"]:
    print(" ", render_formula(formula))
bit_names = ("L & R", "L & -R", "-L & R", "-L & -R")
for name, bit, verdict in zip(bit_names, info["bits"], info["verdicts"]):
    what = (f"model of size {verdict.model.size}" if bit
            else f"refutation in {len(verdict.refutation)} steps")
    print(f"  sat({name}) = {bit}  ({what})")

# a handful of pairs covering all seven relations
pairs = [
    ("all Romans love all Romans", "all Romans love all Romans"),
    ("all Europeans like some Italians", "not some Italians not like some Europeans"),
    ("some Italians love some Europeans", "some Romans love some Europeans"),
    ("not all not Germans not fear all Europeans", "not some not Germans fear all Europeans"),
    ("some not Europeans like all not Italians", "not some not Italians like all not Italians"),
    ("all Germans not hate all not Italians", "not all not Italians love some not Italians"),
    ("all children not hate all Romans", "all not Italians not fear all Romans"),
]
print()
for l, r in pairs:
    print(f"{labeler.label(parse(l), parse(r))}  {l}  /  {r}")
