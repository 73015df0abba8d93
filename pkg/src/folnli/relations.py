"""The seven entailment relation symbols and their converses.

A relation holds between two sets (word extensions, or sets of models of two
sentences) over a universe D:

    =   equivalence          x = y
    <   forward entailment   x is a proper subset of y
    >   backward entailment  x is a proper superset of y
    ^   negation             x and y disjoint, x union y = D
    |   alternation          x and y disjoint, x union y != D
    v   cover                x and y overlap,  x union y = D
    #   independence         none of the above
"""

from .errors import ConfigError

RELATIONS = ("=", "<", ">", "^", "|", "v", "#")

_CONVERSE = {"=": "=", "<": ">", ">": "<", "^": "^", "|": "|", "v": "v", "#": "#"}


def converse(rel: str) -> str:
    """Relation symbol for the swapped argument order."""
    try:
        return _CONVERSE[rel]
    except KeyError:
        raise ConfigError(f"unknown relation symbol {rel!r}") from None


def is_relation(sym: str) -> bool:
    return sym in _CONVERSE


def relation_of_sets(x: frozenset, y: frozenset, universe: frozenset) -> str:
    """Classify a pair of sets over a finite universe.

    Used to validate taxonomy configs against their set witnesses and as a
    ground-truth reference in tests.
    """
    if not (x <= universe and y <= universe):
        raise ConfigError("witness sets must be subsets of the universe")
    if x == y:
        return "="
    if x < y:
        return "<"
    if x > y:
        return ">"
    disjoint = not (x & y)
    exhaustive = (x | y) == universe
    if disjoint and exhaustive:
        return "^"
    if disjoint:
        return "|"
    if exhaustive:
        return "v"
    return "#"
