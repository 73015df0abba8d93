"""Exception types shared across the package.

The CLI maps each family to a distinct exit code, so keep the hierarchy flat
and purposeful.
"""


class FolnliError(Exception):
    """Base class for all package errors."""


class ConfigError(FolnliError):
    """Invalid vocabulary, taxonomy, or run configuration."""


class SentenceParseError(FolnliError):
    """Token sequence not derivable from the grammar.

    `position` is the 1-based index of the offending token.
    """

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at token {position})")
        self.position = position


class DataError(FolnliError):
    """Malformed dataset file, infeasible split spec, or vocabulary mismatch."""


class UndecidedError(FolnliError):
    """The prover exhausted its limits on at least one satisfiability bit."""


class NumericsError(FolnliError):
    """Non-finite values encountered during optimization."""
