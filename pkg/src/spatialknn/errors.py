"""Exception types shared across the package.

The CLI maps these onto exit codes: configuration problems are user
errors (exit 1), malformed or inconsistent input files are data errors
(exit 2), and linear-algebra breakdowns are numerical failures (exit 3).
"""


class ConfigError(ValueError):
    """A configuration file or option is missing, unknown, or ill-typed."""


class DataError(ValueError):
    """Input data violates the expected schema or value ranges."""


class SchemaError(DataError):
    """A required column is missing or the header does not match the schema."""


class ParseError(DataError):
    """A cell could not be parsed; the message names the row and column."""


class DegenerateInputError(ValueError):
    """An input is formally valid but statistically degenerate
    (e.g. a paired test on identical sequences)."""


class NumericalError(RuntimeError):
    """A numerical routine failed beyond recovery (e.g. covariance
    factorization that stays non-positive-definite after jitter)."""
