"""Exception hierarchy.

Every error raised by the library derives from :class:`ThickEmbedError`, so
callers (and the CLI) can catch one base class.  Errors that mirror a builtin
category also inherit from it (``ValueError``, ``KeyError``).
"""


class ThickEmbedError(Exception):
    """Base class for all library errors."""


class MalformedSimplexError(ThickEmbedError, ValueError):
    """A simplex tuple repeats a vertex or exceeds the declared dimension."""


class VertexRangeError(ThickEmbedError, ValueError):
    """A vertex id lies outside ``0 .. V-1``."""


class SimplexNotFoundError(ThickEmbedError, KeyError):
    """A queried simplex is not part of the complex."""


class DimensionMismatchError(ThickEmbedError, ValueError):
    """Point sets live in different ambient dimensions."""


class DegenerateSimplexError(ThickEmbedError, ValueError):
    """An embedded simplex has collapsed affine span."""


class DegenerateLinkError(ThickEmbedError, ValueError):
    """A link vertex projects to zero in the normal space of its base simplex."""


class ParameterError(ThickEmbedError, ValueError):
    """An operation parameter is outside its admissible range."""


class SpecError(ThickEmbedError, ValueError):
    """A family-generator spec is infeasible or unknown."""


class SaturationError(ThickEmbedError, RuntimeError):
    """Constrained placement did not converge within the resample budget.

    ``constraint`` describes the last violated constraint, e.g.
    ``("edge", (u, v), distance)`` or ``("link", sigma, angle)``.
    """

    def __init__(self, message, constraint=None, rounds=None):
        super().__init__(message)
        self.constraint = constraint
        self.rounds = rounds


class InvalidEmbeddingError(ThickEmbedError, RuntimeError):
    """A straight-line map is not injective (zero distance or degenerate simplex)."""


class ParseError(ThickEmbedError, ValueError):
    """A text file could not be parsed; ``line`` is 1-based when known."""

    def __init__(self, message, line=None, path=None):
        where = ""
        if path is not None:
            where += f"{path}:"
        if line is not None:
            where += f"{line}:"
        super().__init__(f"{where} {message}" if where else message)
        self.line = line
        self.path = path
