"""Exception hierarchy shared across the library.

Domain errors (bad mathematical input) all derive from NekraError so the
CLI can map them to exit code 1 uniformly; file/schema problems derive
from NekraParseError and map to exit code 2.
"""


class NekraError(Exception):
    """Base class for domain errors."""


class NotAntichainError(NekraError):
    """Some vertex is a prefix of another."""


class IncompleteAntichainError(NekraError):
    """Cone weights do not sum to 1."""


class UnknownGeneratorError(NekraError):
    """A word references a generator the presentation does not declare."""


class WordBudgetError(NekraError):
    """A word expansion exceeded the configured length budget."""


class UnresolvedVertexError(NekraError):
    """Vertex too short to be resolved by the element's domain antichain."""


class NotInCommutatorError(NekraError):
    """An element required to have trivial abelianization class does not."""


class InfiniteQuotientError(NekraError):
    """The abelian quotient has positive free rank where a finite one is required."""


class TransversalNotFoundError(NekraError):
    """Breadth-first transversal search exhausted its budget."""


class AbelianizationStillInfiniteError(NekraError):
    """The duplicated presentation still has infinite V-abelianization (a bug)."""


class IdentityInputError(NekraError):
    """The identity element was passed where a nontrivial one is required."""


class BadLetterError(NekraError):
    """A vertex letter is out of range for the tree degree."""


class NekraParseError(Exception):
    """Base class for file/schema problems."""


class ParseError(NekraParseError):
    pass


class SchemaError(NekraParseError):
    pass
