"""Exception hierarchy shared by every layer of the kernel."""


class CharFrobError(Exception):
    """Base class for all errors raised by charfrob."""


class RingMismatchError(CharFrobError, ValueError):
    """Operands live in different polynomial rings."""


class ExponentOverflowError(CharFrobError, OverflowError):
    """An exponent left the range representable by the packed monomial encoding."""


class ResourceLimitError(CharFrobError):
    """A step budget or size guard was exhausted before the computation finished."""


class ContainmentError(CharFrobError, ValueError):
    """A required ideal or module containment does not hold."""


class EmbeddingError(CharFrobError):
    """A rank-one module could not be embedded as an ideal within the search budget."""


class TestElementError(CharFrobError):
    """No test element was found within the search budget."""

    __test__ = False  # keep pytest from collecting this class


class IndexSearchError(CharFrobError):
    """No Cartier index was found below the configured bounds."""
