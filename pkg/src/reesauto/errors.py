"""Exception types shared across the library."""


class ReesAutoError(Exception):
    pass


class CompositionError(ReesAutoError):
    """Raised when two paths or arrows have mismatched endpoints."""


class ForeignPathError(ReesAutoError):
    """Raised when a path mentions edges or vertices unknown to a graph."""


class GraphMismatchError(ReesAutoError):
    """Raised when an operation combines objects over different graphs."""


class InvalidPaddedWordError(ReesAutoError):
    """Raised when a word over the padded pair alphabet is not a convolution."""


class InvalidSlidingWindowError(ReesAutoError):
    """Raised when a sliding-window table is missing entries or inconsistent."""


class DesynchronizedError(ReesAutoError):
    """Raised when a claimed synchronization function fails on a sample."""


class UnsupportedCaseError(ReesAutoError):
    """Raised when a construction needs machinery outside this library."""


class DocumentError(ReesAutoError):
    """Raised on malformed or unresolvable input documents."""
