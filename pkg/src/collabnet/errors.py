"""Exception types shared across the engine."""


class CollabnetError(Exception):
    """Base class for all engine errors."""


class AliasConflict(CollabnetError):
    """A molecule name or alias collides with a different molecule."""


class SelfLoop(CollabnetError):
    """Attempted to create an interaction edge from a molecule to itself."""


class UnknownNode(CollabnetError):
    """A node id or name does not resolve to an existing node."""


class DuplicateConflict(CollabnetError):
    """A publication id already exists with a different title."""


class FrozenGraph(CollabnetError):
    """Mutation attempted on a graph snapshot handed out to readers."""


class IoFailure(CollabnetError):
    """Reading or writing a persistence file failed at the OS level."""


class FormatVersionMismatch(CollabnetError):
    """Persistence file carries an unsupported format header."""


class ChecksumMismatch(CollabnetError):
    """Persistence file content does not match its recorded checksum."""


class ParseError(CollabnetError):
    """An input file or record could not be parsed.

    ``line`` is the 1-based line number when known.
    """

    def __init__(self, message: str, line: int | None = None):
        super().__init__(message if line is None else f"line {line}: {message}")
        self.line = line


class UnknownMolecule(CollabnetError):
    """An interaction or query referenced a molecule name not in the catalog."""

    def __init__(self, name: str, line: int | None = None):
        msg = f"unknown molecule {name!r}"
        super().__init__(msg if line is None else f"line {line}: {msg}")
        self.name = name
        self.line = line


class ZeroTotal(CollabnetError):
    """Normalization by a zero publication total."""


class InvalidParams(CollabnetError):
    """Statistical routine called with parameters outside its domain."""


class DegenerateInput(CollabnetError):
    """Correlation requested on a constant series."""


class InvalidTable(CollabnetError):
    """Contingency table has an empty margin."""


class InsufficientData(CollabnetError):
    """The graph is too small or too sparse for the requested experiment."""


class EmptyNetwork(CollabnetError):
    """Ranking requested on a subnetwork with no nodes."""


class HttpError(CollabnetError):
    """Remote API returned a non-retryable or persistent HTTP error."""

    def __init__(self, status: int, message: str = ""):
        super().__init__(f"HTTP {status}" + (f": {message}" if message else ""))
        self.status = status


class NetworkTimeout(CollabnetError):
    """Remote API did not answer within the configured timeout."""


class RateLimited(CollabnetError):
    """Remote API kept answering 429 after all retries."""
