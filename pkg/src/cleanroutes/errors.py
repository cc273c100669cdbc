"""Exception hierarchy shared across the package.

The service layer maps these onto HTTP status classes: NotFoundError -> 404,
ConflictError -> 409, everything else raised by user input -> 422.
"""


class CleanRoutesError(Exception):
    """Base class for all errors raised by this package."""


class ParseError(CleanRoutesError):
    """Malformed input document (network JSON, ASCII grid, record files).

    Carries ``offset`` (byte offset) or ``line`` (1-based line number) when
    the underlying parser could locate the problem.
    """

    def __init__(self, message: str, *, offset: int | None = None, line: int | None = None):
        super().__init__(message)
        self.offset = offset
        self.line = line


class IntegrityError(CleanRoutesError):
    """A reference inside a document does not resolve (e.g. dangling edge endpoint)."""


class InvalidDataError(CleanRoutesError):
    """A value violates a declared constraint (non-positive length, rating out of range, ...)."""


class CoverageError(CleanRoutesError):
    """A route lies entirely outside the concentration raster."""


class NotFoundError(CleanRoutesError):
    """A referenced entity (participant, route, analysis, package) does not exist."""


class ConflictError(CleanRoutesError):
    """An operation's precondition on stored state is not met (missing asset, no analysis yet)."""


class ConsistencyError(CleanRoutesError):
    """Mutually inconsistent inputs (e.g. a benefit report that does not match its summaries)."""
