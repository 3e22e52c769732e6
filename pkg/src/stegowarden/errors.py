"""Exception types shared across the package."""


class ParameterError(ValueError):
    """An argument violates an operation's contract."""


class PgmFormatError(ValueError):
    """A PGM file is malformed, truncated, or uses an unsupported maxval."""
