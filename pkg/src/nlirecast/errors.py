"""Exception hierarchy shared by the readers, converters, and CLI."""


class RecastError(Exception):
    """Base class for all errors raised by this package."""


class UsageError(RecastError):
    """Bad invocation: unknown flags, missing arguments, invalid combinations."""


class DataError(RecastError):
    """Malformed or contract-violating data (parse errors, duplicate ids, bad ranges)."""


class PartialWriteError(DataError):
    """An output file could not be written completely."""

    def __init__(self, message: str, lines_written: int):
        super().__init__(f"{message} (lines written: {lines_written})")
        self.lines_written = lines_written


class BackendError(RecastError):
    """The external neural conversion backend failed or misbehaved."""
