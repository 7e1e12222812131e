"""Shared exception base for domain errors."""


class MontyknotError(Exception):
    """Base class for every domain error raised by this package.

    The CLI maps these to exit code 1; anything else escaping is a bug.
    """
