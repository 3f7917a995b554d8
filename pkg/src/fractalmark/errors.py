"""Exception hierarchy shared by all fractalmark modules.

Two failure classes matter to callers: bad input (files, flags, schemas)
versus a computation that cannot proceed on otherwise valid input. The CLI
maps them to exit status 2 and 1 respectively.
"""


class FractalmarkError(Exception):
    """Base class for all errors raised by this package."""


class InputError(FractalmarkError):
    """Malformed or unusable input: files, CSV rows, flags, config values."""


class ComputationError(FractalmarkError):
    """A well-formed request that cannot be computed (degenerate data, etc.)."""
