"""Exception types shared by all modules.

The CLI maps each class onto a process exit code.
"""


class QuiverCodimError(Exception):
    exit_code = 1


class InvalidInputError(QuiverCodimError, ValueError):
    """A precondition on a dimension vector, rank or option failed."""

    exit_code = 2


class ResourceCapError(QuiverCodimError):
    """An enumeration or basis would exceed the configured size cap."""

    exit_code = 3


class MethodDisagreementError(QuiverCodimError):
    """Two independent methods produced different answers."""

    exit_code = 4


class TruncationError(QuiverCodimError):
    """A truncated series vanished up to its truncation degree."""

    exit_code = 3
