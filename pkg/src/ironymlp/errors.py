"""Exception hierarchy shared by the library and the CLI.

Every error category carries a distinct process exit code so shell
callers can tell parse problems from missing resources and so on.
"""


class IronyMlpError(Exception):
    """Base class; `exit_code` is what the CLI returns for this category."""

    exit_code = 1


class ParseError(IronyMlpError):
    """Malformed input file (wrong column count, bad number, ...)."""

    exit_code = 4


class ValidationError(IronyMlpError):
    """Well-formed input that violates a contract (label range, tag symbol, ...)."""

    exit_code = 5


class ResourceError(IronyMlpError):
    """A required resource file is missing or unreadable."""

    exit_code = 3


class ConfigError(IronyMlpError):
    """Invalid configuration value (non-positive sizes, impossible rank, ...)."""

    exit_code = 6


class IntegrityError(IronyMlpError):
    """Corrupt or wrong-version model container."""

    exit_code = 7


class TaskMismatchError(IronyMlpError):
    """Model trained for one subtask applied to data of the other."""

    exit_code = 8


class ConsistencyError(IronyMlpError):
    """Internal invariant broken (block width mismatch); indicates a bug."""

    exit_code = 1
