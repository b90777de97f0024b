"""Exception hierarchy shared by the library and the CLI exit-code mapping."""


class WsaucError(Exception):
    """Base class for all library errors."""


class ConfigError(WsaucError):
    """Bad configuration file, unknown key, or inconsistent CLI usage (exit 1)."""


class InputError(WsaucError, ValueError):
    """Invalid argument to a library operation (exit 2 when surfaced by the CLI)."""


class DataError(WsaucError):
    """Dataset files missing, malformed, or inconsistent with the config (exit 2)."""


class DegenerateInputError(InputError):
    """Structurally valid input that leaves an operation undefined, e.g. trimming
    that empties a side or a variance estimate with zero spread."""


class UnsupportedLossError(WsaucError, TypeError):
    """Operation not defined for the given surrogate kind (e.g. gradient of zero-one)."""


class NumericalError(WsaucError):
    """Non-finite values produced during computation, e.g. a diverging training run (exit 3)."""
