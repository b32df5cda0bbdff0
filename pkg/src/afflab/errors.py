"""Exception hierarchy shared by the library and the CLI."""


class AfflabError(Exception):
    exit_code = 1


class InputError(AfflabError, ValueError):
    """Malformed or out-of-range input."""

    exit_code = 3


class PreconditionError(AfflabError):
    """Input is well formed but violates a mathematical hypothesis."""

    exit_code = 4


class ResourceError(AfflabError):
    """Enumeration would exceed the configured word budget."""

    exit_code = 5
