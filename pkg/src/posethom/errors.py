class PosetHomError(ValueError):
    """Base class; the CLI maps subclasses to exit codes."""

    exit_code = 1


class ValidationError(PosetHomError):
    """Input data is inconsistent (bad poset, non-functorial maps, ...)."""

    exit_code = 2


class PreconditionError(PosetHomError):
    """A structural hypothesis of an operation does not hold."""

    exit_code = 3


class ParseError(PosetHomError):
    exit_code = 4
