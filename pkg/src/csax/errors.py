class CsaxError(Exception):
    """Base class for errors raised by csax."""


class BuildError(CsaxError, ValueError):
    """Input rejected while building a structure."""


class NotFoundError(CsaxError, LookupError):
    """A select-style query asked for an occurrence that does not exist."""


class ContractError(CsaxError):
    """A caller broke an operation's precondition."""


class CorruptIndexError(CsaxError):
    """An index container failed validation on load."""
