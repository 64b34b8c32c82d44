"""Exception hierarchy shared by every layer of the library."""


class BsmlError(Exception):
    """Base class for all errors raised by this package."""


class ConfigError(BsmlError, ValueError):
    """Invalid machine configuration (for instance ``p < 1``)."""


class DomainError(BsmlError, IndexError):
    """A processor identifier outside ``[0, p-1]``."""


class UsageError(BsmlError):
    """The library was driven in a way its contracts forbid."""


class MachineMismatchError(UsageError):
    """Parallel vectors from two different machines were combined."""


class NestingError(UsageError):
    """A primitive was invoked from inside a worker of the same machine."""


class CommunicationError(BsmlError):
    """A message could not be delivered between workers."""


class PreconditionError(BsmlError, ValueError):
    """A checkable precondition of a partial function does not hold."""


class ContractError(BsmlError):
    """An algebra law or invariant was found violated in checked mode.

    ``witness`` holds the offending values so callers can report them.
    """

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class Bcast(BsmlError):
    """Broadcast requested from a root that is not a processor identifier."""


def require(condition, message, exc=PreconditionError):
    if not condition:
        raise exc(message)
