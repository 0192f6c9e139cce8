"""Exception hierarchy shared by the library and the command line front end."""


class MixedStabError(Exception):
    """Base class for every error raised by mixedstab."""

    exit_code = 2


class InvalidIndexError(MixedStabError, ValueError):
    """A basis label has a digit outside its site range."""


class DimensionMismatchError(MixedStabError, ValueError):
    """Two objects live on different Hilbert spaces."""


class PreconditionError(MixedStabError, ValueError):
    """An input violates the documented precondition of an operation."""


class SpecParseError(MixedStabError, ValueError):
    """A specification document could not be parsed."""


class NotAbelianError(MixedStabError):
    """Two generators (or group elements) fail to commute."""

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class EmptyCodeError(MixedStabError):
    """The stabilised subspace is zero dimensional."""


class BudgetExceededError(MixedStabError):
    """A closure or enumeration ran past its configured limit."""

    exit_code = 3


class InconsistentGroupError(MixedStabError):
    """The trace formula produced a value that no finite unitary group can give."""

    exit_code = 4


class InternalInconsistencyError(MixedStabError):
    """A result contradicts a theorem the library relies on; indicates a bug."""

    exit_code = 4
