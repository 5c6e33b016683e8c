"""Exception hierarchy.

Everything raised on purpose derives from :class:`LmmError`; the CLI maps
:class:`UsageError` subclasses to exit code 1 and every other
:class:`LmmError` to exit code 2.
"""


class LmmError(Exception):
    pass


class UsageError(LmmError):
    """Invalid input supplied by the caller."""


class NumericalError(LmmError):
    """A computation failed to produce a trustworthy number."""


class ZeroLeadingAlpha(UsageError):
    pass


class LengthMismatch(UsageError):
    pass


class EmptyBlock(UsageError):
    pass


class MissingExact(UsageError):
    pass


class StartUnavailable(UsageError):
    pass


class NotWeaklyStable(UsageError):
    pass


class SizeExceeded(UsageError):
    pass


class NoConvergence(NumericalError):
    pass


class NewtonDiverged(NumericalError):
    pass


class SingularA(NumericalError):
    pass
