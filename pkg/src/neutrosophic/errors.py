"""Exception hierarchy.

Mathematical findings (a failed verification) and usage errors are kept
apart so the command line can map them to different exit codes.
"""


class NmsError(Exception):
    """Base class for every error raised by the toolkit."""


class UsageError(NmsError, ValueError):
    """Bad arguments: out-of-range values, unknown names, malformed input."""


class KernelError(UsageError):
    """Kernel kind mismatch or use of an unverified kernel."""


class UniverseError(UsageError):
    """A point is outside the universe, or the universe data is invalid."""


class PreconditionError(UsageError):
    """An operation was called outside its stated hypotheses."""


class NotApplicableError(PreconditionError):
    """The hypotheses of a construction do not hold at the given inputs."""


class Finding(NmsError):
    """A mathematical outcome: something that should hold did not."""


class NoSolutionError(Finding):
    """A residual or diagonal search found no admissible value."""


class SearchFailure(Finding):
    """A constructive search ran out of budget."""


class VerificationError(Finding):
    """A constructed object failed its own verification."""
