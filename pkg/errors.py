"""Error hierarchy shared by the library modules and the CLI.

Every message names the violated precondition so a caller can act on it
without reading the source. The CLI maps the two top-level families onto its
exit codes: ``InputError`` -> 2, ``ResourceCapError`` -> 3.
"""


class MonodromyError(Exception):
    """Base class for every error raised on purpose by this project."""


# ── Input errors (exit code 2) ─────────────────────────────────────

class InputError(MonodromyError):
    exit_code = 2


class DimensionMismatchError(InputError, ValueError):
    pass


class NotPrimeError(InputError, ValueError):
    pass


class NotInvertibleError(InputError, ValueError):
    pass


class PreconditionError(InputError, ValueError):
    pass


class RepresentationFileError(InputError):
    pass


class UnknownSuiteError(InputError, KeyError):
    def __str__(self):
        # KeyError quotes its argument; keep the plain message.
        return str(self.args[0]) if self.args else ""


# ── Resource caps (exit code 3) ────────────────────────────────────

class ResourceCapError(MonodromyError):
    exit_code = 3


class ClosureCapExceeded(ResourceCapError):
    pass


class DimensionCapExceeded(ResourceCapError):
    pass


# ── Internal consistency ───────────────────────────────────────────

class InvariantViolation(MonodromyError, AssertionError):
    """A self-check that the mathematics guarantees has failed."""

    exit_code = 1
