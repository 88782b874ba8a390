"""Exception hierarchy.  The CLI maps these onto exit codes."""
from __future__ import annotations


class SphKStabError(Exception):
    """Base class for all errors raised by this package."""


class InputError(SphKStabError, ValueError):
    """Malformed or inconsistent input.

    ``path`` is a JSON pointer (or a short dotted location) when known.
    """

    def __init__(self, message: str, path: str | None = None):
        self.path = path
        self.message = message
        super().__init__(f"{path}: {message}" if path else message)


class DegenerateInputError(InputError):
    """Input that is well-formed but admits no answer (zero mass, empty lattice set)."""


class ConvergenceError(SphKStabError, RuntimeError):
    """A numerical procedure did not reach its tolerance."""


class DivergenceError(ConvergenceError):
    """Iterates blew up; no stationary point is expected to exist."""


class InvariantViolation(SphKStabError, AssertionError):
    """An internal consistency check failed."""
