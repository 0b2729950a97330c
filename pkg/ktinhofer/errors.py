"""Exception types raised by the toolkit.

Parse and argument errors subclass ``ValueError`` so callers that only know
about the builtin still catch them.
"""

from __future__ import annotations


class KTinhoferError(Exception):
    """Base class for every error raised on purpose by this package."""


class GraphFormatError(KTinhoferError, ValueError):
    """Malformed cgraph, circuit or label text."""

    def __init__(self, message: str, line: int | None = None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class InvalidArgumentError(KTinhoferError, ValueError):
    """A precondition on an operation's arguments does not hold."""


class SizeBoundError(KTinhoferError):
    """An enumeration bound or search cap was exceeded."""

    def __init__(self, what: str, limit: int, env_var: str):
        super().__init__(
            f"{what} exceeds the configured limit {limit} "
            f"(raise {env_var} to allow larger inputs)"
        )
        self.limit = limit
        self.env_var = env_var


class UnstableColoringError(KTinhoferError):
    """A coloring passed where a stable one is required is not stable."""


class PolicyError(KTinhoferError):
    """A scripted choice policy named a vertex outside the selected cell."""


class ParityError(KTinhoferError):
    """A pair passed to the flip-parity report is not a two-vertex color class."""
