"""Exception types shared across the package."""

from __future__ import annotations


class IadError(Exception):
    """Base class for all package errors."""


class CycleGuardExceeded(IadError):
    """Raised when an agent processes more events in one tick than allowed."""

    def __init__(self, agent_id: str, tick: int, limit: int):
        super().__init__(
            f"agent {agent_id!r} processed more than {limit} events at tick {tick}"
        )
        self.agent_id = agent_id
        self.tick = tick
        self.limit = limit


class TickOrderError(IadError, ValueError):
    """A tick was run out of sequence."""


class EmptyVavpSet(IadError, ValueError):
    """Cluster prioritization needs at least one VAVP point."""


class InvalidSpec(IadError, ValueError):
    """Distribution parameters are out of range or malformed."""


class EmptySample(IadError, ValueError):
    """A KS test was requested on an empty sample."""


class ParseError(IadError):
    """Malformed input text. ``line`` is 1-based, or 0 when not applicable."""

    def __init__(self, message: str, line: int = 0):
        prefix = f"line {line}: " if line else ""
        super().__init__(prefix + message)
        self.line = line


class ValidationError(IadError, ValueError):
    """A parsed scenario violates one of its invariants."""
