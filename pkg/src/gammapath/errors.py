"""Exception types and enumeration limits shared across the toolkit."""

from __future__ import annotations

from dataclasses import dataclass


class GammapathError(Exception):
    """Base class for all toolkit-specific errors."""


class LimitExceeded(GammapathError):
    """An exhaustive search would overflow the configured limits."""

    def __init__(self, what: str, limit: int | float):
        super().__init__(f"{what} exceeds limit {limit}")
        self.what = what
        self.limit = limit


class PreconditionFailed(GammapathError, ValueError):
    """A verified precondition of an operation does not hold for the input."""


class GroupMismatchError(GammapathError, ValueError):
    """Operands belong to different groups."""


class InternalInvariantError(GammapathError):
    """A property guaranteed by a proven statement failed; implementation bug."""


class NormalizationFailed(InternalInvariantError):
    """Shift propagation failed verification on an input that passed its preconditions."""

    def __init__(self, edge_id):
        super().__init__(f"shift propagation left edge {edge_id!r} nonzero")
        self.edge_id = edge_id


@dataclass(frozen=True)
class Limits:
    """Search budgets for the exhaustive oracles.

    max_len bounds path length in edges, max_paths the number of enumerated
    paths, cycle_cap the number of enumerated simple cycles, budget_s wall
    time for best-effort checks, max_family the family size the exact
    packing/covering solvers accept.
    """

    max_len: int = 20
    max_paths: int = 200_000
    cycle_cap: int = 100_000
    budget_s: float = 600.0
    max_family: int = 10_000

    def __post_init__(self):
        if self.max_len <= 0 or self.max_paths <= 0 or self.cycle_cap <= 0:
            raise ValueError("limits must be positive")


DEFAULT_LIMITS = Limits()
