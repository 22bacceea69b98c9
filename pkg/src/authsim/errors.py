"""Shared exception types.

``ParameterError`` covers malformed or out-of-range inputs (a usage problem);
``DomainError`` marks mathematically infeasible parameter combinations;
``InvariantViolation`` signals that a structural guarantee of a scheme or a
computation was broken and the result cannot be trusted.
"""


class ParameterError(ValueError):
    """Invalid argument: wrong type, out of range, or over a size cap."""


class DomainError(ParameterError):
    """Parameters outside the mathematical domain of a formula."""


class InvariantViolation(RuntimeError):
    """A structural invariant (symmetry, normalization, partition) failed."""
