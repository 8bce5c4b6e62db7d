"""Exception types shared across the package.

Plain ``ValueError`` is used for malformed arguments (bad dimensions, cuts,
subsets, parameters); the classes here mark conditions that depend on the
data rather than the call signature.
"""

from __future__ import annotations


class BlochLabError(Exception):
    """Base class for data-dependent failures."""


class InvalidStateError(BlochLabError):
    """A matrix failed density-matrix validation; the message names the invariant."""


class NotPureError(BlochLabError):
    """An operation that requires a pure state received a mixed one."""


class NumericError(BlochLabError):
    """A quantity that must be real carried an imaginary residue above tolerance."""
