"""Exception hierarchy.

Errors that signal a falsified theorem check (a broken invariant of the
cluster structure rather than bad input) derive from ``TheoremViolation``;
the CLI maps those to exit code 2.
"""

from __future__ import annotations


class ClusterFanError(Exception):
    """Base class for every error raised by this package."""


class SizeMismatch(ClusterFanError, ValueError):
    pass


class OutOfRange(ClusterFanError, ValueError):
    pass


class InvalidTableau(ClusterFanError, ValueError):
    pass


class NotDTight(ClusterFanError, ValueError):
    def __init__(self, i: int, j: int, message: str | None = None):
        self.i, self.j = i, j
        super().__init__(message or f"D-tight inequality violated at (i, j) = ({i}, {j})")


class NotGT(ClusterFanError, ValueError):
    pass


class ZeroPolynomial(ClusterFanError, ValueError):
    pass


class FrozenVertex(ClusterFanError, ValueError):
    pass


class SingularGenerators(ClusterFanError, ValueError):
    pass


class TheoremViolation(ClusterFanError):
    """A computed object contradicts a structural claim that must hold."""


class NotDivisible(TheoremViolation):
    pass


class NotMonic(TheoremViolation):
    pass


class NotTriangular(TheoremViolation):
    pass


class LeadingNotDTight(TheoremViolation):
    pass


class LabelCollision(TheoremViolation):
    pass


class SeedMismatch(TheoremViolation):
    pass


class NotUnimodular(TheoremViolation):
    pass


class DegenerateFrozenSpan(TheoremViolation):
    pass
