"""Exception hierarchy shared by every module."""


class TriangleKitError(Exception):
    """Base class for all toolkit errors."""


class InvalidScenarioError(TriangleKitError, ValueError):
    pass


class BehaviorError(TriangleKitError, ValueError):
    """Structural problem with a behavior (missing table, bad scenario...)."""


class NotAContextError(TriangleKitError, KeyError):
    """A pair of variables was used as if it were jointly measurable."""

    def __str__(self):
        return Exception.__str__(self)


class UnsupportedCaseError(TriangleKitError, ValueError):
    pass


class IncompatibilityError(TriangleKitError, ValueError):
    """Quantum observables that should commute do not."""


class CapacityError(TriangleKitError, ValueError):
    pass


class SolverError(TriangleKitError, RuntimeError):
    """The LP solver could not reach a trustworthy status."""


class NoJointDistributionError(TriangleKitError):
    """Raised by decompose_noncontextual when the LP is infeasible.

    The Farkas vector of the feasibility program is kept on ``certificate``.
    """

    def __init__(self, message, certificate=None):
        super().__init__(message)
        self.certificate = certificate


class InfeasibleProgramError(TriangleKitError, ValueError):
    """A maximization was asked over an empty feasible set (e.g. an unattainable pin)."""
