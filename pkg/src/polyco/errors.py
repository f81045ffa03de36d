"""Exception types raised across the package."""


class PolycoError(Exception):
    """Base class for all package errors."""


class CoordinateError(PolycoError, ValueError):
    """Label collision, unknown label or mismatched coordinate lists."""


class DimensionMismatch(PolycoError, ValueError):
    pass


class EmptyPolyhedron(PolycoError):
    """The polyhedron has no feasible point."""


class EmptyFeasible(EmptyPolyhedron):
    """A query or MOLP has an empty feasible set."""


class UnboundedObjective(PolycoError):
    """An objective is unbounded below; ``ray`` certifies the direction."""

    def __init__(self, message, ray=None, objective=None):
        super().__init__(message)
        self.ray = ray
        self.objective = objective


class NumericInstability(PolycoError):
    """The LP kernel could not certify its answer."""


class DimensionCapExceeded(PolycoError):
    pass


class NotMonotone(PolycoError):
    """A row violates the upper-set sign pattern.

    ``row`` indexes the offending inequality and ``column`` the offending
    port, counted over functionality ports first, then resource ports.
    """

    def __init__(self, message, row=None, column=None):
        super().__init__(message)
        self.row = row
        self.column = column


class MalformedGraph(PolycoError, ValueError):
    pass


class ConvexityViolated(PolycoError, ValueError):
    pass


class OracleInconsistent(PolycoError):
    pass


class PointBeyondReference(PolycoError, ValueError):
    pass
