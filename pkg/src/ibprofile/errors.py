"""Exception hierarchy.

Mathematically undefined outcomes (empty strata, zero variance) are not
errors; they are returned as :class:`ibprofile.assort.Undefined` values.
"""


class IBProfileError(Exception):
    """Base class for all library errors."""


class NegativeWeight(IBProfileError):
    def __init__(self, message, line=None):
        super().__init__(f"line {line}: {message}" if line is not None else message)
        self.line = line


class NodeIdOutOfRange(IBProfileError):
    pass


class EmptyGraph(IBProfileError):
    pass


class NonConvergence(IBProfileError):
    """Iterative solver hit its iteration cap.

    ``best`` holds the last iterate (or a result object wrapping it) so
    callers can still inspect it.
    """

    def __init__(self, message, best=None, residual=None, iterations=None):
        super().__init__(message)
        self.best = best
        self.residual = residual
        self.iterations = iterations


class PartitionSizeMismatch(IBProfileError):
    pass


class InvalidPartition(IBProfileError):
    pass


class RoleMismatch(IBProfileError):
    pass


class ZeroDenominator(IBProfileError):
    pass


class DegenerateMarginals(IBProfileError):
    pass


class EmptyIntraGroupStrata(IBProfileError):
    pass


class NoBtoIArcs(IBProfileError):
    pass


class TrivialSet(IBProfileError):
    pass


class ZeroMass(IBProfileError):
    pass


class TooLarge(IBProfileError):
    pass


class ZeroStationaryMass(IBProfileError):
    def __init__(self, node, value):
        super().__init__(f"stationary mass of node {node} is {value!r}; use a teleport remedy")
        self.node = node


class NotSymmetric(IBProfileError):
    pass


class Disconnected(IBProfileError):
    pass


class NotUndirected(IBProfileError):
    pass


class StateOutOfRange(IBProfileError):
    pass


class InvarianceViolation(IBProfileError):
    pass


class UnknownFixture(IBProfileError):
    pass


class ParseError(IBProfileError):
    def __init__(self, message, line=None):
        super().__init__(f"line {line}: {message}" if line is not None else message)
        self.line = line


class MissingNode(IBProfileError):
    pass


class DuplicateNode(IBProfileError):
    pass


class IdentityViolation(IBProfileError):
    """An identity that holds mathematically failed numerically: a bug."""
