"""Exception hierarchy.

Every error carries an ``exit_code`` so the command-line front end can map
failures to distinct process statuses without a lookup table of its own.
"""


class ReebSpaceError(Exception):
    exit_code = 1


class ParseError(ReebSpaceError):
    exit_code = 3


class InvalidMesh(ReebSpaceError):
    exit_code = 3


class UnknownSimplex(ReebSpaceError, KeyError):
    exit_code = 3

    def __str__(self):
        return Exception.__str__(self)


class DegeneracyError(ReebSpaceError):
    """Input violates the genericity assumptions; re-run with a perturbation."""

    exit_code = 4
    hint = "perturb the field values (--perturb <strength>) or change --seed"

    def __str__(self):
        return f"{super().__str__()} ({self.hint})"


class DegenerateOrientation(DegeneracyError):
    pass


class OverlapDegeneracy(DegeneracyError):
    pass


class TripleIntersectionDegeneracy(DegeneracyError):
    pass


class CapExceeded(ReebSpaceError):
    exit_code = 5


class NotEquivalent(ReebSpaceError):
    exit_code = 6


class ConsistencyError(ReebSpaceError):
    """Internal invariant broken during traversal; always a bug, never bad input."""

    exit_code = 7


class InconsistentState(ConsistencyError):
    pass


class LoopClosureViolation(ConsistencyError):
    pass


class NoConnectorFound(ReebSpaceError):
    exit_code = 8


class InvalidHandle(ReebSpaceError, IndexError):
    exit_code = 1


class TimeBudgetExceeded(ReebSpaceError):
    exit_code = 9
