"""Exception hierarchy shared by every layer of the simulator.

Undecodable messages and infeasible configurations are results, not errors;
the classes below cover malformed inputs and broken plans only.
"""


class CyclicIAError(Exception):
    """Base class for all simulator errors."""


class RingMismatchError(CyclicIAError, ValueError):
    """Offsets (or matrices of offsets) from different ring sizes were combined."""


class DimensionError(CyclicIAError, ValueError):
    """A matrix, signal or index does not fit the network dimensions."""


class IndexAssignmentError(CyclicIAError, ValueError):
    """Repeated user indices where distinct ones are required."""


class MessageError(CyclicIAError, ValueError):
    """Duplicate or unknown message identifier."""


class PlanError(CyclicIAError):
    """An execution plan is inconsistent: bad phase, missing operand, unknown message."""


class ConstraintError(CyclicIAError):
    """The channel violates the scheme constraints; carries the failing report."""

    def __init__(self, report):
        self.report = report
        failing = ', '.join(entry.name for entry in report.failing())
        super().__init__(f'channel violates constraints: {failing}')


class SolverFault(CyclicIAError):
    """A residual alignment relation failed although the constraints hold."""


class SearchGuardError(CyclicIAError, ValueError):
    """Exhaustive search requested beyond the configured ring-size guard."""


class ScenarioError(CyclicIAError, ValueError):
    """A scenario document could not be parsed or is semantically invalid."""
