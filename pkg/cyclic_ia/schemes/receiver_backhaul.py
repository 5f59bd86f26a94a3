"""
Cyclic IAC over a receiver backhaul (R-BHN).

Two decoded messages are forwarded after reception, in this order:

    Rx_i -> Rx_j   W_ij    Rx_j cancels it and decodes W_jk
    Rx_j -> Rx_k   W_jk    Rx_k cancels it and decodes W_ki

Rx_j only knows W_jk after the first transfer, so the order is fixed.
"""
from cyclic_ia.schemes.base import (
    BackhaulKind, BackhaulTransfer, CancellationStep, ExecutionPlan, Node, Phase, Scheme, SchemeKind, term,
)


class ReceiverBackhaulScheme(Scheme):
    kind = SchemeKind.IAC_R
    name = 'Cyclic IAC with R-BHN'
    theta = {BackhaulKind.R: 2}

    def plan(self, assignment=(1, 2, 3)):
        i, j, k = assignment
        return ExecutionPlan(
            scheme=self.kind,
            assignment=(i, j, k),
            transfers=(
                BackhaulTransfer(BackhaulKind.R, Node.rx(i), Node.rx(j), term(i, j), Phase.POST),
                BackhaulTransfer(BackhaulKind.R, Node.rx(j), Node.rx(k), term(j, k), Phase.POST),
            ),
            cancellations=(
                CancellationStep(j, ((1, term(i, j)),)),
                CancellationStep(k, ((1, term(j, k)),)),
            ),
            declared_theta=dict(self.theta),
        )


def reversed_plan(assignment=(1, 2, 3)):
    """The same transfers in the wrong order; the executor rejects it."""
    plan = ReceiverBackhaulScheme().plan(assignment)
    return type(plan)(plan.scheme, plan.assignment, tuple(reversed(plan.transfers)),
                      plan.substitutions, plan.cancellations, plan.declared_theta)
