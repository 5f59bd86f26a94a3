"""
Combined cyclic IAC and IN (one T-BHN and one R-BHN transfer).

Tx_j gives W_ij to Tx_k, which sends W_jk - W_ij so that Rx_j receives
W_jk cleanly. Rx_j then forwards W_jk + W_ji to Rx_k. Rx_k still sees
W_ki + W_jk - W_ij in its leaking slot, and recovers W_ki with

    (W_ki + W_jk - W_ij) - (W_jk + W_ji) + (W_ji + W_ij)

where W_ji + W_ij is Rx_k's own aligned interference slot.
"""
from cyclic_ia.cpcm import MessageId
from cyclic_ia.schemes.base import (
    BackhaulKind, BackhaulTransfer, CancellationStep, ExecutionPlan, Node, Phase, Scheme, SchemeKind, term,
)


class CombinedScheme(Scheme):
    kind = SchemeKind.COMBINED
    name = 'Combined cyclic IAC/IN with T-BHN and R-BHN'
    theta = {BackhaulKind.T: 1, BackhaulKind.R: 1}

    def plan(self, assignment=(1, 2, 3)):
        i, j, k = assignment
        forwarded = term(j, k) + term(j, i)
        aligned = term(j, i) + term(i, j)
        return ExecutionPlan(
            scheme=self.kind,
            assignment=(i, j, k),
            transfers=(
                BackhaulTransfer(BackhaulKind.T, Node.tx(j), Node.tx(k), term(i, j), Phase.PRE),
                BackhaulTransfer(BackhaulKind.R, Node.rx(j), Node.rx(k), forwarded, Phase.POST),
            ),
            substitutions={k: {MessageId(j, k): term(j, k) - term(i, j)}},
            cancellations=(CancellationStep(k, ((1, forwarded), (-1, aligned))),),
            declared_theta=dict(self.theta),
        )
