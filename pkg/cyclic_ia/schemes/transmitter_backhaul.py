"""
Cyclic IN over a transmitter backhaul (T-BHN).

Before transmission Tx_j gives W_ij to Tx_k, and Tx_k passes W_ij - W_jk
on to Tx_i. The precoded slots then neutralize each other over the air:

    Tx_k sends  W_jk - W_ij          in W_jk's slot
    Tx_i sends  W_ki + W_ij - W_jk   in W_ki's slot

At Rx_j the leaked W_ij cancels the -W_ij, and at Rx_k the -W_jk of Tx_i
cancels the arriving W_jk. No receiver cancellation is needed.
"""
from cyclic_ia.cpcm import MessageId
from cyclic_ia.schemes.base import (
    BackhaulKind, BackhaulTransfer, ExecutionPlan, Node, Phase, Scheme, SchemeKind, term,
)


class TransmitterBackhaulScheme(Scheme):
    kind = SchemeKind.IN_T
    name = 'Cyclic IN with T-BHN'
    theta = {BackhaulKind.T: 2}

    def plan(self, assignment=(1, 2, 3)):
        i, j, k = assignment
        return ExecutionPlan(
            scheme=self.kind,
            assignment=(i, j, k),
            transfers=(
                BackhaulTransfer(BackhaulKind.T, Node.tx(j), Node.tx(k), term(i, j), Phase.PRE),
                BackhaulTransfer(BackhaulKind.T, Node.tx(k), Node.tx(i), term(i, j) - term(j, k), Phase.PRE),
            ),
            substitutions={
                k: {MessageId(j, k): term(j, k) - term(i, j)},
                i: {MessageId(k, i): term(k, i) + term(i, j) - term(j, k)},
            },
            declared_theta=dict(self.theta),
        )
