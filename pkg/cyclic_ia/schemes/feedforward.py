"""
Cyclic IA with a feedforward backhaul (FF-BHN).

Tx_k hands W_jk straight to Rx_j and leaves its slot empty on the air,
which removes both leaking collisions at once. Sum-rate 1.
"""
from cyclic_ia.cpcm import MessageId, SymbolicSlot
from cyclic_ia.schemes.base import (
    BackhaulKind, BackhaulTransfer, ExecutionPlan, Node, Phase, Scheme, SchemeKind, term,
)


class FeedforwardScheme(Scheme):
    kind = SchemeKind.FF
    name = 'Cyclic IA with FF-BHN'
    theta = {BackhaulKind.FF: 1}

    def plan(self, assignment=(1, 2, 3)):
        i, j, k = assignment
        transfer = BackhaulTransfer(BackhaulKind.FF, Node.tx(k), Node.rx(j), term(j, k), Phase.PRE)
        return ExecutionPlan(
            scheme=self.kind,
            assignment=(i, j, k),
            transfers=(transfer,),
            substitutions={k: {MessageId(j, k): SymbolicSlot()}},
            declared_theta=dict(self.theta),
        )
