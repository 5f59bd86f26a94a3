"""
Plan vocabulary shared by every backhaul scheme.

A scheme handler does not touch signals. It only returns an ExecutionPlan:
ordered backhaul transfers, precoding substitutions and the cancellation
steps a receiver applies once their operands are available. The executor
interprets every plan the same way.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

from cyclic_ia.cpcm import MessageId, SymbolicSlot


class SchemeKind(Enum):
    NONE = 'none'
    FF = 'ff'
    IAC_R = 'iac'
    IN_T = 'in'
    COMBINED = 'combined'


class BackhaulKind(Enum):
    FF = 'FF'   # Tx -> Rx
    R = 'R'     # Rx -> Rx
    T = 'T'     # Tx -> Tx


class Phase(Enum):
    PRE = 'pre-transmission'
    POST = 'post-reception'


@dataclass(frozen=True)
class Node:
    kind: str   # 'tx' or 'rx'
    index: int

    @classmethod
    def tx(cls, i: int) -> 'Node':
        return cls('tx', i)

    @classmethod
    def rx(cls, j: int) -> 'Node':
        return cls('rx', j)

    def __str__(self):
        return f'{self.kind.capitalize()}_{self.index}'


@dataclass(frozen=True)
class BackhaulTransfer:
    kind: BackhaulKind
    source: Node
    target: Node
    content: SymbolicSlot
    phase: Phase

    @property
    def link_id(self) -> str:
        """theta_<kind>,<target><source>, e.g. theta_R,21 for Rx_1 -> Rx_2."""
        return f'theta_{self.kind.value},{self.target.index}{self.source.index}'

    @property
    def rate(self) -> int:
        # one t-bit combination per transfer
        return 1

    def __str__(self):
        return f'{self.link_id}: {self.source} -> {self.target} [{self.content}] ({self.phase.value})'


@dataclass(frozen=True)
class CancellationStep:
    """Rx combines sign * operand for each operand, then subtracts the sum from its slots."""
    receiver: int
    operands: tuple[tuple[int, SymbolicSlot], ...]

    def combination(self) -> SymbolicSlot:
        out = SymbolicSlot()
        for sign, slot in self.operands:
            out = out.combined(slot, sign)
        return out

    def __str__(self):
        parts = ' '.join(f'{"+" if s > 0 else "-"}({slot})' for s, slot in self.operands)
        return f'Rx_{self.receiver}: {parts}'


@dataclass(frozen=True)
class ExecutionPlan:
    scheme: SchemeKind
    assignment: tuple[int, int, int]
    transfers: tuple[BackhaulTransfer, ...] = ()
    substitutions: dict = field(default_factory=dict)   # tx -> {MessageId: SymbolicSlot}
    cancellations: tuple[CancellationStep, ...] = ()
    declared_theta: dict = field(default_factory=dict)  # BackhaulKind -> int

    @property
    def theta(self) -> int:
        return sum(self.declared_theta.values())

    def referenced_messages(self) -> set[MessageId]:
        out = set()
        for t in self.transfers:
            out.update(t.content.messages())
        for subs in self.substitutions.values():
            for mid, slot in subs.items():
                out.add(mid)
                out.update(slot.messages())
        for step in self.cancellations:
            out.update(step.combination().messages())
            for _, slot in step.operands:
                out.update(slot.messages())
        return out


class Scheme:
    """Base class for backhaul scheme handlers."""

    kind: SchemeKind = SchemeKind.NONE
    name: str = 'Generic'
    theta: dict = {}

    def plan(self, assignment=(1, 2, 3)) -> ExecutionPlan:
        raise NotImplementedError

    @property
    def sum_rate(self) -> int:
        return sum(self.theta.values())

    def __repr__(self):
        return f'<{type(self).__name__} {self.kind.value}>'


class NoBackhaulScheme(Scheme):
    """Plain cyclic IA: nothing is exchanged."""

    kind = SchemeKind.NONE
    name = 'Cyclic IA (no backhaul)'
    theta = {}

    def plan(self, assignment=(1, 2, 3)):
        return ExecutionPlan(self.kind, tuple(assignment))


def term(rx: int, tx: int, coeff: int = 1) -> SymbolicSlot:
    """coeff * W_rx,tx as a one-term combination."""
    return SymbolicSlot.of(MessageId(rx, tx), coeff)
