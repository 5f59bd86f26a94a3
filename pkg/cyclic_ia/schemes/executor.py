"""
Plan interpreter.

    validate      phase and ordering rules, known message ids, declared Theta
    pre           transmitter and feedforward transfers, in plan order
    air           precoded transmit signals, propagation to every receiver
    post          receiver transfers in order; the target re-decodes after each,
                  a transfer whose source never holds its content is skipped
    close         cancellation steps that never had their operands are reported

A cancellation step is applied the first time all of its operands are
available at its receiver: a single message the receiver knows, a
backhaul combination it was handed, or one of its received slots verbatim.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

from cyclic_ia.cpcm import (
    DecodeRecord, DofReport, Message, MessageId, Observation, ReceivedSignal, SymbolicSlot, TransmitSignal,
    compose_transmit, decode, dof_of, evaluate, make_messages, propagate,
)
from cyclic_ia.errors import DimensionError, PlanError
from cyclic_ia.ring import ParamVector, ShiftMatrix
from cyclic_ia.schemes.base import (
    BackhaulKind, BackhaulTransfer, CancellationStep, ExecutionPlan, Node, Phase, SchemeKind, term,
)

logger = logging.getLogger(__name__)

_ROUTES = {
    BackhaulKind.FF: ('tx', 'rx'),
    BackhaulKind.T: ('tx', 'tx'),
    BackhaulKind.R: ('rx', 'rx'),
}


# ── Ledger / trace ───────────────────────────────────────────────────────

@dataclass(frozen=True)
class LedgerEntry:
    link_id: str
    kind: BackhaulKind
    phase: Phase
    content: SymbolicSlot
    bits: int


class BackhaulLedger:

    def __init__(self, width: int):
        self.width = width
        self.entries: list[LedgerEntry] = []

    def record(self, transfer: BackhaulTransfer):
        self.entries.append(LedgerEntry(transfer.link_id, transfer.kind, transfer.phase,
                                        transfer.content, self.width * transfer.rate))

    @property
    def sum_rate(self) -> int:
        return len(self.entries)

    @property
    def bits(self) -> int:
        return sum(e.bits for e in self.entries)

    def by_kind(self) -> dict:
        out: dict[BackhaulKind, int] = {}
        for e in self.entries:
            out[e.kind] = out.get(e.kind, 0) + 1
        return out

    def links(self) -> list[str]:
        return [e.link_id for e in self.entries]


@dataclass(frozen=True)
class SkippedTransfer:
    """A receiver transfer whose source never held its content."""
    transfer: BackhaulTransfer
    lacking: tuple[str, ...]

    def __str__(self):
        return f'{self.transfer.link_id}: {self.transfer.source} lacks {", ".join(self.lacking)}'


@dataclass(frozen=True, eq=False)
class SimulationTrace:
    plan: ExecutionPlan
    D: ShiftMatrix
    p: ParamVector
    messages: dict
    transmits: tuple[TransmitSignal, ...]
    received: tuple[ReceivedSignal, ...]
    history: list            # [(event, rx, DecodeRecord), ...]
    decoded: dict            # rx -> frozenset[MessageId]
    recovered: dict          # MessageId -> payload
    ledger: BackhaulLedger
    dof: DofReport
    skipped: tuple[SkippedTransfer, ...] = ()
    unapplied: tuple[CancellationStep, ...] = ()

    @property
    def decoded_count(self) -> int:
        return sum(len(v) for v in self.decoded.values())

    def decoded_messages(self) -> frozenset:
        return frozenset().union(*self.decoded.values())

    def missing(self) -> list[MessageId]:
        got = self.decoded_messages()
        return sorted(mid for mid in self.messages if mid not in got)

    @property
    def bit_exact(self) -> bool:
        return all(np.array_equal(payload, self.messages[mid].payload) for mid, payload in self.recovered.items())

    @property
    def completed(self) -> bool:
        """Every planned transfer was sent and every cancellation step applied."""
        return not self.skipped and not self.unapplied


def _fault(message: str) -> PlanError:
    logger.warning('plan rejected: %s', message)
    return PlanError(message)


# ── Validation ───────────────────────────────────────────────────────────

def validate_plan(plan: ExecutionPlan, K: int = 3):
    seen_post = False
    for t in plan.transfers:
        src_kind, dst_kind = _ROUTES[t.kind]
        if (t.source.kind, t.target.kind) != (src_kind, dst_kind):
            raise _fault(f'{t.link_id}: {t.kind.value} backhaul runs {src_kind} -> {dst_kind}, '
                         f'got {t.source} -> {t.target}')
        if t.source == t.target:
            raise _fault(f'{t.link_id}: source and target coincide')
        for node in (t.source, t.target):
            if not 1 <= node.index <= K:
                raise _fault(f'{t.link_id}: no node {node} in a {K}-user network')
        if t.kind in (BackhaulKind.T, BackhaulKind.FF) and t.phase is not Phase.PRE:
            raise _fault(f'{t.link_id}: transmitter-side transfers must happen before transmission')
        if t.kind is BackhaulKind.R and t.phase is not Phase.POST:
            raise _fault(f'{t.link_id}: receiver transfers can only follow reception')
        if t.phase is Phase.PRE and seen_post:
            raise _fault(f'{t.link_id}: pre-transmission transfer scheduled after reception')
        seen_post = seen_post or t.phase is Phase.POST
        if t.content.is_empty():
            raise _fault(f'{t.link_id}: empty transfer')
    for mid in plan.referenced_messages():
        if not (1 <= mid.rx <= K and 1 <= mid.tx <= K):
            raise _fault(f'plan references unknown message {mid}')
    for tx, subs in plan.substitutions.items():
        for mid in subs:
            if mid.tx != tx:
                raise _fault(f'Tx_{tx} cannot precode {mid}, it belongs to Tx_{mid.tx}')
    for step in plan.cancellations:
        if not 1 <= step.receiver <= K:
            raise _fault(f'cancellation at unknown receiver {step.receiver}')

    planned: dict[BackhaulKind, int] = {}
    for t in plan.transfers:
        planned[t.kind] = planned.get(t.kind, 0) + t.rate
    declared = {kind: rate for kind, rate in plan.declared_theta.items() if rate}
    if planned != declared:
        raise _fault(f'backhaul use {_theta_str(planned)} differs from declared {_theta_str(declared)}')


def _can_form(content: SymbolicSlot, singles, combos) -> bool:
    remainder = content
    for combo in combos:
        for sign in (1, -1):
            if all(remainder.coefficient(mid) == sign * c for mid, c in combo.terms):
                remainder = remainder.combined(combo, -sign)
                break
    return all(mid in singles for mid in remainder.messages())


# ── Receiver state ───────────────────────────────────────────────────────

class _Receiver:

    def __init__(self, index: int, signal: ReceivedSignal | None = None):
        self.index = index
        self.signal = signal
        self.delivered: list[Observation] = []
        self.singles: dict[MessageId, Message] = {}     # handed over the backhaul
        self.recovered: dict[MessageId, np.ndarray] = {}
        self.applied: set[int] = set()

    def accept(self, obs: Observation):
        self.delivered.append(obs)
        mid = obs.slot.clean_for()
        if mid is not None:
            self.singles[mid] = Message(mid, obs.payload)
            if mid.rx == self.index:
                self.recovered.setdefault(mid, obs.payload)

    def knows(self) -> dict[MessageId, np.ndarray]:
        out = {mid: m.payload for mid, m in self.singles.items()}
        out.update(self.recovered)
        return out

    def operand(self, slot: SymbolicSlot) -> Observation | None:
        mid = slot.clean_for()
        known = self.knows()
        if mid is not None and mid in known:
            return Observation(slot, known[mid].copy())
        if slot.messages() and all(m in known for m in slot.messages()):
            local = {m: Message(m, payload) for m, payload in known.items()}
            return Observation(slot, evaluate(slot, local))
        for obs in self.delivered:
            if obs.slot == slot:
                return obs
        for obs in self.signal.observations():
            if obs.slot == slot:
                return obs
        return None

    def run(self, steps: list[tuple[int, CancellationStep]]) -> DecodeRecord:
        extras = []
        for idx, step in steps:
            resolved = [self.operand(slot) for _, slot in step.operands]
            if any(o is None for o in resolved):
                continue
            combo = None
            for (sign, _), obs in zip(step.operands, resolved):
                part = Observation(obs.slot.scaled(sign), obs.payload)
                combo = part if combo is None else combo.combined(part)
            extras.extend(obs.combined(combo, -1) for obs in self.signal.observations())
            self.applied.add(idx)
        record = decode(self.signal, self.singles, extras)
        for mid, payload in record.recovered.items():
            self.recovered.setdefault(mid, payload)
        return record


# ── Execution ────────────────────────────────────────────────────────────

def execute(plan: ExecutionPlan, D: ShiftMatrix, p: ParamVector, t: int = 8, payload_seed: int | None = 0,
            messages: dict | None = None) -> SimulationTrace:
    if D.size != p.size or D.ring != p.ring:
        raise DimensionError(f'channel {D!r} and parameters {p!r} do not describe one network')
    K = D.size
    validate_plan(plan, K)
    messages = messages if messages is not None else make_messages(K, t, payload_seed)
    width = next(iter(messages.values())).width
    ledger = BackhaulLedger(width)

    tx_singles = {i: {MessageId(j, i) for j in range(1, K + 1)} for i in range(1, K + 1)}
    tx_combos: dict[int, list[SymbolicSlot]] = {i: [] for i in range(1, K + 1)}
    receivers = {j: _Receiver(j) for j in range(1, K + 1)}

    pre = [tr for tr in plan.transfers if tr.phase is Phase.PRE]
    post = [tr for tr in plan.transfers if tr.phase is Phase.POST]

    for tr in pre:
        src = tr.source.index
        if not _can_form(tr.content, tx_singles[src], tx_combos[src]):
            raise _fault(f'{tr.link_id}: {tr.source} cannot form {tr.content}')
        ledger.record(tr)
        obs = Observation(tr.content, evaluate(tr.content, messages, width))
        if tr.target.kind == 'tx':
            mid = tr.content.clean_for()
            if mid is not None:
                tx_singles[tr.target.index].add(mid)
            else:
                tx_combos[tr.target.index].append(tr.content)
        else:
            receivers[tr.target.index].accept(obs)
        logger.debug('pre-transmission %s', tr)

    for tx, subs in plan.substitutions.items():
        for mid, content in subs.items():
            if not _can_form(content, tx_singles[tx], tx_combos[tx]):
                raise _fault(f'Tx_{tx} cannot form precoded {content} for {mid}')

    transmits = tuple(compose_transmit(i, p, messages, plan.substitutions.get(i)) for i in range(1, K + 1))
    received = tuple(propagate(D, transmits, j) for j in range(1, K + 1))

    steps_at: dict[int, list[tuple[int, CancellationStep]]] = {j: [] for j in range(1, K + 1)}
    for idx, step in enumerate(plan.cancellations):
        steps_at[step.receiver].append((idx, step))

    history = []
    for j, r in zip(range(1, K + 1), received):
        receivers[j].signal = r
        history.append(('initial', j, receivers[j].run(steps_at[j])))

    skipped = []
    for pos, tr in enumerate(post):
        src, dst = receivers[tr.source.index], receivers[tr.target.index]
        obs = src.operand(tr.content)
        if obs is None:
            known = src.knows()
            lacking = tuple(str(mid) for mid in tr.content.messages() if mid not in known)
            if any(later.target == tr.source for later in post[pos + 1:]):
                # the source is still waiting on a later transfer
                raise _fault(f'{tr.link_id}: {tr.source} does not know {", ".join(lacking)} yet')
            skipped.append(SkippedTransfer(tr, lacking))
            logger.warning('%s skipped: %s cannot form %s', tr.link_id, tr.source, tr.content.render())
            continue
        ledger.record(tr)
        dst.accept(Observation(tr.content, obs.payload))
        history.append((f'after {tr.link_id}', dst.index, dst.run(steps_at[dst.index])))

    applied = set().union(*(rx.applied for rx in receivers.values()))
    unapplied = tuple(step for idx, step in enumerate(plan.cancellations) if idx not in applied)
    for step in unapplied:
        logger.warning('cancellation at Rx_%d never had its operands: %s', step.receiver, step)

    decoded = {j: frozenset(rx.recovered) for j, rx in receivers.items()}
    recovered = {mid: payload for rx in receivers.values() for mid, payload in rx.recovered.items()}
    dof = dof_of(sum(len(v) for v in decoded.values()), D.n)
    logger.info('%s on %r: %d decoded, DoF %s, Theta %d', plan.scheme.value, D, dof.decoded, dof.dof,
                ledger.sum_rate)
    return SimulationTrace(plan, D, p, messages, transmits, received, history, decoded, recovered, ledger, dof,
                           tuple(skipped), unapplied)


def _theta_str(theta: dict) -> str:
    return '{' + ', '.join(f'{k.value}: {v}' for k, v in sorted(theta.items(), key=lambda kv: kv[0].value)) + '}'


# ── Single-transfer receiver plans ──────────────────────────────────────

def _distinct_slots(signal: ReceivedSignal) -> list[SymbolicSlot]:
    return list(dict.fromkeys(s for s in signal.slots if not s.is_empty()))


def single_transfer_plans(assignment=(1, 2, 3), K: int = 3,
                          received: tuple[ReceivedSignal, ...] | None = None) -> list[ExecutionPlan]:
    """
    Every R-BHN plan with exactly one transfer.

    Without received signals the content is one message the source could
    decode itself. With them the content may also be any slot the source
    received, and the target may cancel it directly or after pairing it
    with one of its own slots.
    """
    plans = []
    for src in range(1, K + 1):
        for dst in range(1, K + 1):
            if src == dst:
                continue
            contents = [term(src, tx) for tx in range(1, K + 1)]
            options: list[tuple[CancellationStep, ...]] = [()]
            if received is not None:
                contents = list(dict.fromkeys(contents + _distinct_slots(received[src - 1])))
            for content in contents:
                if received is not None:
                    options = [(), (CancellationStep(dst, ((1, content),)),)]
                    options += [(CancellationStep(dst, ((1, content), (-1, own))),)
                                for own in _distinct_slots(received[dst - 1]) if own != content]
                transfer = BackhaulTransfer(BackhaulKind.R, Node.rx(src), Node.rx(dst), content, Phase.POST)
                for steps in options:
                    plans.append(ExecutionPlan(SchemeKind.IAC_R, tuple(assignment), (transfer,),
                                               cancellations=steps, declared_theta={BackhaulKind.R: 1}))
    return plans


def best_single_transfer(D: ShiftMatrix, p: ParamVector, assignment=(1, 2, 3), t: int = 8,
                         payload_seed: int | None = 0) -> int:
    """Most messages any single R-BHN transfer achieves; transfers the source cannot form do not count."""
    messages = make_messages(D.size, t, payload_seed)
    transmits = [compose_transmit(i, p, messages) for i in range(1, D.size + 1)]
    received = tuple(propagate(D, transmits, j) for j in range(1, D.size + 1))
    best = 0
    for plan in single_transfer_plans(assignment, D.size, received):
        trace = execute(plan, D, p, t, messages=messages)
        if trace.completed:
            best = max(best, trace.decoded_count)
    return best
