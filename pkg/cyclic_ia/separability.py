"""
Separability conditions for the 3-user X-network.

A configuration (D, p) is perfectly separable when every dedicated message
lands in a slot of its receiver that nothing else occupies. The catalog
splits this into offset inequalities, written for an index assignment
(i, j, k) and repeated under the two circular relabelings:

    intra        two messages of one transmitter share a slot   (5)-(7)
    mac          two dedicated messages collide at a receiver   (8)-(10)
    inter        a dedicated message meets interference         (11)-(18)
    completion   W_ik against Tx_i / Tx_j interference at Rx_i  (C1)-(C4)

The first three groups make up the 42-condition catalog. The completion
group closes the remaining four pairs per receiver so that an empty
violation set is equivalent to all nine messages decoding cleanly.

Conditions are plain data; evaluating one is a comparison of two offsets.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from enum import Enum
from itertools import combinations

from cyclic_ia.cpcm import MessageId
from cyclic_ia.errors import DimensionError, IndexAssignmentError, RingMismatchError
from cyclic_ia.ring import Offset, ParamVector, ShiftMatrix

logger = logging.getLogger(__name__)


class ConditionKind(Enum):
    INTRA = 'intra'
    MAC = 'mac'
    INTER = 'inter'
    COMPLETION = 'completion'
    PAIRWISE = 'pairwise'


# Relabeling tags and the rotation each applies to (i, j, k).
RELABELINGS = {
    'base':   (0, 1, 2),
    'dagger': (1, 2, 0),
    'star':   (2, 0, 1),
}
_TAG_MARK = {'base': '', 'dagger': '†', 'star': '⋆'}


@dataclass(frozen=True)
class SignalRef:
    """d_channel * x^{p_param}; channel None for transmit-side comparisons."""
    channel: tuple[int, int] | None
    param: tuple[int, int]

    @property
    def message(self) -> MessageId:
        return MessageId(*self.param)

    def evaluate(self, D: ShiftMatrix, p: ParamVector) -> Offset:
        off = p[self.param]
        if self.channel is not None:
            off = D[self.channel] + off
        return off

    def __str__(self):
        px = f'x^{{p_{self.param[0]}{self.param[1]}}}'
        if self.channel is None:
            return px
        return f'd_{self.channel[0]}{self.channel[1]} {px}'


@dataclass(frozen=True)
class Condition:
    kind: ConditionKind
    lhs: SignalRef
    rhs: SignalRef
    assignment: tuple[int, int, int]
    source_eq: str
    relabeling: str = 'base'

    def __post_init__(self):
        if self.lhs == self.rhs:
            raise IndexAssignmentError(f'condition compares {self.lhs} with itself')

    @property
    def label(self) -> str:
        return f'({self.source_eq}){_TAG_MARK.get(self.relabeling, "")}'

    @property
    def node(self) -> tuple[str, int]:
        """('tx', i) for transmit-side conditions, ('rx', j) otherwise."""
        if self.lhs.channel is None:
            return ('tx', self.lhs.param[1])
        return ('rx', self.lhs.channel[0])

    @property
    def messages(self) -> frozenset:
        return frozenset((self.lhs.message, self.rhs.message))

    def holds(self, D: ShiftMatrix, p: ParamVector) -> bool:
        return self.lhs.evaluate(D, p) != self.rhs.evaluate(D, p)

    def __str__(self):
        return f'{self.lhs} != {self.rhs}'


# (eq, kind, lhs channel, lhs param, rhs channel, rhs param), roles over 'ijk'.
_TEMPLATES = [
    ('5',  ConditionKind.INTRA, None, 'ji', None, 'ki'),
    ('6',  ConditionKind.INTRA, None, 'ii', None, 'ji'),
    ('7',  ConditionKind.INTRA, None, 'ii', None, 'ki'),
    ('8',  ConditionKind.MAC,   'ij', 'ij', 'ik', 'ik'),
    ('9',  ConditionKind.MAC,   'ii', 'ii', 'ij', 'ij'),
    ('10', ConditionKind.MAC,   'ii', 'ii', 'ik', 'ik'),
    ('11', ConditionKind.INTER, 'ii', 'ii', 'ij', 'kj'),
    ('12', ConditionKind.INTER, 'ii', 'ii', 'ij', 'jj'),
    ('13', ConditionKind.INTER, 'ii', 'ii', 'ik', 'jk'),
    ('14', ConditionKind.INTER, 'ii', 'ii', 'ik', 'kk'),
    ('15', ConditionKind.INTER, 'ij', 'ij', 'ii', 'ji'),
    ('16', ConditionKind.INTER, 'ij', 'ij', 'ii', 'ki'),
    ('17', ConditionKind.INTER, 'ij', 'ij', 'ik', 'jk'),
    ('18', ConditionKind.INTER, 'ij', 'ij', 'ik', 'kk'),
]

_COMPLETION_TEMPLATES = [
    ('C1', ConditionKind.COMPLETION, 'ik', 'ik', 'ii', 'ji'),
    ('C2', ConditionKind.COMPLETION, 'ik', 'ik', 'ii', 'ki'),
    ('C3', ConditionKind.COMPLETION, 'ik', 'ik', 'ij', 'jj'),
    ('C4', ConditionKind.COMPLETION, 'ik', 'ik', 'ij', 'kj'),
]


def check_assignment(assignment) -> tuple[int, int, int]:
    assignment = tuple(int(a) for a in assignment)
    if len(assignment) != 3 or len(set(assignment)) != 3:
        raise IndexAssignmentError(f'assignment needs three distinct indices, got {assignment}')
    if any(a not in (1, 2, 3) for a in assignment):
        raise IndexAssignmentError(f'assignment {assignment} is not a permutation of 1..3')
    return assignment


def _instantiate(templates, assignment, relabeling) -> list[Condition]:
    roles = dict(zip('ijk', assignment))

    def pair(code):
        return None if code is None else (roles[code[0]], roles[code[1]])

    return [Condition(kind, SignalRef(pair(lc), pair(lp)), SignalRef(pair(rc), pair(rp)),
                      assignment, eq, relabeling)
            for eq, kind, lc, lp, rc, rp in templates]


def relabelings(assignment=(1, 2, 3)) -> dict[str, tuple[int, int, int]]:
    """base (i,j,k), dagger (j,k,i), star (k,i,j)."""
    a = check_assignment(assignment)
    return {tag: tuple(a[r] for r in rot) for tag, rot in RELABELINGS.items()}


def enumerate_conditions(assignment=(1, 2, 3), relabeling: str = 'base') -> list[Condition]:
    """The 14 conditions (5)-(18) for one index assignment."""
    return _instantiate(_TEMPLATES, check_assignment(assignment), relabeling)


def enumerate_completion(assignment=(1, 2, 3), relabeling: str = 'base') -> list[Condition]:
    return _instantiate(_COMPLETION_TEMPLATES, check_assignment(assignment), relabeling)


def full_catalog(assignment=(1, 2, 3), complete: bool = True) -> list[Condition]:
    """42 conditions over the three relabelings, 54 with the completion group."""
    out = []
    for tag, a in relabelings(assignment).items():
        out.extend(enumerate_conditions(a, tag))
        if complete:
            out.extend(enumerate_completion(a, tag))
    return out


def pairwise_conditions(K: int) -> list[Condition]:
    """
    Generic catalog for any K: distinct slots per transmitter, and at every
    receiver each dedicated message apart from every other arriving signal.
    """
    if K < 2:
        raise DimensionError(f'pairwise catalog needs K >= 2, got {K}')
    users = range(1, K + 1)
    out = []
    for i in users:
        for a, b in combinations(users, 2):
            out.append(Condition(ConditionKind.PAIRWISE, SignalRef(None, (a, i)), SignalRef(None, (b, i)),
                                 (i, a, b), 'pair'))
    for r in users:
        signals = [SignalRef((r, i), (j, i)) for i in users for j in users]
        for lhs, rhs in combinations(signals, 2):
            if lhs.channel == rhs.channel:
                continue  # same transmitter, covered above
            if lhs.param[0] != r and rhs.param[0] != r:
                continue
            out.append(Condition(ConditionKind.PAIRWISE, lhs, rhs, (r, lhs.param[1], rhs.param[1]), 'pair'))
    return out


# ── Evaluation ───────────────────────────────────────────────────────────

@dataclass(frozen=True)
class Violation:
    condition: Condition
    lhs_offset: Offset
    rhs_offset: Offset

    def describe(self) -> str:
        c = self.condition
        return f'{c.label} {c.kind.value}: {c.lhs} = {c.rhs} = {self.lhs_offset}'


class ViolationSet:
    """Violated conditions with both evaluated sides."""

    def __init__(self, violations=()):
        self.violated = list(violations)

    def __len__(self):
        return len(self.violated)

    def __iter__(self):
        return iter(self.violated)

    def __bool__(self):
        return bool(self.violated)

    def is_empty(self) -> bool:
        return not self.violated

    def labels(self) -> list[str]:
        return [v.condition.label for v in self.violated]

    def collisions(self) -> set:
        """{(('rx', j), frozenset({W_a, W_b})), ...} independent of labels."""
        return {(v.condition.node, v.condition.messages) for v in self.violated}


def check_all(D: ShiftMatrix, p: ParamVector, assignment=(1, 2, 3), complete: bool = True) -> ViolationSet:
    if D.size != 3 or p.size != 3:
        raise DimensionError(f'separability catalog is for 3 users, got D {D.size}x{D.size}, p {p.size}x{p.size}')
    if D.ring != p.ring:
        raise RingMismatchError(f'D is mod {D.n} but p is mod {p.n}')
    return evaluate_catalog(full_catalog(assignment, complete), D, p)


def evaluate_catalog(catalog, D: ShiftMatrix, p: ParamVector) -> ViolationSet:
    out = []
    for cond in catalog:
        lo, ro = cond.lhs.evaluate(D, p), cond.rhs.evaluate(D, p)
        if lo == ro:
            out.append(Violation(cond, lo, ro))
    if out:
        logger.debug('%d separability violations: %s', len(out), [v.condition.label for v in out])
    return ViolationSet(out)
