"""
Channel constraints (i)-(x), the scheme's alignment equations, and the
parameter solver.

Exponent form, e_ab the exponent of d_ab, (i, j, k) the index assignment:

    (i)     e_ij + e_ki + e_jk  ==  e_ji + e_ik + e_kj
    (ii)    e_ii + e_jk + e_kj  ==  e_jj + e_ik + e_ki  ==  e_kk + e_ij + e_ji
    (iii)   det D_{i,k,i,k} != 0        (vi)    det D_{i,j,j,k} != 0
    (iv)    det D_{i,j,i,j} != 0        (vii)   det D_{k,j,k,i} != 0
    (v)     det D_{i,j,i,k} != 0        (viii)  det D_{k,j,k,j} != 0
    (ix)    e_ii + e_jj + e_kk  !=  e_ij + e_jk + e_ki  ==  e_ji + e_kj + e_ik
    (x)     2e_kk + e_ii + e_jj != e_jk + e_kj + e_ik + e_ki   (and rotations)

The solver walks the adjacency graph of the alignment groups (23)-(30)
from one fixed parameter p_ki and then checks the relations it did not
use, plus the exact pair of leaking collisions the backhaul resolves.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass

from cyclic_ia.errors import ConstraintError, DimensionError, SolverFault
from cyclic_ia.ring import Minor, Offset, ParamVector, ShiftMatrix, minor_of, offset_sum
from cyclic_ia.cpcm import MessageId
from cyclic_ia.separability import check_assignment, check_all

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ConstraintEntry:
    name: str
    kind: str           # 'equality', 'nonzero' or 'inequality'
    holds: bool
    witness: tuple      # evaluated offsets, per side

    def render(self) -> str:
        status = 'holds' if self.holds else 'VIOLATED'
        if self.kind == 'nonzero':
            sides = ' vs '.join(_mono(o) for o in self.witness)
        else:
            sides = ' | '.join(_mono(o) for o in self.witness)
        return f'{self.name:<7} {self.kind:<10} {status:<8} {sides}'


def _mono(o: Offset) -> str:
    return '1' if o.k == 0 else str(o)


class ConstraintReport:

    def __init__(self, entries, assignment, n):
        self.entries = list(entries)
        self.assignment = assignment
        self.n = n

    @property
    def holds(self) -> bool:
        return all(e.holds for e in self.entries)

    def failing(self) -> list[ConstraintEntry]:
        return [e for e in self.entries if not e.holds]

    def entry(self, name: str) -> ConstraintEntry:
        for e in self.entries:
            if e.name == name:
                return e
        raise KeyError(name)

    def __getitem__(self, name):
        return self.entry(name)

    def render(self) -> str:
        return '\n'.join(e.render() for e in self.entries)


# Constraints (iii)-(viii): (rows, cols) in roles.
_MINORS = [
    ('(iii)', ('i', 'k'), ('i', 'k')),
    ('(iv)', ('i', 'j'), ('i', 'j')),
    ('(v)', ('i', 'j'), ('i', 'k')),
    ('(vi)', ('i', 'j'), ('j', 'k')),
    ('(vii)', ('k', 'j'), ('k', 'i')),
    ('(viii)', ('k', 'j'), ('k', 'j')),
]


def _require_three(D: ShiftMatrix):
    if D.size != 3:
        raise DimensionError(f'constraints are stated for 3 users, got a {D.size}x{D.size} channel')


def check_constraints(D: ShiftMatrix, assignment=(1, 2, 3)) -> ConstraintReport:
    _require_three(D)
    i, j, k = check_assignment(assignment)

    def s(*pairs):
        return offset_sum((D[a, b] for a, b in pairs), D.ring)

    entries = []
    lhs, rhs = s((i, j), (k, i), (j, k)), s((j, i), (i, k), (k, j))
    entries.append(ConstraintEntry('(i)', 'equality', lhs == rhs, (lhs, rhs)))

    a, b, c = s((i, i), (j, k), (k, j)), s((j, j), (i, k), (k, i)), s((k, k), (i, j), (j, i))
    entries.append(ConstraintEntry('(ii)', 'equality', a == b == c, (a, b, c)))

    roles = {'i': i, 'j': j, 'k': k}
    for name, rows, cols in _MINORS:
        m: Minor = minor_of(D, (roles[rows[0]], roles[rows[1]]), (roles[cols[0]], roles[cols[1]]))
        entries.append(ConstraintEntry(name, 'nonzero', not m.is_zero(), (m.pos_exponent, m.neg_exponent)))

    diag, fwd, back = s((i, i), (j, j), (k, k)), s((i, j), (j, k), (k, i)), s((j, i), (k, j), (i, k))
    entries.append(ConstraintEntry('(ix)', 'inequality', diag != fwd and fwd == back, (diag, fwd, back)))

    x_sides = []
    for a_, b_, c_ in ((k, i, j), (i, j, k), (j, i, k)):
        left = s((a_, a_), (a_, a_), (b_, b_), (c_, c_))
        right = s((a_, b_), (b_, a_), (a_, c_), (c_, a_))
        x_sides.append((left, right))
    entries.append(ConstraintEntry('(x)', 'inequality', all(l != r for l, r in x_sides),
                                   tuple(o for pair in x_sides for o in pair)))

    report = ConstraintReport(entries, (i, j, k), D.n)
    if not report.holds:
        logger.debug('constraints failing for %r: %s', D, [e.name for e in report.failing()])
    return report


def x_agreement(report: ConstraintReport) -> bool:
    """True when the three inequalities of (x) all hold or all fail."""
    w = report['(x)'].witness
    flags = {w[0] != w[1], w[2] != w[3], w[4] != w[5]}
    return len(flags) == 1


# ── Alignment equations ─────────────────────────────────────────────────

# (label, [(channel roles, param roles), ...]); every member lands in one slot.
_GROUPS = [
    ('(23)', [('ii', 'ji'), ('ij', 'kj'), ('ik', 'jk')]),
    ('(24)', [('ii', 'ki'), ('ij', 'jj'), ('ik', 'kk')]),
    ('(25)', [('ji', 'ki'), ('jj', 'kj'), ('jk', 'ik')]),
    ('(26)', [('ji', 'ii'), ('jk', 'kk')]),
    ('(27)', [('jj', 'ij'), ('jk', 'jk')]),
    ('(28)', [('ki', 'ii'), ('kj', 'jj'), ('kk', 'ik')]),
    ('(29)', [('kj', 'ij'), ('ki', 'ji')]),
    ('(30)', [('ki', 'ki'), ('kk', 'jk')]),
]


@dataclass(frozen=True)
class EquationGroup:
    label: str
    receiver: int
    members: tuple[MessageId, ...]
    offsets: tuple[Offset, ...]

    @property
    def holds(self) -> bool:
        return len(set(self.offsets)) == 1


def scheme_equations(D: ShiftMatrix, p: ParamVector, assignment=(1, 2, 3)) -> list[EquationGroup]:
    roles = dict(zip('ijk', check_assignment(assignment)))
    out = []
    for label, members in _GROUPS:
        offsets, ids = [], []
        for ch, pa in members:
            c = (roles[ch[0]], roles[ch[1]])
            q = (roles[pa[0]], roles[pa[1]])
            offsets.append(D[c] + p[q])
            ids.append(MessageId(*q))
        out.append(EquationGroup(label, roles[members[0][0][0]], tuple(ids), tuple(offsets)))
    return out


def intended_collisions(assignment=(1, 2, 3)) -> set:
    """W_jk vs W_ij at Rx_j and W_ki vs W_jk at Rx_k."""
    i, j, k = check_assignment(assignment)
    return {
        (('rx', j), frozenset({MessageId(j, k), MessageId(i, j)})),
        (('rx', k), frozenset({MessageId(k, i), MessageId(j, k)})),
    }


def solve_parameters(D: ShiftMatrix, assignment=(1, 2, 3), seed: int = 0) -> ParamVector:
    """
    Derive all nine allocations from p_ki = seed.

    Raises ConstraintError when D fails (i)-(x), and SolverFault if the
    unused relations or the collision pattern come out wrong on a channel
    that passed them.
    """
    report = check_constraints(D, assignment)
    if not report.holds:
        raise ConstraintError(report)
    i, j, k = report.assignment

    def d(a, b):
        return D[a, b].k

    p = {(k, i): seed}
    p[(j, j)] = d(i, i) + p[(k, i)] - d(i, j)    # (24)
    p[(k, k)] = d(i, i) + p[(k, i)] - d(i, k)    # (24)
    p[(k, j)] = d(j, i) + p[(k, i)] - d(j, j)    # (25)
    p[(i, k)] = d(j, i) + p[(k, i)] - d(j, k)    # (25)
    p[(j, k)] = d(k, i) + p[(k, i)] - d(k, k)    # (30)
    p[(i, i)] = d(j, k) + p[(k, k)] - d(j, i)    # (26)
    p[(j, i)] = d(i, j) + p[(k, j)] - d(i, i)    # (23)
    p[(i, j)] = d(j, k) + p[(j, k)] - d(j, j)    # (27)
    params = ParamVector.from_mapping(p, D.n)

    broken = [g.label for g in scheme_equations(D, params, assignment) if not g.holds]
    if broken:
        raise SolverFault(f'alignment groups {broken} fail on {D!r} although (i)-(x) hold')
    collisions = check_all(D, params, assignment).collisions()
    expected = intended_collisions(assignment)
    if collisions != expected:
        raise SolverFault(f'solved parameters collide as {_fmt(collisions)}, expected {_fmt(expected)}')
    logger.debug('solved %r -> %s', D, params.tx_order())
    return params


def _fmt(collisions) -> list[str]:
    return sorted(f'{kind.capitalize()}_{idx}:' + '/'.join(sorted(str(m) for m in mids))
                  for (kind, idx), mids in collisions)
