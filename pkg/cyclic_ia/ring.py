"""
Cyclic offset arithmetic.

Every channel gain of the cyclic polynomial channel model is a pure monomial
x^k modulo x^n - 1, so the whole algebra reduces to exponents mod n:

    Offset        one exponent residue, always canonical (0 <= k < n)
    ShiftMatrix   K x K channel D = (d_ji), receivers are rows
    ParamVector   K x K allocations p_ji, same (receiver, transmitter) axes
    Minor         2 x 2 subdeterminant x^a - x^b kept as its exponent pair

Multiplying by x^k is a right cyclic shift of slot indices (exponent addition).
User indices in the public API are 1-based, as in W_ji / d_ji.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from cyclic_ia.errors import DimensionError, IndexAssignmentError, RingMismatchError


@dataclass(frozen=True)
class RingSize:
    """Number n of signalling dimensions per period."""
    n: int

    def __post_init__(self):
        if not isinstance(self.n, int) or self.n < 1:
            raise DimensionError(f'ring size must be a positive integer, got {self.n!r}')

    def offset(self, k: int) -> 'Offset':
        return Offset(k, self)

    @property
    def zero(self) -> 'Offset':
        return Offset(0, self)


@dataclass(frozen=True)
class Offset:
    """Exponent k of x^k, reduced mod n on construction."""
    k: int
    ring: RingSize

    def __post_init__(self):
        object.__setattr__(self, 'k', self.k % self.ring.n)

    @property
    def n(self) -> int:
        return self.ring.n

    def __add__(self, other: 'Offset') -> 'Offset':
        return offset_combine(self, other, +1)

    def __sub__(self, other: 'Offset') -> 'Offset':
        return offset_combine(self, other, -1)

    def __neg__(self) -> 'Offset':
        return Offset(-self.k, self.ring)

    def shifted(self, c: int) -> 'Offset':
        return Offset(self.k + c, self.ring)

    def __str__(self):
        return f'x^{self.k}'


def offset_combine(a: Offset, b: Offset, sign: int = +1) -> Offset:
    """Return (a.k + sign * b.k) mod n; x^a * x^(+-b) in the ring."""
    if a.ring != b.ring:
        raise RingMismatchError(f'cannot combine offsets mod {a.n} and mod {b.n}')
    if sign not in (1, -1):
        raise ValueError(f'sign must be +1 or -1, got {sign!r}')
    return Offset(a.k + sign * b.k, a.ring)


def offset_sum(offsets: Iterable[Offset], ring: RingSize) -> Offset:
    total = ring.zero
    for o in offsets:
        total = total + o
    return total


@dataclass(frozen=True)
class Minor:
    """det of a 2 x 2 submatrix: x^pos - x^neg, zero iff pos == neg."""
    pos_exponent: Offset
    neg_exponent: Offset

    def is_zero(self) -> bool:
        return self.pos_exponent == self.neg_exponent

    def swapped(self) -> 'Minor':
        return Minor(self.neg_exponent, self.pos_exponent)

    def __str__(self):
        if self.is_zero():
            return '0'
        return f'{_monomial(self.pos_exponent)}-{_monomial(self.neg_exponent)}'


def _monomial(o: Offset) -> str:
    return '1' if o.k == 0 else str(o)


# ── K x K offset matrices ──────────────────────────────────────────────────

class _OffsetMatrix:
    """Immutable K x K matrix of offsets indexed [rx, tx] with 1-based indices."""

    __slots__ = ('ring', '_rows')

    def __init__(self, rows: Sequence[Sequence[Offset]], ring: RingSize):
        rows = tuple(tuple(r) for r in rows)
        size = len(rows)
        if size == 0 or any(len(r) != size for r in rows):
            raise DimensionError(f'{type(self).__name__} must be square, got {[len(r) for r in rows]}')
        for r in rows:
            for o in r:
                if o.ring != ring:
                    raise RingMismatchError(f'entry {o} is not mod {ring.n}')
        self.ring = ring
        self._rows = rows

    @classmethod
    def from_exponents(cls, rows: Sequence[Sequence[int]], n: int):
        ring = RingSize(n)
        return cls([[Offset(int(k), ring) for k in r] for r in rows], ring)

    @property
    def size(self) -> int:
        return len(self._rows)

    @property
    def n(self) -> int:
        return self.ring.n

    def indices(self):
        return range(1, self.size + 1)

    def _check(self, rx: int, tx: int):
        if not (1 <= rx <= self.size and 1 <= tx <= self.size):
            raise DimensionError(f'index ({rx},{tx}) outside a {self.size}x{self.size} matrix')

    def __getitem__(self, key) -> Offset:
        rx, tx = key
        self._check(rx, tx)
        return self._rows[rx - 1][tx - 1]

    def exponent(self, rx: int, tx: int) -> int:
        return self[rx, tx].k

    def exponents(self) -> tuple[tuple[int, ...], ...]:
        return tuple(tuple(o.k for o in r) for r in self._rows)

    def rows(self):
        return self._rows

    def _replace(self, fn):
        rows = [[fn(j, i, self._rows[j - 1][i - 1]) for i in self.indices()] for j in self.indices()]
        return type(self)(rows, self.ring)

    def __eq__(self, other):
        return type(other) is type(self) and self.ring == other.ring and self._rows == other._rows

    def __hash__(self):
        return hash((type(self).__name__, self.ring, self._rows))

    def __repr__(self):
        return f'{type(self).__name__}({[list(r) for r in self.exponents()]}, n={self.n})'


class ShiftMatrix(_OffsetMatrix):
    """Channel D: entry [j, i] is the exponent of d_ji (Rx_j <- Tx_i)."""

    def row_scaled(self, rx: int, c: int) -> 'ShiftMatrix':
        """Multiply row rx by x^c."""
        self._check(rx, 1)
        return self._replace(lambda j, i, o: o.shifted(c) if j == rx else o)

    def normalized(self) -> 'ShiftMatrix':
        """Scale every row so that the diagonal becomes x^0."""
        return self._replace(lambda j, i, o: o - self[j, j])

    def is_normalized(self) -> bool:
        return all(self[j, j].k == 0 for j in self.indices())


class ParamVector(_OffsetMatrix):
    """Allocations p: entry [j, i] is the offset of W_ji inside u_i(x)."""

    @classmethod
    def from_tx_order(cls, values: Sequence[int], n: int, size: int = 3) -> 'ParamVector':
        """Build from (p_11, p_21, p_31, p_12, ...), transmitter-major."""
        if len(values) != size * size:
            raise DimensionError(f'expected {size * size} parameters, got {len(values)}')
        rows = [[values[(i - 1) * size + (j - 1)] for i in range(1, size + 1)]
                for j in range(1, size + 1)]
        return cls.from_exponents(rows, n)

    @classmethod
    def from_mapping(cls, values: dict, n: int, size: int = 3) -> 'ParamVector':
        """Build from {(rx, tx): exponent}; every pair must be present."""
        missing = [(j, i) for j in range(1, size + 1) for i in range(1, size + 1) if (j, i) not in values]
        if missing:
            raise DimensionError(f'unresolved parameters: {missing}')
        return cls.from_exponents(
            [[values[(j, i)] for i in range(1, size + 1)] for j in range(1, size + 1)], n)

    def tx_order(self) -> tuple[int, ...]:
        return tuple(self.exponent(j, i) for i in self.indices() for j in self.indices())

    def shifted(self, c: int) -> 'ParamVector':
        """Add c to every allocation (global transmit shift)."""
        return self._replace(lambda j, i, o: o.shifted(c))

    def normalized(self) -> 'ParamVector':
        return self.shifted(-self[1, 1].k)


# ── Minors ────────────────────────────────────────────────────────────────

def minor_of(D: ShiftMatrix, rows: tuple[int, int], cols: tuple[int, int]) -> Minor:
    """det of D_{i,k,j,l} = [[d_ij, d_il], [d_kj, d_kl]] as (d_ij d_kl, d_il d_kj)."""
    i, k = rows
    j, l = cols
    if i == k or j == l:
        raise IndexAssignmentError(f'minor needs distinct rows and columns, got rows {rows} cols {cols}')
    return Minor(D[i, j] + D[k, l], D[i, l] + D[k, j])
