"""
Signals of the K-user X-network under the cyclic polynomial channel model.

Each signal carries two layers:

    symbolic   per-slot formal sum of message ids with integer coefficients;
               this is what decides decodability (W23-W12 is not W23+W12)
    payload    per-slot numpy uint8 bit vector, the XOR image of the
               symbolic layer evaluated on the message payloads

Over GF(2) + and - coincide, so payload recovery is checked bit-for-bit
against the originals while the symbolic layer keeps the signs.
"""
from __future__ import annotations

import logging
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

import numpy as np

from cyclic_ia.errors import DimensionError, MessageError, RingMismatchError
from cyclic_ia.ring import ParamVector, ShiftMatrix

logger = logging.getLogger(__name__)

_ID_RE = re.compile(r'^W(\d)(\d)$')


# ── Messages ─────────────────────────────────────────────────────────────

@dataclass(frozen=True, order=True)
class MessageId:
    """W_ji: dedicated message from Tx_i (tx) to Rx_j (rx)."""
    rx: int
    tx: int

    @classmethod
    def parse(cls, text: str) -> 'MessageId':
        m = _ID_RE.match(text.strip())
        if not m:
            raise MessageError(f'not a message id: {text!r}')
        return cls(int(m.group(1)), int(m.group(2)))

    def __str__(self):
        return f'W{self.rx}{self.tx}'


def all_message_ids(K: int = 3) -> list[MessageId]:
    return [MessageId(j, i) for j in range(1, K + 1) for i in range(1, K + 1)]


@dataclass(frozen=True, eq=False)
class Message:
    id: MessageId
    payload: np.ndarray

    @property
    def width(self) -> int:
        return int(self.payload.shape[0])


def make_messages(K: int = 3, t: int = 8, seed: int | None = 0) -> dict[MessageId, Message]:
    """Random t-bit payload for every W_ji, reproducible for a fixed seed."""
    if t < 1:
        raise DimensionError(f'payload width must be positive, got {t}')
    rng = np.random.default_rng(seed)
    bits = rng.integers(0, 2, size=(K * K, t), dtype=np.uint8)
    return {mid: Message(mid, bits[idx]) for idx, mid in enumerate(all_message_ids(K))}


def _as_message_map(messages) -> dict[MessageId, Message]:
    if isinstance(messages, Mapping):
        out = dict(messages)
    else:
        out = {}
        for msg in messages:
            if msg.id in out:
                raise MessageError(f'duplicate message {msg.id}')
            out[msg.id] = msg
    widths = {m.width for m in out.values()}
    if len(widths) > 1:
        raise MessageError(f'payload widths differ: {sorted(widths)}')
    return out


# ── Symbolic layer ───────────────────────────────────────────────────────

class SymbolicSlot:
    """Formal sum of message ids. Keeps insertion order for display only."""

    __slots__ = ('_terms',)

    def __init__(self, terms: Iterable[tuple[MessageId, int]] = ()):
        acc: dict[MessageId, int] = {}
        for mid, c in terms:
            acc[mid] = acc.get(mid, 0) + int(c)
        self._terms = tuple((mid, c) for mid, c in acc.items() if c != 0)

    @classmethod
    def of(cls, mid: MessageId, coeff: int = 1) -> 'SymbolicSlot':
        return cls([(mid, coeff)])

    @classmethod
    def parse(cls, text: str) -> 'SymbolicSlot':
        """'W23-W12' -> {W23: +1, W12: -1}; '0' or '' is the empty slot."""
        text = text.replace(' ', '')
        if text in ('', '0'):
            return cls()
        terms = []
        for sign, coeff, name in re.findall(r'([+-]?)(\d*)(W\d\d)', text):
            c = int(coeff) if coeff else 1
            terms.append((MessageId.parse(name), -c if sign == '-' else c))
        if not terms:
            raise MessageError(f'cannot parse combination {text!r}')
        return cls(terms)

    @property
    def terms(self) -> tuple[tuple[MessageId, int], ...]:
        return self._terms

    def as_dict(self) -> dict[MessageId, int]:
        return dict(self._terms)

    def messages(self) -> tuple[MessageId, ...]:
        return tuple(mid for mid, _ in self._terms)

    def coefficient(self, mid: MessageId) -> int:
        return self.as_dict().get(mid, 0)

    def is_empty(self) -> bool:
        return not self._terms

    def clean_for(self) -> MessageId | None:
        """The single message this slot carries with coefficient +-1, if any."""
        if len(self._terms) == 1 and abs(self._terms[0][1]) == 1:
            return self._terms[0][0]
        return None

    def combined(self, other: 'SymbolicSlot', sign: int = 1) -> 'SymbolicSlot':
        return SymbolicSlot(list(self._terms) + [(mid, sign * c) for mid, c in other._terms])

    def __add__(self, other):
        return self.combined(other, 1)

    def __sub__(self, other):
        return self.combined(other, -1)

    def scaled(self, c: int) -> 'SymbolicSlot':
        return SymbolicSlot((mid, c * k) for mid, k in self._terms)

    def without(self, mids) -> 'SymbolicSlot':
        mids = set(mids)
        return SymbolicSlot((mid, c) for mid, c in self._terms if mid not in mids)

    def render(self, lead_rx: int | None = None) -> str:
        """'W21+W32+W23'; messages for Rx_lead_rx are listed first."""
        if not self._terms:
            return '0'
        terms = list(self._terms)
        if lead_rx is not None:
            terms = [t for t in terms if t[0].rx == lead_rx] + [t for t in terms if t[0].rx != lead_rx]
        out = []
        for idx, (mid, c) in enumerate(terms):
            sign = '-' if c < 0 else ('+' if idx else '')
            mag = '' if abs(c) == 1 else str(abs(c))
            out.append(f'{sign}{mag}{mid}')
        return ''.join(out)

    def __eq__(self, other):
        return isinstance(other, SymbolicSlot) and self.as_dict() == other.as_dict()

    def __hash__(self):
        return hash(frozenset(self._terms))

    def __repr__(self):
        return f'SymbolicSlot({self.render()})'

    def __str__(self):
        return self.render()


def evaluate(slot: SymbolicSlot, messages: Mapping[MessageId, Message], width: int | None = None) -> np.ndarray:
    """XOR of the payloads of every message with an odd coefficient."""
    if width is None:
        width = next(iter(messages.values())).width if messages else 0
    out = np.zeros(width, dtype=np.uint8)
    for mid, c in slot.terms:
        if mid not in messages:
            raise MessageError(f'{mid} is not available to evaluate {slot.render()}')
        if c % 2:
            out ^= messages[mid].payload
    return out


@dataclass(frozen=True, eq=False)
class Observation:
    """A symbolic combination together with its payload, as held by some node."""
    slot: SymbolicSlot
    payload: np.ndarray

    def combined(self, other: 'Observation', sign: int = 1) -> 'Observation':
        return Observation(self.slot.combined(other.slot, sign), self.payload ^ other.payload)


# ── Signals ──────────────────────────────────────────────────────────────

@dataclass(frozen=True, eq=False)
class _Signal:
    owner: int
    slots: tuple[SymbolicSlot, ...]
    payloads: np.ndarray

    @property
    def n(self) -> int:
        return len(self.slots)

    def observation(self, m: int) -> Observation:
        return Observation(self.slots[m], self.payloads[m].copy())

    def observations(self) -> list[Observation]:
        return [self.observation(m) for m in range(self.n)]

    def render_row(self, lead_rx: int | None = None) -> list[str]:
        return [s.render(lead_rx) for s in self.slots]


class TransmitSignal(_Signal):
    """u_i(x): slot p_ji carries W_ji (or its precoded substitute)."""

    def render_row(self, lead_rx=None):
        return super().render_row(None)


class ReceivedSignal(_Signal):
    """r_j(x) = sum_i d_ji u_i(x)."""

    def render_row(self, lead_rx=None):
        return super().render_row(self.owner if lead_rx is None else lead_rx)


def compose_transmit(tx: int, p: ParamVector, messages, substitutions: Mapping[MessageId, SymbolicSlot] | None = None
                     ) -> TransmitSignal:
    """
    Place every W_j,tx at slot p_j,tx of u_tx.

    `substitutions` replaces the content placed for a message (precoding);
    an empty SymbolicSlot leaves the slot off the air. Substituted content
    may name messages the transmitter received over a backhaul, so its
    payload is evaluated against the full `messages` map.
    """
    messages = _as_message_map(messages)
    substitutions = dict(substitutions or {})
    if not (1 <= tx <= p.size):
        raise DimensionError(f'transmitter {tx} outside 1..{p.size}')
    width = next(iter(messages.values())).width
    slots = [SymbolicSlot() for _ in range(p.n)]
    payloads = np.zeros((p.n, width), dtype=np.uint8)
    for j in p.indices():
        mid = MessageId(j, tx)
        if mid not in messages:
            raise MessageError(f'{mid} missing for Tx_{tx}')
        content = substitutions.pop(mid, SymbolicSlot.of(mid))
        m = p[j, tx].k
        slots[m] = slots[m] + content
        payloads[m] ^= evaluate(content, messages, width)
    if substitutions:
        raise MessageError(f'substitutions for messages Tx_{tx} does not send: '
                           f'{sorted(str(k) for k in substitutions)}')
    return TransmitSignal(tx, tuple(slots), payloads)


def propagate(D: ShiftMatrix, transmits: Sequence[TransmitSignal], rx: int) -> ReceivedSignal:
    """Slot m of r_rx is the sum over i of slot (m - d_rx,i) of u_i."""
    if len(transmits) != D.size:
        raise DimensionError(f'{len(transmits)} transmit signals for a {D.size}-user channel')
    by_owner = {u.owner: u for u in transmits}
    if sorted(by_owner) != list(D.indices()):
        raise DimensionError(f'transmit owners {sorted(by_owner)} do not cover 1..{D.size}')
    if any(u.n != D.n for u in transmits):
        raise RingMismatchError(f'signal length differs from channel ring size {D.n}')
    n = D.n
    width = transmits[0].payloads.shape[1]
    slots = [SymbolicSlot() for _ in range(n)]
    payloads = np.zeros((n, width), dtype=np.uint8)
    for i in D.indices():
        u = by_owner[i]
        d = D[rx, i].k
        for m in range(n):
            slots[m] = slots[m] + u.slots[(m - d) % n]
        payloads ^= np.roll(u.payloads, d, axis=0)
    return ReceivedSignal(rx, tuple(slots), payloads)


# ── Decoding ─────────────────────────────────────────────────────────────

@dataclass(frozen=True, eq=False)
class DecodeRecord:
    receiver: int
    decoded: tuple[MessageId, ...]
    recovered: dict = field(default_factory=dict)
    residuals: tuple[SymbolicSlot, ...] = ()

    def decoded_set(self) -> frozenset:
        return frozenset(self.decoded)

    def interference(self) -> list[tuple[int, SymbolicSlot]]:
        """Received slots still carrying more than one term after subtraction."""
        return [(m, s) for m, s in enumerate(self.residuals) if len(s.terms) > 1]


def decode(r: ReceivedSignal, known: Mapping[MessageId, Message] | Iterable[Message] = (),
           extra: Sequence[Observation] = ()) -> DecodeRecord:
    """
    A message W_j* for Rx_j is decoded iff some observation, after removing
    the contributions of `known`, is clean for it. Observations are the
    received slots followed by `extra` (cancellation combinations).
    """
    known = _as_message_map(known) if known else {}
    recovered: dict[MessageId, np.ndarray] = {}
    residuals = []
    for idx, obs in enumerate(r.observations() + list(extra)):
        removable = [mid for mid in obs.slot.messages() if mid in known]
        residual = obs.slot.without(removable)
        payload = obs.payload.copy()
        for mid in removable:
            if obs.slot.coefficient(mid) % 2:
                payload ^= known[mid].payload
        if idx < r.n:
            residuals.append(residual)
        mid = residual.clean_for()
        if mid is not None and mid.rx == r.owner and mid not in recovered:
            recovered[mid] = payload
    decoded = tuple(sorted(recovered))
    logger.debug('Rx_%d decoded %s', r.owner, [str(m) for m in decoded])
    return DecodeRecord(r.owner, decoded, recovered, tuple(residuals))


# ── DoF accounting ───────────────────────────────────────────────────────

@dataclass(frozen=True)
class DofReport:
    decoded: int
    dimensions: int
    dof: Fraction


def dof_of(decoded: int, n: int) -> DofReport:
    if decoded < 0 or n < 1:
        raise DimensionError(f'invalid DoF inputs M={decoded}, n={n}')
    return DofReport(decoded, n, Fraction(decoded, n))


@dataclass(frozen=True)
class SubmessageMatrix:
    """m_ji submessages from Tx_i to Rx_j; rows are receivers."""
    m: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        rows = tuple(tuple(int(v) for v in r) for r in self.m)
        object.__setattr__(self, 'm', rows)
        if not rows or len({len(r) for r in rows}) != 1 or not rows[0]:
            raise DimensionError('submessage matrix must be a non-empty rectangle')
        if any(v < 0 for r in rows for v in r):
            raise DimensionError('submessage counts must be non-negative')
        if not any(v > 0 for r in rows for v in r):
            raise DimensionError('submessage matrix is all zero')

    @classmethod
    def uniform(cls, K: int, value: int = 1) -> 'SubmessageMatrix':
        return cls(tuple(tuple(value for _ in range(K)) for _ in range(K)))

    @property
    def K_R(self) -> int:
        return len(self.m)

    @property
    def K_T(self) -> int:
        return len(self.m[0])


def dof_upper_bound(sub: SubmessageMatrix) -> Fraction:
    """sum m_ji / max over m_ji > 0 of (row_j + column_i - m_ji)."""
    arr = np.array(sub.m, dtype=np.int64)
    row = arr.sum(axis=1)
    col = arr.sum(axis=0)
    denom = max(int(row[j] + col[i] - arr[j, i])
                for j in range(sub.K_R) for i in range(sub.K_T) if arr[j, i] > 0)
    return Fraction(int(arr.sum()), denom)
