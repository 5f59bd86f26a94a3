from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from cyclic_ia.cpcm import (
    Message, MessageId, Observation, SubmessageMatrix, SymbolicSlot, compose_transmit, decode, dof_of,
    dof_upper_bound, evaluate, make_messages, propagate,
)
from cyclic_ia.errors import DimensionError, MessageError
from cyclic_ia.reports import render_signal_table
from cyclic_ia.ring import ParamVector, ShiftMatrix

W = MessageId.parse

V_ROWS = [
    ['W11', '0', 'W21', '0', 'W31'],
    ['W22', '0', 'W12', 'W32', '0'],
    ['W23', 'W13', 'W33', '0', '0'],
]
R_ROWS = [
    ['W11', 'W12', 'W21+W32+W23', 'W13', 'W31+W22+W33'],
    ['W22', 'W21', 'W23+W12', 'W31+W32+W13', 'W11+W33'],
    ['W31+W23', 'W11+W22+W13', 'W33', 'W21+W12', 'W32'],
]


def signals(D, p, messages, subs=None):
    subs = subs or {}
    transmits = [compose_transmit(i, p, messages, subs.get(i)) for i in (1, 2, 3)]
    return transmits, [propagate(D, transmits, j) for j in (1, 2, 3)]


def test_message_id_parse():
    assert W('W23') == MessageId(2, 3)
    assert str(MessageId(3, 1)) == 'W31'
    with pytest.raises(MessageError):
        W('X23')


def test_symbolic_slot_algebra():
    s = SymbolicSlot.parse('W23-W12')
    assert s.as_dict() == {W('W23'): 1, W('W12'): -1}
    assert s + SymbolicSlot.of(W('W12')) == SymbolicSlot.of(W('W23'))
    assert (s - s).is_empty()
    assert SymbolicSlot.parse('W21+W12') == SymbolicSlot.parse('W12+W21')
    assert SymbolicSlot.parse('2W23').clean_for() is None
    assert SymbolicSlot.parse('-W31').clean_for() == W('W31')
    assert SymbolicSlot().render() == '0'
    assert s.render() == 'W23-W12'


def test_render_lists_own_messages_first():
    s = SymbolicSlot.parse('W12+W23')
    assert s.render(lead_rx=2) == 'W23+W12'
    assert s.render() == 'W12+W23'


def test_transmit_signals_match_worked_example(worked_D, worked_p, messages):
    transmits, _ = signals(worked_D, worked_p, messages)
    assert [u.render_row() for u in transmits] == V_ROWS


def test_received_signals_match_worked_example(worked_D, worked_p, messages):
    _, received = signals(worked_D, worked_p, messages)
    assert [r.render_row() for r in received] == R_ROWS


def test_signal_table_text(worked_D, worked_p, messages):
    transmits, received = signals(worked_D, worked_p, messages)
    table = render_signal_table(transmits, received)
    lines = table.splitlines()
    assert len(lines) == 7
    assert [c.strip() for c in lines[0].split('|')[1:]] == ['x^0', 'x^1', 'x^2', 'x^3', 'x^4']
    assert lines[1].startswith('v_1 | W11')
    assert lines[4].startswith('r_1 | W11')
    assert 'W21+W32+W23' in lines[4]
    assert render_signal_table(transmits, received) == table


def test_payload_layer_is_xor_of_symbolic_layer(worked_D, worked_p, messages):
    transmits, received = signals(worked_D, worked_p, messages)
    for sig in list(transmits) + list(received):
        for m, slot in enumerate(sig.slots):
            assert np.array_equal(sig.payloads[m], evaluate(slot, messages, 8))


def test_decode_without_side_information(worked_D, worked_p, messages):
    _, received = signals(worked_D, worked_p, messages)
    got = [decode(r) for r in received]
    assert [sorted(str(m) for m in rec.decoded) for rec in got] == [
        ['W11', 'W12', 'W13'], ['W21', 'W22'], ['W32', 'W33']]
    for rec in got:
        for mid, payload in rec.recovered.items():
            assert np.array_equal(payload, messages[mid].payload)


def test_decode_with_known_interference(worked_D, worked_p, messages):
    _, received = signals(worked_D, worked_p, messages)
    rec = decode(received[1], known={W('W12'): messages[W('W12')]})
    assert W('W23') in rec.decoded
    assert np.array_equal(rec.recovered[W('W23')], messages[W('W23')].payload)
    assert [m for m, _ in decode(received[2]).interference()] == [0, 1, 3]


def test_decode_uses_extra_observations(worked_D, worked_p, messages):
    _, received = signals(worked_D, worked_p, messages)
    r3 = received[2]
    w23 = messages[W('W23')]
    extra = [r3.observation(0).combined(Observation(SymbolicSlot.of(W('W23')), w23.payload), -1)]
    rec = decode(r3, extra=extra)
    assert W('W31') in rec.decoded
    assert np.array_equal(rec.recovered[W('W31')], messages[W('W31')].payload)


def test_single_message_occupies_one_slot():
    msgs = make_messages(3, 4, seed=1)
    p = ParamVector.from_tx_order((0, 1, 2, 3, 4, 0, 1, 2, 3), 5)
    u = compose_transmit(1, p, msgs, {W('W21'): SymbolicSlot(), W('W31'): SymbolicSlot()})
    assert [s.render() for s in u.slots] == ['W11', '0', '0', '0', '0']


def test_constant_channel_sums_transmits(worked_p, messages):
    D = ShiftMatrix.from_exponents([[0, 0, 0]] * 3, 5)
    transmits = [compose_transmit(i, worked_p, messages) for i in (1, 2, 3)]
    r = propagate(D, transmits, 2)
    for m in range(5):
        expected = SymbolicSlot()
        for u in transmits:
            expected = expected + u.slots[m]
        assert r.slots[m] == expected


def test_compose_rejects_foreign_substitution(worked_p, messages):
    with pytest.raises(MessageError):
        compose_transmit(1, worked_p, messages, {W('W12'): SymbolicSlot()})


def test_make_messages_is_reproducible():
    a, b = make_messages(3, 16, seed=7), make_messages(3, 16, seed=7)
    assert all(np.array_equal(a[k].payload, b[k].payload) for k in a)
    assert all(m.width == 16 for m in a.values())
    with pytest.raises(DimensionError):
        make_messages(3, 0)


def test_mixed_widths_rejected():
    msgs = list(make_messages(3, 8).values())
    msgs[0] = Message(msgs[0].id, np.zeros(4, dtype=np.uint8))
    with pytest.raises(MessageError):
        compose_transmit(1, ParamVector.from_tx_order(range(9), 9), msgs)


def test_dof_is_exact():
    assert dof_of(9, 5).dof == Fraction(9, 5)
    assert dof_of(0, 5).dof == 0
    assert dof_of(4, 3).dof == Fraction(4, 3)
    with pytest.raises(DimensionError):
        dof_of(1, 0)


def test_dof_upper_bound():
    assert dof_upper_bound(SubmessageMatrix.uniform(3)) == Fraction(9, 5)
    assert dof_upper_bound(SubmessageMatrix.uniform(2)) == Fraction(4, 3)
    assert dof_upper_bound(SubmessageMatrix(((2, 1, 1), (1, 1, 1), (1, 1, 1)))) == Fraction(10, 6)
    with pytest.raises(DimensionError):
        SubmessageMatrix(((0, 0), (0, 0)))


@given(K=st.integers(2, 5))
def test_uniform_bound_is_k_squared_over_2k_minus_1(K):
    assert dof_upper_bound(SubmessageMatrix.uniform(K)) == Fraction(K * K, 2 * K - 1)


configs = st.tuples(
    st.integers(3, 9),
    st.lists(st.integers(0, 20), min_size=9, max_size=9),
    st.lists(st.integers(0, 20), min_size=9, max_size=9),
)


def _decoded(D, p, messages):
    _, received = signals(D, p, messages)
    return [decode(r).decoded_set() for r in received]


@settings(max_examples=60, deadline=None)
@given(cfg=configs, rx=st.integers(1, 3), c=st.integers(1, 8))
def test_receiver_row_scaling_rotates_slots(cfg, rx, c):
    n, d, q = cfg
    D = ShiftMatrix.from_exponents([d[0:3], d[3:6], d[6:9]], n)
    p = ParamVector.from_tx_order(q, n)
    msgs = make_messages(3, 4, seed=3)
    transmits = [compose_transmit(i, p, msgs) for i in (1, 2, 3)]
    before = propagate(D, transmits, rx)
    after = propagate(D.row_scaled(rx, c), transmits, rx)
    assert list(after.slots) == [before.slots[(m - c) % n] for m in range(n)]
    assert _decoded(D.row_scaled(rx, c), p, msgs) == _decoded(D, p, msgs)


@settings(max_examples=60, deadline=None)
@given(cfg=configs, c=st.integers(1, 8))
def test_global_transmit_shift_keeps_decoded_sets(cfg, c):
    n, d, q = cfg
    D = ShiftMatrix.from_exponents([d[0:3], d[3:6], d[6:9]], n)
    p = ParamVector.from_tx_order(q, n)
    msgs = make_messages(3, 4, seed=5)
    assert _decoded(D, p.shifted(c), msgs) == _decoded(D, p, msgs)


@settings(max_examples=40, deadline=None)
@given(cfg=configs, rx=st.integers(1, 3))
def test_propagation_is_linear(cfg, rx):
    n, d, q = cfg
    D = ShiftMatrix.from_exponents([d[0:3], d[3:6], d[6:9]], n)
    p = ParamVector.from_tx_order(q, n)
    msgs = make_messages(3, 4, seed=9)
    drop_a = {i: {MessageId(1, i): SymbolicSlot()} for i in (1, 2, 3)}
    keep_a = {i: {MessageId(j, i): SymbolicSlot() for j in (2, 3)} for i in (1, 2, 3)}
    ua = [compose_transmit(i, p, msgs, drop_a[i]) for i in (1, 2, 3)]
    ub = [compose_transmit(i, p, msgs, keep_a[i]) for i in (1, 2, 3)]
    full = propagate(D, [compose_transmit(i, p, msgs) for i in (1, 2, 3)], rx)
    ra, rb = propagate(D, ua, rx), propagate(D, ub, rx)
    assert [a + b for a, b in zip(ra.slots, rb.slots)] == list(full.slots)
    assert np.array_equal(ra.payloads ^ rb.payloads, full.payloads)


@pytest.mark.slow
@settings(max_examples=10000, deadline=None)
@given(cfg=configs, rx=st.integers(1, 3), c=st.integers(1, 8), shift=st.integers(1, 8))
def test_decoded_sets_invariant_under_normalizing_moves(cfg, rx, c, shift):
    n, d, q = cfg
    D = ShiftMatrix.from_exponents([d[0:3], d[3:6], d[6:9]], n)
    p = ParamVector.from_tx_order(q, n)
    msgs = make_messages(3, 2, seed=0)
    base = _decoded(D, p, msgs)
    assert _decoded(D.row_scaled(rx, c), p.shifted(shift), msgs) == base
