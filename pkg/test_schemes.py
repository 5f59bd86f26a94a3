import logging
from fractions import Fraction
from itertools import product

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from cyclic_ia.cpcm import MessageId, SymbolicSlot, compose_transmit, make_messages, propagate
from cyclic_ia.errors import ConstraintError, DimensionError, PlanError
from cyclic_ia.ring import ParamVector, ShiftMatrix
from cyclic_ia.schemes import (
    SCHEME_TAGS, BackhaulKind, BackhaulTransfer, ExecutionPlan, Node, Phase, SchemeKind, get_scheme, plan_combined,
    plan_ff, plan_iac, plan_in,
)
from cyclic_ia.schemes.base import term
from cyclic_ia.schemes.constraints import (
    check_constraints, intended_collisions, scheme_equations, solve_parameters, x_agreement,
)
from cyclic_ia.schemes.executor import best_single_transfer, execute, single_transfer_plans
from cyclic_ia.schemes.receiver_backhaul import reversed_plan
from cyclic_ia.search import sample_valid_channels
from cyclic_ia.separability import check_all

W = MessageId.parse
PLANNED = ('ff', 'iac', 'in', 'combined')


# ── constraints (i)-(x) ──────────────────────────────────────────────────

def _ks(entry):
    return [o.k for o in entry.witness]


def test_worked_channel_satisfies_all_constraints(worked_D):
    report = check_constraints(worked_D, (1, 2, 3))
    assert report.holds
    assert _ks(report['(i)']) == [2, 2]
    assert _ks(report['(ii)']) == [3, 3, 3]
    assert _ks(report['(iii)']) == [0, 3]
    assert _ks(report['(iv)']) == [0, 3]
    assert _ks(report['(v)']) == [2, 1]
    assert _ks(report['(vi)']) == [1, 2]
    assert _ks(report['(vii)']) == [4, 3]
    assert _ks(report['(viii)']) == [0, 3]
    assert _ks(report['(ix)']) == [0, 2, 2]
    assert _ks(report['(x)'])[:2] == [0, 1]
    assert [e.name for e in report.entries] == [
        '(i)', '(ii)', '(iii)', '(iv)', '(v)', '(vi)', '(vii)', '(viii)', '(ix)', '(x)']


def test_constant_channel_fails_every_minor():
    report = check_constraints(ShiftMatrix.from_exponents([[0, 0, 0]] * 3, 5))
    failing = {e.name for e in report.failing()}
    assert {'(iii)', '(iv)', '(v)', '(vi)', '(vii)', '(viii)'} <= failing
    assert '(i)' not in failing
    assert 'VIOLATED' in report.render()


def test_constraints_need_three_users():
    with pytest.raises(DimensionError):
        check_constraints(ShiftMatrix.from_exponents([[0, 1], [1, 0]], 5))


rows3 = st.lists(st.integers(0, 10), min_size=4, max_size=4)


@settings(max_examples=200)
@given(n=st.integers(3, 11), v=rows3)
def test_x_inequalities_agree_under_ii(n, v):
    a, b, c, e = v
    total = a + c
    D = ShiftMatrix.from_exponents([[0, a, b], [c, 0, e], [total - b, total - e, 0]], n)
    report = check_constraints(D)
    assert report['(ii)'].holds
    assert x_agreement(report)


@pytest.mark.slow
def test_x_inequalities_agree_on_every_small_channel():
    for n in range(3, 12):
        for a, b, c, e in product(range(n), repeat=4):
            D = ShiftMatrix.from_exponents([[0, a, b], [c, 0, e], [a + c - b, a + c - e, 0]], n)
            assert x_agreement(check_constraints(D)), (n, a, b, c, e)


# ── solver ───────────────────────────────────────────────────────────────

def test_solver_reproduces_worked_parameters(worked_D):
    assert solve_parameters(worked_D, (1, 2, 3), seed=4).tx_order() == (0, 2, 4, 2, 0, 3, 1, 0, 2)


def test_solver_seed_is_a_global_shift(worked_D, worked_p):
    assert solve_parameters(worked_D, seed=0) == worked_p.shifted(-4)
    for seed in range(5):
        assert solve_parameters(worked_D, seed=seed) == worked_p.shifted(seed - 4)


def test_solver_refuses_invalid_channel():
    with pytest.raises(ConstraintError) as exc:
        solve_parameters(ShiftMatrix.from_exponents([[0, 0, 0]] * 3, 5))
    assert not exc.value.report.holds
    assert '(iii)' in str(exc.value)


def test_alignment_groups_hold_on_solved_parameters(worked_D, worked_p):
    groups = scheme_equations(worked_D, worked_p)
    assert len(groups) == 8
    assert all(g.holds for g in groups)
    by_label = {g.label: g for g in groups}
    assert by_label['(27)'].receiver == 2
    assert set(by_label['(27)'].members) == {W('W12'), W('W23')}


# ── plans ────────────────────────────────────────────────────────────────

def test_plan_shapes():
    ff, iac, in_, comb = plan_ff(), plan_iac(), plan_in(), plan_combined()
    assert ff.theta == 1 and len(ff.transfers) == 1
    assert ff.transfers[0].link_id == 'theta_FF,23'
    assert ff.transfers[0].content == term(2, 3)
    assert iac.theta == 2 and [t.link_id for t in iac.transfers] == ['theta_R,21', 'theta_R,32']
    assert all(t.phase is Phase.POST for t in iac.transfers)
    assert in_.theta == 2 and [t.link_id for t in in_.transfers] == ['theta_T,32', 'theta_T,13']
    assert all(t.phase is Phase.PRE for t in in_.transfers)
    assert in_.substitutions[3][W('W23')] == SymbolicSlot.parse('W23-W12')
    assert in_.substitutions[1][W('W31')] == SymbolicSlot.parse('W31+W12-W23')
    assert comb.declared_theta == {BackhaulKind.T: 1, BackhaulKind.R: 1}
    assert comb.cancellations[0].combination() == SymbolicSlot.parse('W23-W12')


def test_registry():
    assert SCHEME_TAGS == ('none', 'ff', 'iac', 'in', 'combined')
    assert get_scheme(SchemeKind.IN_T).sum_rate == 2
    assert get_scheme(' FF ').kind is SchemeKind.FF
    with pytest.raises(KeyError):
        get_scheme('magic')


def test_no_backhaul_decodes_seven(worked_D, worked_p):
    trace = execute(get_scheme('none').plan(), worked_D, worked_p)
    assert trace.decoded_count == 7
    assert trace.dof.dof == Fraction(7, 5)
    assert [str(m) for m in trace.missing()] == ['W23', 'W31']
    assert trace.ledger.sum_rate == 0


@pytest.mark.parametrize('tag,theta', [('ff', 1), ('iac', 2), ('in', 2), ('combined', 2)])
def test_each_scheme_decodes_everything(worked_D, worked_p, tag, theta):
    trace = execute(get_scheme(tag).plan(), worked_D, worked_p, t=8, payload_seed=0)
    assert trace.decoded_count == 9
    assert trace.dof.dof == Fraction(9, 5)
    assert trace.bit_exact
    assert trace.ledger.sum_rate == theta
    assert trace.ledger.bits == 8 * theta


@pytest.mark.parametrize('tag', PLANNED)
def test_recovery_is_bit_exact_over_payload_seeds(worked_D, worked_p, tag):
    plan = get_scheme(tag).plan()
    for seed in range(100):
        trace = execute(plan, worked_D, worked_p, t=16, payload_seed=seed)
        assert trace.decoded_count == 9
        assert trace.bit_exact
        for mid, payload in trace.recovered.items():
            assert np.array_equal(payload, trace.messages[mid].payload)


def test_feedforward_slot_is_off_air(worked_D, worked_p):
    trace = execute(plan_ff(), worked_D, worked_p)
    assert trace.transmits[2].render_row() == ['0', 'W13', 'W33', '0', '0']
    assert [str(m) for m in sorted(trace.decoded[2])] == ['W21', 'W22', 'W23']


def test_neutralization_cleans_old_collisions(worked_D, worked_p):
    trace = execute(plan_in(), worked_D, worked_p)
    assert trace.transmits[2].render_row()[0] == 'W23-W12'
    assert trace.received[1].slots[2] == SymbolicSlot.parse('W23')
    assert trace.received[2].slots[0] == SymbolicSlot.parse('W31')
    assert all(e.phase is Phase.PRE for e in trace.ledger.entries)


def test_combined_cancellation_at_rx_k(worked_D, worked_p):
    trace = execute(plan_combined(), worked_D, worked_p)
    assert trace.received[2].slots[0] == SymbolicSlot.parse('W31+W23-W12')
    assert W('W31') in trace.decoded[3]
    assert W('W31') not in trace.history[2][2].decoded
    assert trace.ledger.by_kind() == {BackhaulKind.T: 1, BackhaulKind.R: 1}


def test_iac_order_is_mandatory(worked_D, worked_p):
    with pytest.raises(PlanError):
        execute(reversed_plan(), worked_D, worked_p)


def test_iac_and_in_are_dual(worked_D, worked_p):
    iac = execute(plan_iac(), worked_D, worked_p)
    in_ = execute(plan_in(), worked_D, worked_p)
    assert iac.decoded == in_.decoded
    assert iac.ledger.sum_rate == in_.ledger.sum_rate == 2


def test_single_receiver_transfer_is_not_enough(worked_D, worked_p):
    assert len(single_transfer_plans()) == 18
    assert best_single_transfer(worked_D, worked_p) == 8


def test_single_transfer_plans_cover_received_combinations(worked_D, worked_p):
    msgs = make_messages(3, 8, seed=0)
    transmits = [compose_transmit(i, worked_p, msgs) for i in (1, 2, 3)]
    received = tuple(propagate(worked_D, transmits, j) for j in (1, 2, 3))
    plans = single_transfer_plans(received=received)
    assert len(plans) > 18
    forwarded = [pl for pl in plans if pl.transfers[0].content.clean_for() is None and pl.cancellations]
    assert any(len(pl.cancellations[0].operands) == 2 for pl in forwarded)
    # Rx_1 hands Rx_2 its slot W21+W32+W23 verbatim; W23 stays tied to W32
    slot = SymbolicSlot.parse('W21+W32+W23')
    plan = next(pl for pl in forwarded if pl.transfers[0].source == Node.rx(1)
                and pl.transfers[0].target == Node.rx(2) and pl.transfers[0].content == slot)
    trace = execute(plan, worked_D, worked_p, messages=msgs)
    assert trace.completed
    assert trace.decoded_count <= 8


def test_unavailable_receiver_transfers_are_skipped():
    flat = ShiftMatrix.from_exponents([[0, 0, 0]] * 3, 5)
    p = ParamVector.from_tx_order((0, 1, 2) * 3, 5)
    iac = execute(plan_iac(), flat, p)
    assert [s.transfer.link_id for s in iac.skipped] == [t.link_id for t in plan_iac().transfers]
    assert iac.decoded_count == 0
    assert iac.ledger.sum_rate == 0
    assert not iac.completed

    comb = execute(plan_combined(), flat, p)
    assert len(comb.skipped) == 1
    assert comb.unapplied == plan_combined().cancellations
    assert comb.ledger.links() == ['theta_T,32']


def test_rejected_plans_are_logged(worked_D, worked_p, caplog):
    with caplog.at_level(logging.WARNING, logger='cyclic_ia.schemes.executor'):
        with pytest.raises(PlanError):
            execute(reversed_plan(), worked_D, worked_p)
    assert any(r.levelno == logging.WARNING and 'does not know' in r.getMessage() for r in caplog.records)


def test_plan_validation(worked_D, worked_p):
    late_t = ExecutionPlan(SchemeKind.IN_T, (1, 2, 3), (
        BackhaulTransfer(BackhaulKind.T, Node.tx(2), Node.tx(3), term(1, 2), Phase.POST),),
        declared_theta={BackhaulKind.T: 1})
    with pytest.raises(PlanError):
        execute(late_t, worked_D, worked_p)

    unknown = ExecutionPlan(SchemeKind.FF, (1, 2, 3), (
        BackhaulTransfer(BackhaulKind.FF, Node.tx(3), Node.rx(2), term(4, 3), Phase.PRE),),
        declared_theta={BackhaulKind.FF: 1})
    with pytest.raises(PlanError):
        execute(unknown, worked_D, worked_p)

    wrong_route = ExecutionPlan(SchemeKind.FF, (1, 2, 3), (
        BackhaulTransfer(BackhaulKind.FF, Node.rx(3), Node.rx(2), term(3, 3), Phase.PRE),),
        declared_theta={BackhaulKind.FF: 1})
    with pytest.raises(PlanError):
        execute(wrong_route, worked_D, worked_p)

    undeclared = ExecutionPlan(SchemeKind.FF, (1, 2, 3), plan_ff().transfers, plan_ff().substitutions)
    with pytest.raises(PlanError):
        execute(undeclared, worked_D, worked_p)


def test_source_cannot_send_what_it_lacks(worked_D, worked_p):
    plan = ExecutionPlan(SchemeKind.FF, (1, 2, 3), (
        BackhaulTransfer(BackhaulKind.FF, Node.tx(3), Node.rx(2), term(2, 1), Phase.PRE),),
        declared_theta={BackhaulKind.FF: 1})
    with pytest.raises(PlanError):
        execute(plan, worked_D, worked_p)


@pytest.mark.parametrize('assignment', [(2, 3, 1), (3, 1, 2), (1, 3, 2)])
def test_other_assignments(assignment):
    channels = sample_valid_channels(5, 5, assignment=assignment)
    assert channels
    for D in channels:
        p = solve_parameters(D, assignment)
        assert check_all(D, p, assignment).collisions() == intended_collisions(assignment)
        for tag in PLANNED:
            assert execute(get_scheme(tag).plan(assignment), D, p).decoded_count == 9


# ── every valid channel ──────────────────────────────────────────────────

def _run_all(D):
    p = solve_parameters(D)
    assert all(g.holds for g in scheme_equations(D, p))
    assert check_all(D, p).collisions() == intended_collisions()
    assert execute(get_scheme('none').plan(), D, p).decoded_count == 7
    for tag in PLANNED:
        trace = execute(get_scheme(tag).plan(), D, p, t=4)
        assert trace.decoded_count == 9, (tag, D)
        assert trace.bit_exact
        assert trace.ledger.sum_rate == get_scheme(tag).sum_rate


def test_schemes_on_every_valid_channel_at_n5():
    channels = sample_valid_channels(5)
    assert len(channels) == 100
    for D in channels:
        _run_all(D)


def test_schemes_on_sampled_channels_above_n5():
    total = 0
    for n in range(6, 12):
        channels = sample_valid_channels(n, 170, seed=n)
        assert len(channels) == 170
        for D in channels:
            assert check_constraints(D).holds
            _run_all(D)
        total += len(channels)
    assert total >= 1000
