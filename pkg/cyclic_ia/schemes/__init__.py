"""
Backhaul scheme registry.

Each handler implements `cyclic_ia.schemes.base.Scheme` and is registered
here under its command-line tag:

    none       plain cyclic IA, 7 of 9 messages on a scheme-valid channel
    ff         feedforward backhaul, Theta_FF = 1
    iac        receiver backhaul (interference alignment and cancellation), Theta_R = 2
    in         transmitter backhaul (interference neutralization), Theta_T = 2
    combined   one transmitter and one receiver transfer, Theta_TR = 2

Adding a scheme: implement Scheme in cyclic_ia/schemes/<scheme>.py and
register it below.
"""
from cyclic_ia.schemes.base import (
    BackhaulKind, BackhaulTransfer, CancellationStep, ExecutionPlan, NoBackhaulScheme, Node, Phase, Scheme,
    SchemeKind,
)
from cyclic_ia.schemes.combined import CombinedScheme
from cyclic_ia.schemes.constraints import (
    ConstraintEntry, ConstraintReport, EquationGroup, check_constraints, intended_collisions, scheme_equations,
    solve_parameters,
)
from cyclic_ia.schemes.executor import SimulationTrace, best_single_transfer, execute, single_transfer_plans
from cyclic_ia.schemes.feedforward import FeedforwardScheme
from cyclic_ia.schemes.receiver_backhaul import ReceiverBackhaulScheme
from cyclic_ia.schemes.transmitter_backhaul import TransmitterBackhaulScheme

_REGISTRY = {
    SchemeKind.NONE.value:     NoBackhaulScheme(),
    SchemeKind.FF.value:       FeedforwardScheme(),
    SchemeKind.IAC_R.value:    ReceiverBackhaulScheme(),
    SchemeKind.IN_T.value:     TransmitterBackhaulScheme(),
    SchemeKind.COMBINED.value: CombinedScheme(),
}

SCHEME_TAGS = tuple(_REGISTRY)


def get_scheme(tag) -> Scheme:
    """Return the handler for a tag ('ff', 'iac', ...) or a SchemeKind."""
    if isinstance(tag, SchemeKind):
        tag = tag.value
    try:
        return _REGISTRY[str(tag).strip().lower()]
    except KeyError:
        raise KeyError(f'unknown scheme {tag!r}; choose from {", ".join(SCHEME_TAGS)}') from None


def plan_ff(assignment=(1, 2, 3)) -> ExecutionPlan:
    return _REGISTRY['ff'].plan(assignment)


def plan_iac(assignment=(1, 2, 3)) -> ExecutionPlan:
    return _REGISTRY['iac'].plan(assignment)


def plan_in(assignment=(1, 2, 3)) -> ExecutionPlan:
    return _REGISTRY['in'].plan(assignment)


def plan_combined(assignment=(1, 2, 3)) -> ExecutionPlan:
    return _REGISTRY['combined'].plan(assignment)


__all__ = [
    'BackhaulKind', 'BackhaulTransfer', 'CancellationStep', 'ConstraintEntry', 'ConstraintReport',
    'EquationGroup', 'ExecutionPlan', 'Node', 'Phase', 'Scheme', 'SchemeKind', 'SimulationTrace',
    'SCHEME_TAGS', 'best_single_transfer', 'check_constraints', 'execute', 'get_scheme', 'intended_collisions',
    'plan_combined', 'plan_ff', 'plan_iac', 'plan_in', 'scheme_equations', 'single_transfer_plans',
    'solve_parameters',
]
