"""
Command-line front end.

    verify     run a scenario's scheme and check every message decodes
    solve      derive transmission parameters for a scenario's channel
    simulate   print the transmitted/received signal table and decode trace
    prove      exhaustive infeasibility search without side information
    sample     list channels on which the alignment schemes work

Exit codes: 0 success, 1 semantic failure (undecoded messages, failing
constraints, rejected plans, feasible configurations found), 2 input error.
"""
from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from cyclic_ia import create_app
from cyclic_ia.errors import (
    ConstraintError, DimensionError, PlanError, ScenarioError, SearchGuardError, SolverFault,
)
from cyclic_ia.reports import (certificate_to_xml, channels_to_xml, render_certificate, render_channels,
                               render_constraints, render_signal_table, render_trace, render_violations,
                               trace_to_xml)
from cyclic_ia.scenario import Scenario, load_scenario, worked_scenario, scenario_to_xml
from cyclic_ia.schemes import SCHEME_TAGS
from cyclic_ia.schemes.constraints import check_constraints, solve_parameters
from cyclic_ia.schemes.executor import execute
from cyclic_ia.search import prove_infeasibility, sample_valid_channels
from cyclic_ia.separability import check_all

logger = logging.getLogger(__name__)

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog='cyclic-ia',
        description='Cyclic interference alignment on the 3-user X-network.',
    )
    sub = parser.add_subparsers(dest='command', required=True)

    def scenario_args(p, with_scheme=True):
        p.add_argument('--scenario', type=Path, default=None,
                       help='Scenario XML (default: the worked n=5 example)')
        if with_scheme:
            p.add_argument('--scheme', choices=SCHEME_TAGS, default=None,
                           help='Override the scenario scheme')
            p.add_argument('--payload-seed', type=int, default=None,
                           help='Seed for the random message payloads')

    def output_args(p):
        p.add_argument('--format', choices=('text', 'machine'), default='text')
        p.add_argument('--out', type=Path, default=None, help='Write the report here instead of stdout')

    p = sub.add_parser('verify', help='Run the scheme and check all messages decode')
    scenario_args(p)
    output_args(p)

    p = sub.add_parser('solve', help='Derive transmission parameters from p_ki')
    scenario_args(p, with_scheme=False)
    p.add_argument('--seed-pki', type=int, default=0, help='Free parameter p_ki (default 0)')
    output_args(p)

    p = sub.add_parser('simulate', help='Signal table and decode trace')
    scenario_args(p)
    p.add_argument('--seed-pki', type=int, default=0, help='Used when the scenario carries no parameters')
    output_args(p)

    p = sub.add_parser('prove', help='Search every normalized (D, p) for a feasible configuration')
    p.add_argument('--n', type=int, required=True)
    p.add_argument('--k', type=int, default=3, choices=(2, 3), help='Number of users')
    p.add_argument('--jobs', type=int, default=None, help='Worker processes (default from config)')
    output_args(p)

    p = sub.add_parser('sample', help='Channels satisfying constraints (i)-(x)')
    p.add_argument('--n', type=int, required=True)
    p.add_argument('--count', type=int, default=None, help='Stop after this many (required for n > 5)')
    p.add_argument('--seed', type=int, default=0)
    output_args(p)
    return parser


def _emit(text: str, out: Path | None):
    if out is None:
        sys.stdout.write(text)
        sys.stdout.flush()
    else:
        out.write_text(text, encoding='utf-8')
        print(f'Wrote {out}', file=sys.stderr)


def _scenario(args, app) -> Scenario:
    if args.scenario is None:
        scenario = worked_scenario(app.default_scheme).with_overrides(t=app.payload_bits)
    else:
        scenario = load_scenario(args.scenario)
    return scenario.with_overrides(scheme=getattr(args, 'scheme', None),
                                   payload_seed=getattr(args, 'payload_seed', None))


def _run(app, scenario: Scenario):
    plan = app.scheme(scenario.scheme).plan(scenario.assignment)
    return execute(plan, scenario.D, scenario.p, scenario.t, scenario.payload_seed)


def cmd_verify(args, app) -> int:
    scenario = _scenario(args, app)
    if scenario.p is None:
        raise ScenarioError('scenario has no <parameters>; run solve first')
    trace = _run(app, scenario)
    violations = check_all(scenario.D, scenario.p, scenario.assignment)
    constraints = check_constraints(scenario.D, scenario.assignment)
    if args.format == 'machine':
        _emit(trace_to_xml(trace, violations, constraints), args.out)
    else:
        _emit(render_violations(violations) + render_constraints(constraints) + render_trace(trace), args.out)
    K = scenario.D.size
    ok = trace.decoded_count == K * K and trace.bit_exact and trace.completed
    return EXIT_OK if ok else EXIT_FAIL


def cmd_solve(args, app) -> int:
    scenario = _scenario(args, app)
    try:
        p = solve_parameters(scenario.D, scenario.assignment, seed=args.seed_pki)
    except ConstraintError as exc:
        print(render_constraints(exc.report), end='', file=sys.stderr)
        return EXIT_FAIL
    except SolverFault as exc:
        print(f'solver: {exc}', file=sys.stderr)
        return EXIT_FAIL
    if args.format == 'machine':
        _emit(scenario_to_xml(scenario.with_parameters(p)), args.out)
    else:
        values = ', '.join(str(v) for v in p.tx_order())
        _emit(f'(p11, p21, p31, p12, p22, p32, p13, p23, p33) = ({values})\n', args.out)
    return EXIT_OK


def cmd_simulate(args, app) -> int:
    scenario = _scenario(args, app)
    if scenario.p is None:
        try:
            scenario = scenario.with_parameters(solve_parameters(scenario.D, scenario.assignment, args.seed_pki))
        except ConstraintError as exc:
            print(render_constraints(exc.report), end='', file=sys.stderr)
            return EXIT_FAIL
    trace = _run(app, scenario)
    if args.format == 'machine':
        _emit(trace_to_xml(trace), args.out)
    else:
        _emit(render_signal_table(trace.transmits, trace.received) + '\n' + render_trace(trace), args.out)
    return EXIT_OK


def cmd_prove(args, app) -> int:
    jobs = args.jobs if args.jobs is not None else app.jobs
    cert = prove_infeasibility(args.n, args.k, jobs=max(1, jobs), max_n=app.search_max_n)
    if args.format == 'machine':
        _emit(certificate_to_xml(cert), args.out)
    else:
        _emit(render_certificate(cert), args.out)
    return EXIT_OK if cert.valid else EXIT_FAIL


def cmd_sample(args, app) -> int:
    channels = sample_valid_channels(args.n, args.count, seed=args.seed, attempts=app.sample_attempts)
    if args.format == 'machine':
        _emit(channels_to_xml(channels, args.n), args.out)
    else:
        _emit(render_channels(channels), args.out)
    return EXIT_OK if channels else EXIT_FAIL


COMMANDS = {
    'verify': cmd_verify,
    'solve': cmd_solve,
    'simulate': cmd_simulate,
    'prove': cmd_prove,
    'sample': cmd_sample,
}


def main(argv=None, app=None) -> int:
    args = build_parser().parse_args(argv)
    app = app or create_app()
    try:
        return COMMANDS[args.command](args, app)
    except (ScenarioError, SearchGuardError, DimensionError) as exc:
        print(f'error: {exc}', file=sys.stderr)
        return EXIT_INPUT
    except PlanError as exc:
        print(f'plan: {exc}', file=sys.stderr)
        return EXIT_FAIL


if __name__ == '__main__':
    raise SystemExit(main())
