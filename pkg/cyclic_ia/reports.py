"""
Report rendering.

    render_signal_table()    v_i / r_j rows by offset column (text)
    render_constraints()     (i)-(x) with witnesses (text)
    render_violations()      violated separability conditions (text)
    render_trace()           decode summary, ledger, DoF (text)
    trace_to_xml()           machine-readable trace
    certificate_to_xml()     machine-readable infeasibility certificate
    channels_to_xml()        sampled channels

Text output is byte-stable for a fixed input.
"""
from __future__ import annotations

from lxml import etree

from cyclic_ia.schemes.constraints import ConstraintReport
from cyclic_ia.schemes.executor import SimulationTrace
from cyclic_ia.search import InfeasibilityCertificate
from cyclic_ia.separability import ViolationSet


def _grid(header, rows) -> str:
    widths = [max(len(r[c]) for r in [header] + rows) for c in range(len(header))]
    lines = []
    for r in [header] + rows:
        lines.append(' | '.join(cell.ljust(w) for cell, w in zip(r, widths)).rstrip())
    return '\n'.join(lines) + '\n'


def render_signal_table(transmits, received) -> str:
    """
    One row per transmitted (v_i) and received (r_j) signal, one column per
    offset. Received cells list the receiver's own messages first.
    """
    n = transmits[0].n
    header = [''] + [f'x^{m}' for m in range(n)]
    rows = [[f'v_{u.owner}'] + u.render_row() for u in transmits]
    rows += [[f'r_{r.owner}'] + r.render_row() for r in received]
    return _grid(header, rows)


def render_constraints(report: ConstraintReport) -> str:
    head = f'constraints for (i,j,k) = {report.assignment}, n = {report.n}: ' \
           f'{"all hold" if report.holds else "FAILING " + ", ".join(e.name for e in report.failing())}'
    return head + '\n' + report.render() + '\n'


def render_violations(violations: ViolationSet) -> str:
    if violations.is_empty():
        return 'separability: no violations\n'
    lines = [f'separability: {len(violations)} violation(s)']
    lines += [f'  {v.describe()}' for v in violations]
    return '\n'.join(lines) + '\n'


def render_trace(trace: SimulationTrace) -> str:
    lines = [f'scheme: {trace.plan.scheme.value}']
    for t in trace.plan.transfers:
        lines.append(f'  transfer {t}')
    for j in sorted(trace.decoded):
        got = ' '.join(str(m) for m in sorted(trace.decoded[j])) or '-'
        lines.append(f'  Rx_{j} decoded: {got}')
    missing = trace.missing()
    if missing:
        lines.append(f'  not decoded: {" ".join(str(m) for m in missing)}')
    lines.append(f'  backhaul: Theta = {trace.ledger.sum_rate} ({trace.ledger.bits} bits)')
    for s in trace.skipped:
        lines.append(f'  skipped {s}')
    for step in trace.unapplied:
        lines.append(f'  cancellation not applied: {step}')
    lines.append(f'  payloads bit-exact: {"yes" if trace.bit_exact else "NO"}')
    lines.append(f'  DoF = {trace.dof.decoded}/{trace.dof.dimensions} = {trace.dof.dof}')
    return '\n'.join(lines) + '\n'


# ── XML ─────────────────────────────────────────────────────────────────

def _tostring(root) -> str:
    return etree.tostring(root, pretty_print=True, encoding='unicode')


def _signals(parent, tag, signals):
    for s in signals:
        el = etree.SubElement(parent, tag, owner=str(s.owner))
        for m, slot in enumerate(s.slots):
            cell = etree.SubElement(el, 'slot', offset=str(m))
            cell.text = slot.render()
            cell.set('payload', ''.join(str(int(b)) for b in s.payloads[m]))


def trace_to_xml(trace: SimulationTrace, violations: ViolationSet | None = None,
                 constraints: ConstraintReport | None = None) -> str:
    root = etree.Element('trace', scheme=trace.plan.scheme.value, n=str(trace.D.n))
    root.set('assignment', ' '.join(str(a) for a in trace.plan.assignment))
    ch = etree.SubElement(root, 'channel')
    ch.text = ';'.join(' '.join(str(v) for v in row) for row in trace.D.exponents())
    pv = etree.SubElement(root, 'parameters', order='p11 p21 p31 p12 p22 p32 p13 p23 p33')
    pv.text = ' '.join(str(v) for v in trace.p.tx_order())

    _signals(etree.SubElement(root, 'transmitted'), 'v', trace.transmits)
    _signals(etree.SubElement(root, 'received'), 'r', trace.received)

    if violations is not None:
        vs = etree.SubElement(root, 'violations', count=str(len(violations)))
        for v in violations:
            etree.SubElement(vs, 'violation', label=v.condition.label, kind=v.condition.kind.value,
                             lhs=str(v.condition.lhs), rhs=str(v.condition.rhs), offset=str(v.lhs_offset.k))
    if constraints is not None:
        cs = etree.SubElement(root, 'constraints', holds=str(constraints.holds).lower())
        for e in constraints.entries:
            etree.SubElement(cs, 'constraint', name=e.name, kind=e.kind, holds=str(e.holds).lower(),
                             witness=' '.join(str(o.k) for o in e.witness))

    bh = etree.SubElement(root, 'backhaul', sum_rate=str(trace.ledger.sum_rate), bits=str(trace.ledger.bits))
    bh.set('links', ' '.join(trace.ledger.links()))
    for s in trace.skipped:
        etree.SubElement(bh, 'skipped', link=s.transfer.link_id, lacking=' '.join(s.lacking))
    for e in trace.ledger.entries:
        etree.SubElement(bh, 'transfer', link=e.link_id, kind=e.kind.value, phase=e.phase.value,
                         content=e.content.render(), bits=str(e.bits))

    dec = etree.SubElement(root, 'decoded', count=str(trace.dof.decoded), bit_exact=str(trace.bit_exact).lower())
    for j in sorted(trace.decoded):
        etree.SubElement(dec, 'receiver', index=str(j),
                         messages=' '.join(str(m) for m in sorted(trace.decoded[j])))
    etree.SubElement(root, 'dof', numerator=str(trace.dof.dof.numerator),
                     denominator=str(trace.dof.dof.denominator))
    return _tostring(root)


def certificate_to_xml(cert: InfeasibilityCertificate, include_timing: bool = True) -> str:
    root = etree.Element('certificate', n=str(cert.n), K=str(cert.K))
    root.set('valid', str(cert.valid).lower())
    space = etree.SubElement(root, 'space', channels=str(cert.channels), parameters=str(cert.parameter_space))
    space.set('exhaustive', str(cert.exhaustive).lower())
    for note in cert.normalization:
        etree.SubElement(space, 'normalization').text = note
    etree.SubElement(root, 'result', examined=str(cert.examined), feasible=str(cert.feasible))
    if include_timing:
        etree.SubElement(root, 'timing', seconds=f'{cert.elapsed:.3f}')
    if cert.witnesses:
        ws = etree.SubElement(root, 'witnesses')
        for exps, values in cert.witnesses:
            etree.SubElement(ws, 'witness',
                             channel=';'.join(' '.join(str(v) for v in row) for row in exps),
                             parameters=' '.join(str(v) for v in values))
    return _tostring(root)


def render_certificate(cert: InfeasibilityCertificate) -> str:
    verdict = 'infeasible (certified)' if cert.valid else (
        f'{cert.feasible} feasible configuration(s)' if cert.feasible else 'no feasible configuration in subset')
    lines = [
        f'n = {cert.n}, K = {cert.K}: {verdict}',
        f'  channels searched: {cert.channels} ({"all normalized" if cert.exhaustive else "subset"})',
        f'  parameter vectors per channel before pruning: {cert.parameter_space}',
        f'  search nodes: {cert.examined}',
        f'  elapsed: {cert.elapsed:.1f}s',
    ]
    return '\n'.join(lines) + '\n'


def render_channels(channels) -> str:
    out = []
    for idx, D in enumerate(channels, 1):
        out.append(f'{idx:>4}: ' + ' / '.join(' '.join(str(v) for v in row) for row in D.exponents()))
    return '\n'.join(out) + ('\n' if out else '')


def channels_to_xml(channels, n: int) -> str:
    root = etree.Element('channels', n=str(n), count=str(len(channels)))
    for D in channels:
        el = etree.SubElement(root, 'channel', axes='receiver,transmitter')
        for j, row in enumerate(D.exponents(), 1):
            etree.SubElement(el, 'row', rx=str(j)).text = ' '.join(str(v) for v in row)
    return _tostring(root)
