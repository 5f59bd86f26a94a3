"""
Scenario documents.

A scenario bundles one network configuration:

    <scenario n="5" t="8" scheme="none" payload-seed="0">
      <assignment i="1" j="2" k="3"/>
      <channel axes="receiver,transmitter">
        <row rx="1">0 4 2</row>  ...
      </channel>
      <parameters axes="receiver,transmitter">     (optional, solver fills it)
        <row rx="1">0 2 1</row>  ...
      </parameters>
    </scenario>

Both matrices are receiver-major: row j, column i holds d_ji (or p_ji),
the W_ji index order. Exponents are reduced mod n on load.
"""
from __future__ import annotations

from dataclasses import dataclass, replace
from pathlib import Path

from lxml import etree

from cyclic_ia.errors import ScenarioError
from cyclic_ia.ring import ParamVector, ShiftMatrix
from cyclic_ia.schemes import SCHEME_TAGS

AXES = 'receiver,transmitter'


def _int(val, what):
    try:
        return int(val)
    except (TypeError, ValueError):
        raise ScenarioError(f'{what}: expected an integer, got {val!r}') from None


@dataclass(frozen=True)
class Scenario:
    n: int
    channel: tuple[tuple[int, ...], ...]
    parameters: tuple[tuple[int, ...], ...] | None = None
    assignment: tuple[int, int, int] = (1, 2, 3)
    scheme: str = 'none'
    t: int = 8
    payload_seed: int = 0

    def __post_init__(self):
        if self.n < 1:
            raise ScenarioError(f'n must be positive, got {self.n}')
        if self.t < 1:
            raise ScenarioError(f'payload width t must be positive, got {self.t}')
        object.__setattr__(self, 'channel', self._square(self.channel, 'channel'))
        if self.parameters is not None:
            object.__setattr__(self, 'parameters', self._square(self.parameters, 'parameters'))
            if len(self.parameters) != len(self.channel):
                raise ScenarioError('channel and parameters differ in size')
        if sorted(self.assignment) != [1, 2, 3]:
            raise ScenarioError(f'assignment {self.assignment} is not a permutation of 1, 2, 3')
        object.__setattr__(self, 'assignment', tuple(self.assignment))

    def _square(self, rows, what):
        rows = tuple(tuple(int(v) % self.n for v in r) for r in rows)
        if len(rows) != 3 or any(len(r) != 3 for r in rows):
            raise ScenarioError(f'{what} must be 3x3, got {"x".join(str(len(r)) for r in rows) or "empty"} rows')
        return rows

    @property
    def D(self) -> ShiftMatrix:
        return ShiftMatrix.from_exponents(self.channel, self.n)

    @property
    def p(self) -> ParamVector | None:
        if self.parameters is None:
            return None
        return ParamVector.from_exponents(self.parameters, self.n)

    def with_parameters(self, p: ParamVector) -> 'Scenario':
        return replace(self, parameters=p.exponents())

    def with_overrides(self, scheme=None, payload_seed=None, t=None) -> 'Scenario':
        return replace(self,
                       scheme=self.scheme if scheme is None else scheme,
                       payload_seed=self.payload_seed if payload_seed is None else payload_seed,
                       t=self.t if t is None else t)


# ── Parsing ─────────────────────────────────────────────────────────────

def _matrix(elem, what):
    rows = elem.findall('row')
    if not rows:
        raise ScenarioError(f'<{what}> has no <row> elements')
    by_rx = {}
    for idx, row in enumerate(rows, 1):
        rx = _int(row.get('rx', idx), f'{what} row rx')
        by_rx[rx] = tuple(_int(tok, f'{what} row {rx}') for tok in (row.text or '').split())
    if sorted(by_rx) != list(range(1, len(rows) + 1)):
        raise ScenarioError(f'<{what}> rows must be numbered 1..{len(rows)}, got {sorted(by_rx)}')
    return tuple(by_rx[j] for j in sorted(by_rx))


def parse_scenario(xml_content) -> Scenario:
    if isinstance(xml_content, str):
        xml_content = xml_content.encode('utf-8')
    try:
        root = etree.fromstring(xml_content)
    except etree.XMLSyntaxError as exc:
        raise ScenarioError(f'scenario is not well-formed XML: {exc}') from exc
    if root.tag != 'scenario':
        raise ScenarioError(f'expected <scenario>, found <{root.tag}>')

    channel = root.find('channel')
    if channel is None:
        raise ScenarioError('No <channel> element found in scenario')
    params = root.find('parameters')
    asg = root.find('assignment')
    assignment = (1, 2, 3)
    if asg is not None:
        assignment = tuple(_int(asg.get(role), f'assignment {role}') for role in 'ijk')

    scheme = (root.get('scheme') or 'none').strip().lower()
    if scheme not in SCHEME_TAGS:
        raise ScenarioError(f'unknown scheme {scheme!r}')

    return Scenario(
        n=_int(root.get('n'), 'n'),
        channel=_matrix(channel, 'channel'),
        parameters=_matrix(params, 'parameters') if params is not None else None,
        assignment=assignment,
        scheme=scheme,
        t=_int(root.get('t', 8), 't'),
        payload_seed=_int(root.get('payload-seed', 0), 'payload-seed'),
    )


def load_scenario(path) -> Scenario:
    try:
        data = Path(path).read_bytes()
    except OSError as exc:
        raise ScenarioError(f'cannot read scenario {path}: {exc}') from exc
    return parse_scenario(data)


# ── Writing ─────────────────────────────────────────────────────────────

def _matrix_elem(parent, tag, rows):
    elem = etree.SubElement(parent, tag, axes=AXES)
    for j, row in enumerate(rows, 1):
        r = etree.SubElement(elem, 'row', rx=str(j))
        r.text = ' '.join(str(v) for v in row)
    return elem


def scenario_to_xml(scenario: Scenario) -> str:
    root = etree.Element('scenario', n=str(scenario.n), t=str(scenario.t), scheme=scenario.scheme)
    root.set('payload-seed', str(scenario.payload_seed))
    i, j, k = scenario.assignment
    etree.SubElement(root, 'assignment', i=str(i), j=str(j), k=str(k))
    _matrix_elem(root, 'channel', scenario.channel)
    if scenario.parameters is not None:
        _matrix_elem(root, 'parameters', scenario.parameters)
    return etree.tostring(root, pretty_print=True, encoding='unicode')


def worked_scenario(scheme: str = 'none') -> Scenario:
    """The worked n = 5 example: scheme-valid channel, solved parameters."""
    return Scenario(
        n=5,
        channel=((0, 4, 2), (4, 0, 2), (1, 1, 0)),
        parameters=((0, 2, 1), (2, 0, 0), (4, 3, 2)),
        scheme=scheme,
    )
