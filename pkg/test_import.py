"""Scenario import: load the sample XML and check what comes out."""

import os

import pytest

from cyclic_ia.errors import ScenarioError
from cyclic_ia.scenario import Scenario, load_scenario, worked_scenario, parse_scenario, scenario_to_xml

CHANNEL = """<scenario n="5">
  <channel>
    <row rx="1">0 4 2</row>
    <row rx="2">4 0 2</row>
    <row rx="3">1 1 0</row>
  </channel>
</scenario>"""


def test_sample_scenario_imports(samples_dir, worked_D, worked_p):
    s = load_scenario(os.path.join(samples_dir, 'worked_scenario.xml'))
    assert s == worked_scenario()
    assert s.D == worked_D
    assert s.p == worked_p
    assert s.assignment == (1, 2, 3)
    assert (s.t, s.payload_seed, s.scheme) == (8, 0, 'none')


def test_channel_only_sample(samples_dir):
    s = load_scenario(os.path.join(samples_dir, 'channel_only.xml'))
    assert s.parameters is None
    assert s.p is None
    assert s.scheme == 'combined'
    assert s.channel == worked_scenario().channel


def test_scenario_round_trips_through_xml(worked):
    assert parse_scenario(scenario_to_xml(worked)) == worked
    moved = worked.with_overrides(scheme='iac', payload_seed=11, t=16)
    assert parse_scenario(scenario_to_xml(moved)) == moved
    bare = parse_scenario(CHANNEL)
    assert parse_scenario(scenario_to_xml(bare)) == bare


def test_exponents_reduced_mod_n():
    s = parse_scenario(CHANNEL.replace('0 4 2', '5 9 12'))
    assert s.channel[0] == (0, 4, 2)


def test_rows_follow_rx_attribute():
    shuffled = CHANNEL.replace('<row rx="1">0 4 2</row>', '').replace(
        '<row rx="3">1 1 0</row>', '<row rx="3">1 1 0</row><row rx="1">0 4 2</row>')
    assert parse_scenario(shuffled).channel == parse_scenario(CHANNEL).channel


@pytest.mark.parametrize('xml, fragment', [
    ('<scenario n="5"><channel>', 'well-formed'),
    ('<network n="5"/>', '<scenario>'),
    ('<scenario n="5"/>', '<channel>'),
    (CHANNEL.replace('n="5"', 'n="five"'), 'integer'),
    (CHANNEL.replace('<scenario n="5">', '<scenario n="5"><assignment i="1" j="1" k="3"/>'), 'permutation'),
    (CHANNEL.replace('n="5"', 'n="5" scheme="relay"'), 'unknown scheme'),
    (CHANNEL.replace('0 4 2', '0 4'), '3x3'),
    (CHANNEL.replace('rx="3"', 'rx="4"'), 'numbered'),
])
def test_bad_scenarios_rejected(xml, fragment):
    with pytest.raises(ScenarioError) as exc:
        parse_scenario(xml)
    assert fragment in str(exc.value)


def test_scenario_values_checked():
    with pytest.raises(ScenarioError):
        Scenario(n=0, channel=((0, 0, 0),) * 3)
    with pytest.raises(ScenarioError):
        Scenario(n=5, channel=((0, 0, 0),) * 3, t=0)
    with pytest.raises(ScenarioError):
        Scenario(n=5, channel=((0, 0, 0),) * 3, parameters=((0, 0),) * 2)
