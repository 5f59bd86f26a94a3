import os

import pytest

from cyclic_ia import create_app
from cyclic_ia.cpcm import make_messages
from cyclic_ia.ring import ParamVector, ShiftMatrix
from cyclic_ia.scenario import worked_scenario

basedir = os.path.abspath(os.path.dirname(__file__))

WORKED_CHANNEL = ((0, 4, 2), (4, 0, 2), (1, 1, 0))
WORKED_PARAMS = (0, 2, 4, 2, 0, 3, 1, 0, 2)   # p11 p21 p31 p12 p22 p32 p13 p23 p33


class TestConfig:
    CIA_PAYLOAD_BITS = 8
    CIA_JOBS = 1
    CIA_SEARCH_MAX_N = 7
    CIA_SAMPLE_ATTEMPTS = 200000
    CIA_LOG_LEVEL = 'WARNING'
    CIA_DEFAULT_SCHEME = 'none'
    SAMPLES_DIR = os.path.join(basedir, 'samples')


@pytest.fixture
def app():
    return create_app(TestConfig)


@pytest.fixture
def worked_D():
    return ShiftMatrix.from_exponents(WORKED_CHANNEL, 5)


@pytest.fixture
def worked_p():
    return ParamVector.from_tx_order(WORKED_PARAMS, 5)


@pytest.fixture
def worked():
    return worked_scenario()


@pytest.fixture
def messages():
    return make_messages(3, 8, seed=0)


@pytest.fixture
def samples_dir():
    return os.path.join(basedir, 'samples')
