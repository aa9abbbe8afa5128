import os
import sys

import pytest
from hypothesis import HealthCheck, settings

from soas import corpus

sys.path.insert(0, os.path.dirname(__file__))

settings.register_profile(
    "default", max_examples=60, deadline=None,
    suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

SIGS = ("stlc.soas", "pd.soas", "stlc-full.soas", "arith.soas", "lambda.soas")


@pytest.fixture(scope="session")
def sigs():
    return {name: corpus.load(name) for name in SIGS}


@pytest.fixture(scope="session")
def stlc(sigs):
    return sigs["stlc.soas"]


@pytest.fixture(scope="session")
def pd(sigs):
    return sigs["pd.soas"]


@pytest.fixture(scope="session")
def arith(sigs):
    return sigs["arith.soas"]


# acceptance results collected by test_acceptance, reported after the run
ACCEPTANCE = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        terminalreporter.write_line(ACCEPTANCE[n])
