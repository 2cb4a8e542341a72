import os
import sys

import pytest
from hypothesis import HealthCheck, settings

sys.path.insert(0, os.path.dirname(__file__))

settings.register_profile("default", deadline=None, max_examples=60,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

CORPUS = os.path.join(os.path.dirname(__file__), "..", "corpus")


@pytest.fixture(scope="session")
def real():
    from ktcube.atoms import real_kit
    return real_kit()


@pytest.fixture(scope="session")
def toy():
    from ktcube.atoms import toy_kit
    return toy_kit()


@pytest.fixture(scope="session")
def micro():
    from ktcube.atoms import micro_kit
    return micro_kit()


@pytest.fixture(scope="session")
def corpus():
    return os.path.abspath(CORPUS)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(mod.RESULTS):
        terminalreporter.write_line(mod.RESULTS[n])
