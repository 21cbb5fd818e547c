import pytest

from hnilm import simgen


@pytest.fixture(scope="session")
def campus_spec():
    return simgen.campus_preset(seed=0)


@pytest.fixture(scope="session")
def campus(campus_spec):
    return simgen.simulate_building(campus_spec)


@pytest.fixture(scope="session")
def ahu_spec():
    return simgen.ahu_scenario_preset(seed=0)


@pytest.fixture(scope="session")
def ahu_building(ahu_spec):
    return simgen.simulate_building(ahu_spec)


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
