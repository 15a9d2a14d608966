import pytest

from qicsim.channel import capacity_table, scenario_moments
from qicsim.scenarios import table1_scenario


@pytest.fixture(scope="session")
def table1_3():
    return table1_scenario(3)


@pytest.fixture(scope="session")
def table1_2():
    return table1_scenario(2)


@pytest.fixture(scope="session")
def moments_3(table1_3):
    return scenario_moments(table1_3)


@pytest.fixture(scope="session")
def moments_2(table1_2):
    return scenario_moments(table1_2)


@pytest.fixture(scope="session")
def captable_3(table1_3):
    return capacity_table(table1_3, base=2)


@pytest.fixture(scope="session")
def captable_2(table1_2):
    return capacity_table(table1_2, base=2)
