import pytest

from knotiso.scenarios import SCENARIO_BUILDERS, build_recursive_r1


@pytest.fixture(scope="session")
def scenarios():
    """All registered scenarios, built once per session."""
    return {name: build() for name, build in SCENARIO_BUILDERS.items()}


@pytest.fixture(scope="session")
def recursive_ablated():
    """The recursive scenario with the unsquish protection removed."""
    return build_recursive_r1(ablated=True)
