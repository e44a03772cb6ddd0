import itertools
from importlib import resources

import pytest

from fairdiv import Grid, coalition_table, load_problem, weighted_problem

BUNDLED_PROBLEM = str(resources.files("fairdiv") / "data" / "five_players.json")


@pytest.fixture(scope="session")
def five_players():
    """Densities of the bundled five-player example."""
    return load_problem(BUNDLED_PROBLEM).densities


@pytest.fixture(scope="session")
def all_subsets_5():
    return [s for r in range(1, 6)
            for s in itertools.combinations(range(5), r)]


@pytest.fixture(scope="session")
def table_4096(five_players, all_subsets_5):
    """Measure table for every coalition of the five players at 4096 cells."""
    return coalition_table(five_players, all_subsets_5, Grid(4096))


@pytest.fixture(scope="session")
def competitive_problem(five_players):
    """All-singletons, unit-weight problem for the bundled example."""
    return weighted_problem(five_players, [(i,) for i in range(5)],
                            [1.0] * 5, Grid(4096))
