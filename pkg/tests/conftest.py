import pytest

import qoresolve as q


@pytest.fixture(scope="session")
def golden_tree():
    """Resolution tree of z^3 + x^2 y^4, the fully worked reference case."""
    state = q.initial_state(3, q.pair_list(("2/3", "4/3")))
    return q.resolve(state)


#: chart choices reproducing the reference trace (years 0-3, then the
#: restarted cycle's years 0-8)
GOLDEN_CHARTS = ["x", "y", "x", "y", "x", "y", "x", "y", "x", "y", "y", "y"]


@pytest.fixture(scope="session")
def golden_path(golden_tree):
    return golden_tree.path(GOLDEN_CHARTS)
