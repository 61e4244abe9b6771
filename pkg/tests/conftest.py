import pytest

from fibnim.solver import Solver


@pytest.fixture(scope="session")
def solver():
    """One memo shared by the whole run; solving is pure, so reuse is safe."""
    return Solver()
