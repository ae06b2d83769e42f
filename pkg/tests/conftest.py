import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from dualgeo import fixtures as fx


@pytest.fixture(scope="session")
def sphere():
    return fx.sphere2()


@pytest.fixture(scope="session")
def hyperbolic():
    return fx.hyperbolic2()


@pytest.fixture(scope="session")
def fisher():
    return fx.fisher_normal()


@pytest.fixture(scope="session")
def euclid1():
    return fx.euclidean(1, ("x",))


@pytest.fixture(scope="session")
def euclid2():
    return fx.euclidean(2)


@pytest.fixture(scope="session")
def euclid3():
    return fx.euclidean(3)


@pytest.fixture(scope="session")
def euclid4():
    return fx.euclidean(4)


@pytest.fixture(scope="session")
def standard_twists():
    return dict(fx.standard_twists())


@pytest.fixture(scope="session")
def dualistic_suite():
    return fx.dualistic_suite()


@pytest.fixture(scope="session")
def spec_dir():
    return Path(__file__).parent.parent / "specs"
