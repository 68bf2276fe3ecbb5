import pytest

from gpsthin.bending import build_unitary_setup, find_bending_unit
from gpsthin.gps import GpsParameters, build_gps_instance
from gpsthin.numfield import adjoin_sqrt, make_base_field, rational_field


@pytest.fixture(scope="session")
def Q():
    return rational_field()


@pytest.fixture(scope="session")
def Q2(Q):
    return adjoin_sqrt(Q, 2, require_totally_real=True)


@pytest.fixture(scope="session")
def Q5():
    """Q(θ) with θ² = θ + 1, σ_0 sending θ to the golden ratio."""
    return make_base_field([-1, -1, 1])


@pytest.fixture(scope="session")
def canonical(Q):
    return build_gps_instance(GpsParameters.make(Q, 1, 2, [1, 1], 1))


@pytest.fixture(scope="session")
def canonical_setup(canonical):
    return build_unitary_setup(canonical, find_bending_unit(canonical.L, 50))


@pytest.fixture(scope="session")
def quartic(Q5):
    return build_gps_instance(GpsParameters.make(Q5, 1, 2, [1, 1], [1, 2]))


@pytest.fixture(scope="session")
def lorentz_gens(canonical):
    """Six height-2 isometries of Diag(1,1,1,-1) that move e0; together they act irreducibly."""
    from itertools import islice

    from gpsthin.forms import iter_isometries

    gs = [g for g in islice(iter_isometries(canonical.J1, 2), 400) if not g[1, 0].is_zero()]
    return gs[:6]


def pytest_terminal_summary(terminalreporter):
    from test_acceptance import RESULTS

    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in RESULTS:
            terminalreporter.write_line(line)
