import pytest
from fractions import Fraction

from meandim import BuildParams, Construction, generate_interval_schedule


def make_toy(seed_a=1, seed_b=2, rho=Fraction(1, 2), dim=1, depth=2, **kw):
    sched = generate_interval_schedule(seed_a, seed_b, 3)
    return Construction(BuildParams.toy(sched, rho, dim=dim, depth=depth, **kw))


TOY_MATRIX = [
    (1, 2, Fraction(1, 3)),
    (1, 2, Fraction(1, 2)),
    (2, 2, Fraction(1, 3)),
    (2, 2, Fraction(1, 2)),
]


@pytest.fixture(scope="session")
def toy_cfg():
    """The smallest configuration: seed tile [-1,2], rho = 1/2, depth 2."""
    return make_toy()


@pytest.fixture(scope="session")
def toy_words(toy_cfg):
    return toy_cfg.materialize()


@pytest.fixture(scope="session", params=TOY_MATRIX, ids=lambda t: f"[-{t[0]},{t[1]}]-rho={t[2]}")
def matrix_cfg(request):
    a, b, rho = request.param
    return make_toy(a, b, rho)
