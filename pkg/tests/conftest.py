import numpy as np
import pytest

from wcospec.mobius import canonical
from wcospec.spaces import SpaceSpec


@pytest.fixture(scope="session")
def psi_half():
    """Canonical hyperbolic map z -> (0.5+z)/(1+0.5z): a=1, b=-1, psi'(1)=1/3."""
    return canonical(0.5)


@pytest.fixture(scope="session")
def hardy():
    return SpaceSpec.hardy()


@pytest.fixture
def rng():
    return np.random.default_rng(20240811)


def random_polynomial(rng, degree, order):
    c = np.zeros(order + 1, dtype=np.complex128)
    c[: degree + 1] = rng.standard_normal(degree + 1) + 1j * rng.standard_normal(degree + 1)
    from wcospec.series import TaylorSeries

    return TaylorSeries(c)
