import numpy as np
import pytest

from outerlength import forge
from outerlength.oval import SupportOval, circle, ellipse, perturbed_circle


@pytest.fixture(scope="session")
def round_table():
    return circle()


@pytest.fixture(scope="session")
def ellipse_table():
    # semi-axes (sin 0.8, cos 0.8), so a^2 + b^2 = 1
    return ellipse(np.sin(0.8), np.cos(0.8))


@pytest.fixture(scope="session")
def wobble3_table():
    return perturbed_circle(0.05, 3)


@pytest.fixture(scope="session")
def wobble2_table():
    return perturbed_circle(0.1, 2)


@pytest.fixture(scope="session")
def forge_spec():
    return forge.FourPeriodicSpec.from_harmonics({2: (0.0, 0.1)})


@pytest.fixture(scope="session")
def forge_table(forge_spec):
    oval, family = forge.from_f(forge_spec)
    return oval, family


@pytest.fixture(scope="session")
def spline_wobble3():
    return SupportOval.from_callable(lambda a: 1.0 + 0.05 * np.cos(3 * a))
