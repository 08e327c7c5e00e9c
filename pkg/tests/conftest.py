import numpy as np
import pytest

from nlks import DomainConfig, RealField, random_field, to_spectral


@pytest.fixture
def pi_domain():
    return DomainConfig(np.pi, 32)


@pytest.fixture
def chaotic_domain():
    return DomainConfig(16 * np.pi, 512)


@pytest.fixture
def small_domain():
    return DomainConfig(16 * np.pi, 128)


def sampled(domain, func):
    return to_spectral(RealField.from_function(domain, func))


@pytest.fixture
def u0(chaotic_domain):
    return random_field(chaotic_domain, 0)
