# tests/test_integrators/test_integrator_factory.py

import pytest

from data_validation import IntegrationConfig
from hyperbolic.lorentz_core import UsageError
from integrators.integrator_factory import IntegratorFactory
from integrators.monte_carlo_integrator import MonteCarloIntegrator
from integrators.quadrature_integrator import QuadratureIntegrator


@pytest.fixture
def factory():
    return IntegratorFactory()


@pytest.mark.parametrize(
    "n, expected",
    [(2, QuadratureIntegrator), (3, QuadratureIntegrator), (4, MonteCarloIntegrator), (8, MonteCarloIntegrator)],
)
def test_auto_selection(factory, n, expected):
    integrator = factory.get_integrator(IntegrationConfig(), n)
    assert isinstance(integrator, expected)
    assert integrator.n == n


def test_forced_monte_carlo_in_the_plane(factory):
    integrator = factory.get_integrator(IntegrationConfig(method="monte_carlo"), 2)
    assert isinstance(integrator, MonteCarloIntegrator)


def test_forced_quadrature_in_high_dimension(factory):
    with pytest.raises(UsageError):
        factory.get_integrator(IntegrationConfig(method="quadrature"), 4)


@pytest.mark.parametrize("n", [1, 9])
def test_dimension_out_of_range(factory, n):
    with pytest.raises(UsageError):
        factory.get_integrator(IntegrationConfig(), n)
