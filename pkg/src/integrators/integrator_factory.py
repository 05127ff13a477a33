# src/integrators/integrator_factory.py

"""
This module contains the IntegratorFactory class that selects the appropriate integrator.
"""

import logging

from data_validation import IntegrationConfig, IntegrationMethod
from hyperbolic.lorentz_core import UsageError, check_dimension
from .base_integrator import BaseIntegrator
from .monte_carlo_integrator import MonteCarloIntegrator
from .quadrature_integrator import SUPPORTED_DIMENSIONS, QuadratureIntegrator


class IntegratorFactory:
    """Instantiates the integrator requested by the config, or the best one for n under `auto`."""

    def __init__(self):
        self.logger = logging.getLogger(self.__class__.__name__)

    def get_integrator(self, cfg: IntegrationConfig, n: int) -> BaseIntegrator:
        n = check_dimension(n)
        method = IntegrationMethod(cfg.method)
        if method == IntegrationMethod.AUTO:
            method = (
                IntegrationMethod.QUADRATURE
                if n in SUPPORTED_DIMENSIONS
                else IntegrationMethod.MONTE_CARLO
            )
            self.logger.debug("Auto-selected %s for n=%d.", method.value, n)

        if method == IntegrationMethod.QUADRATURE:
            if n not in SUPPORTED_DIMENSIONS:
                self.logger.error("Quadrature requested for n=%d.", n)
                raise UsageError(f"Quadrature is only available for n in {SUPPORTED_DIMENSIONS}.")
            return QuadratureIntegrator(cfg, n)
        if method == IntegrationMethod.MONTE_CARLO:
            return MonteCarloIntegrator(cfg, n)
        raise UsageError(f"Unknown integration method: {cfg.method}")
