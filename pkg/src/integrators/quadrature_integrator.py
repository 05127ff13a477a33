# src/integrators/quadrature_integrator.py

from functools import cached_property
from typing import Tuple

import numpy as np

from data_validation import IntegrationConfig, MeasureEstimate
from hyperbolic.lorentz_core import UsageError
from hyperbolic.wall_space import crossing_slope, wall_density
from .base_integrator import ONCE_PER_WALL, BaseIntegrator, WallSet

SUPPORTED_DIMENSIONS = (2, 3)


class QuadratureIntegrator(BaseIntegrator):
    """Deterministic product quadrature for n = 2, 3.

    For a fixed direction omega, each constraint "separates p from q" cuts out
    the open interval of tanh r between a_p(omega) and a_q(omega), so a wall set
    is one r-interval per direction. The r-integral of cosh^{n-1} over that
    interval is done by Gauss-Legendre; the sphere is covered by the trapezoid
    rule on the circle (n = 2) or by Gauss-Legendre in the polar coordinate
    times the trapezoid rule in azimuth (n = 3, polar axis e1, split at the
    equator).
    """

    method = "quadrature"

    def __init__(self, cfg: IntegrationConfig, n: int):
        if n not in SUPPORTED_DIMENSIONS:
            raise UsageError(
                f"Quadrature supports n in {SUPPORTED_DIMENSIONS}; use Monte Carlo for n = {n}."
            )
        super().__init__(cfg, n)
        self.logger.debug(
            "QuadratureIntegrator initialized: n=%d, nodes=%d, r_nodes=%d.",
            n,
            cfg.nodes,
            cfg.r_nodes,
        )

    @cached_property
    def sphere_rule(self) -> Tuple[np.ndarray, np.ndarray]:
        """Directions (k, n) and weights (k,) integrating over S^{n-1}."""
        nodes = self.cfg.nodes
        azimuth = 2.0 * np.pi * np.arange(nodes) / nodes
        azimuth_weight = 2.0 * np.pi / nodes
        if self.n == 2:
            directions = np.column_stack([np.cos(azimuth), np.sin(azimuth)])
            return directions, np.full(nodes, azimuth_weight)

        half = max(nodes // 2, 1)
        x, w = np.polynomial.legendre.leggauss(half)
        # [-1, 0] and [0, 1], so the equator (kink for pairs along e1) is a node boundary
        polar = np.concatenate([(x - 1.0) / 2.0, (x + 1.0) / 2.0])
        polar_weight = np.concatenate([w / 2.0, w / 2.0])
        z, phi = np.meshgrid(polar, azimuth, indexing="ij")
        ring = np.sqrt(1.0 - z**2)
        directions = np.stack([z, ring * np.cos(phi), ring * np.sin(phi)], axis=-1)
        weights = np.outer(polar_weight, np.full(nodes, azimuth_weight))
        return directions.reshape(-1, 3), weights.ravel()

    @cached_property
    def r_rule(self) -> Tuple[np.ndarray, np.ndarray]:
        return np.polynomial.legendre.leggauss(self.cfg.r_nodes)

    def measure(self, wall_set: WallSet) -> MeasureEstimate:
        directions, weights = self.sphere_rule
        lower = np.full(len(weights), -1.0)
        upper = np.full(len(weights), 1.0)
        for p, q in wall_set:
            a_p, a_q = crossing_slope(p, directions), crossing_slope(q, directions)
            lower = np.maximum(lower, np.minimum(a_p, a_q))
            upper = np.minimum(upper, np.maximum(a_p, a_q))

        open_fibres = upper > lower
        r_lo = np.arctanh(lower[open_fibres])
        r_hi = np.arctanh(upper[open_fibres])
        x, w = self.r_rule
        half = (r_hi - r_lo) / 2.0
        r = (r_hi + r_lo)[:, None] / 2.0 + half[:, None] * x[None, :]
        fibre = half * (wall_density(r, self.n) @ w)

        value = ONCE_PER_WALL * float(weights[open_fibres] @ fibre)
        self.logger.debug("Quadrature over %d open fibres: %.12g", open_fibres.sum(), value)
        return MeasureEstimate(
            value=max(value, 0.0),
            stderr=0.0,
            samples=len(weights) * len(w),
            method=self.method,
        )
