# src/integrators/base_integrator.py

from abc import ABC, abstractmethod
from typing import Sequence, Tuple
import logging

import numpy as np

from data_validation import IntegrationConfig, MeasureEstimate
from hyperbolic.lorentz_core import HyperbolicPoint, basepoint, hyperbolic_distance


class IntegrationError(Exception):
    """Raised when an integrator produces an unusable result."""

    pass


# Integrating over all of R x S^{n-1} visits each wall twice, as u and -u.
ONCE_PER_WALL = 0.5

# "the wall separates p from q"
SeparationConstraint = Tuple[HyperbolicPoint, HyperbolicPoint]
# walls satisfying every constraint at once
WallSet = Tuple[SeparationConstraint, ...]


def domain_half_width(wall_sets: Sequence[WallSet], r_margin: float) -> float:
    """
    Half-width L of the r-domain [-L, L] containing every wall of the given sets.

    A wall separating p from q is no farther from o than the farther of the two
    points, and |r| is exactly the distance from o to the wall.
    """
    points = [p for wall_set in wall_sets for pair in wall_set for p in pair]
    if not points:
        return r_margin
    o = basepoint(points[0].n)
    return max(hyperbolic_distance(o, p) for p in points) + r_margin


class BaseIntegrator(ABC):
    """Abstract base class for wall-measure integrators.

    Points handed to an integrator are expressed in the chart centred at the
    basepoint o; integrators never move points around themselves.
    """

    method: str = ""

    def __init__(self, cfg: IntegrationConfig, n: int):
        self.logger = logging.getLogger(self.__class__.__name__)
        self.cfg = cfg
        self.n = n

    @abstractmethod
    def measure(self, wall_set: WallSet) -> MeasureEstimate:
        """Measure of the set of walls satisfying every constraint, each wall once."""
        pass

    def measure_many(self, wall_sets: Sequence[WallSet]) -> list:
        return [self.measure(wall_set) for wall_set in wall_sets]

    def embedding_norm(
        self, indicator_sets: Sequence[WallSet], lam: np.ndarray
    ) -> MeasureEstimate:
        """
        Integral of (sum_i lam_i * 1_{S_i})^2, i.e. lam^T G lam with G_ij = mu(S_i & S_j).

        The default assembles G from pairwise intersections; integrators that can
        evaluate the integrand sample by sample override this.
        """
        lam = np.asarray(lam, dtype=float)
        m = len(indicator_sets)
        gram = np.zeros((m, m))
        variance = 0.0
        for i in range(m):
            for j in range(i, m):
                estimate = self.measure(tuple(indicator_sets[i]) + tuple(indicator_sets[j]))
                gram[i, j] = gram[j, i] = estimate.value
                factor = lam[i] * lam[j] * (1.0 if i == j else 2.0)
                variance += (factor * estimate.stderr) ** 2
        value = float(lam @ gram @ lam)
        return MeasureEstimate(
            value=max(value, 0.0),
            stderr=float(np.sqrt(variance)),
            samples=m * (m + 1) // 2,
            method=self.method,
        )
