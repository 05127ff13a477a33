# src/integrators/monte_carlo_integrator.py

from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Sequence, Tuple

import numpy as np

from data_validation import MeasureEstimate
from hyperbolic.wall_space import (
    chart_walls,
    sample_directions,
    side_signs,
    sphere_area,
    wall_density,
)
from utils.rng import substream
from .base_integrator import (
    ONCE_PER_WALL,
    BaseIntegrator,
    IntegrationError,
    WallSet,
    domain_half_width,
)

# per-sample integrand: walls (m, n+1) -> values (m,) or (m, k)
Integrand = Callable[[np.ndarray], np.ndarray]


class MonteCarloIntegrator(BaseIntegrator):
    """Seeded Monte Carlo over r uniform on [-L, L] and omega uniform on S^{n-1}.

    The sample is split into fixed-size chunks; chunk c always draws from the
    substream (seed, c), and chunk moments are merged in chunk order, so the
    estimate is bit-identical for any number of worker threads.
    """

    method = "monte_carlo"

    def indicator(self, wall_set: WallSet) -> Integrand:
        eps_side = self.cfg.eps_side

        def separated(walls: np.ndarray) -> np.ndarray:
            inside = np.ones(walls.shape[0], dtype=bool)
            for p, q in wall_set:
                inside &= side_signs(walls, p, eps_side) * side_signs(walls, q, eps_side) == -1
            return inside.astype(float)

        return separated

    def measure(self, wall_set: WallSet) -> MeasureEstimate:
        half_width = domain_half_width([wall_set], self.cfg.r_margin)
        mean, stderr, count = self.expectation(half_width, self.indicator(wall_set))
        return MeasureEstimate(
            value=float(mean), stderr=float(stderr), samples=count, method=self.method
        )

    def embedding_norm(
        self, indicator_sets: Sequence[WallSet], lam: np.ndarray
    ) -> MeasureEstimate:
        """(sum_i lam_i 1_{S_i})^2 evaluated per sample on one shared wall sample."""
        lam = np.asarray(lam, dtype=float)
        indicators = [self.indicator(wall_set) for wall_set in indicator_sets]
        half_width = domain_half_width(indicator_sets, self.cfg.r_margin)

        def squared_combination(walls: np.ndarray) -> np.ndarray:
            combination = sum(weight * chi(walls) for weight, chi in zip(lam, indicators))
            return combination**2

        mean, stderr, count = self.expectation(half_width, squared_combination)
        return MeasureEstimate(
            value=float(mean), stderr=float(stderr), samples=count, method=self.method
        )

    def expectation(
        self, half_width: float, integrand: Integrand
    ) -> Tuple[np.ndarray, np.ndarray, int]:
        """
        Mean and standard error of integrand * (importance weight) over the sample.

        The weight cosh^{n-1}(r) * 2L * |S^{n-1}| / 2 turns the sample mean into
        the once-per-wall measure.
        """
        samples, chunk_size = self.cfg.samples, self.cfg.chunk_size
        chunks = [
            (index, min(chunk_size, samples - start))
            for index, start in enumerate(range(0, samples, chunk_size))
        ]
        scale = 2.0 * half_width * sphere_area(self.n) * ONCE_PER_WALL

        def run_chunk(chunk):
            index, size = chunk
            rng = substream(self.cfg.seed, index)
            r = rng.uniform(-half_width, half_width, size)
            omega = sample_directions(rng, self.n, size)
            values = integrand(chart_walls(r, omega))
            weights = scale * wall_density(r, self.n)
            if values.ndim == 2:
                weights = weights[:, None]
            weighted = values * weights
            chunk_mean = weighted.mean(axis=0)
            return size, chunk_mean, ((weighted - chunk_mean) ** 2).sum(axis=0)

        if self.cfg.workers > 1 and len(chunks) > 1:
            with ThreadPoolExecutor(max_workers=self.cfg.workers) as executor:
                moments = list(executor.map(run_chunk, chunks))
        else:
            moments = [run_chunk(chunk) for chunk in chunks]

        count, mean, m2 = 0, 0.0, 0.0
        for size, chunk_mean, chunk_m2 in moments:
            total = count + size
            delta = chunk_mean - mean
            mean = mean + delta * size / total
            m2 = m2 + chunk_m2 + delta**2 * count * size / total
            count = total
            self.logger.debug("Merged chunk of %d samples (total %d).", size, count)

        variance = m2 / (count - 1) if count > 1 else np.zeros_like(mean)
        stderr = np.sqrt(variance / count)
        if not np.all(np.isfinite(mean)):
            raise IntegrationError("Monte Carlo estimate is not finite.")
        return mean, stderr, count
