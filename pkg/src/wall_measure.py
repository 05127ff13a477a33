# src/wall_measure.py

"""
Measures of wall sets.

The measure of a set of walls is estimated in the chart (r, omega) centred at the
basepoint o, with density cosh^{n-1}(r) and each wall counted once. Points are
first moved so that the relevant basepoint sits at o (and, for a single pair,
so that the pair becomes (o, boost(t, 1) o)); the integrators never move points
themselves.
"""

import logging
from typing import Sequence, Tuple

import numpy as np

from data_validation import IntegrationConfig, MeasureEstimate
from hyperbolic.lorentz_core import (
    EPS_ALG,
    DegenerateInputError,
    HyperbolicPoint,
    LorentzTransform,
    UsageError,
    apply_point,
    basepoint,
    hyperbolic_distance,
    rotation,
    translation_to,
)
from integrators.base_integrator import WallSet
from integrators.integrator_factory import IntegratorFactory
from utils.rng import derive_seed

logger = logging.getLogger(__name__)

CANONICAL_TOLERANCE = 1e-8


class MeasureEstimationError(Exception):
    """Raised when a measure estimate cannot be produced consistently."""

    pass


def _check_same_dimension(*points: HyperbolicPoint) -> int:
    dimensions = {p.n for p in points}
    if len(dimensions) != 1:
        raise UsageError(f"Points live in different dimensions: {sorted(dimensions)}.")
    return dimensions.pop()


def _canonical_point(t: float, n: int) -> HyperbolicPoint:
    """boost(t, 1) o, written down directly."""
    coords = np.zeros(n + 1)
    coords[0], coords[1] = np.cosh(t), np.sinh(t)
    return HyperbolicPoint.from_coords(coords, renormalize=True)


def _rotation_to_first_axis(direction: np.ndarray) -> np.ndarray:
    """An SO(n) matrix taking the unit vector `direction` to e1."""
    n = direction.shape[0]
    e1 = np.zeros(n)
    e1[0] = 1.0
    w = direction - e1
    if np.linalg.norm(w) <= EPS_ALG**2:
        return np.eye(n)
    householder = np.eye(n) - 2.0 * np.outer(w, w) / (w @ w)
    # the Householder reflection has det -1; flipping the last axis restores SO(n)
    flip = np.eye(n)
    flip[-1, -1] = -1.0
    return flip @ householder


def canonicalize_pair(
    x: HyperbolicPoint, y: HyperbolicPoint
) -> Tuple[LorentzTransform, float]:
    """
    Returns (g, t) with g x = o and g y = boost(t, 1) o, t = d(x, y) > 0.

    g is the inverse translation taking x to o followed by the rotation about o
    taking the direction of the translated y to e1.
    """
    n = _check_same_dimension(x, y)
    t = hyperbolic_distance(x, y)
    if t <= EPS_ALG:
        raise DegenerateInputError("Cannot canonicalize a pair of coincident points.")

    to_origin = translation_to(x).inverse()
    moved = apply_point(to_origin, y).coords
    direction = moved[1:] / np.linalg.norm(moved[1:])
    g = rotation(_rotation_to_first_axis(direction)) @ to_origin

    image_x = apply_point(g, x).coords
    image_y = apply_point(g, y).coords
    expected_y = _canonical_point(t, n).coords
    scale = max(1.0, float(np.cosh(t)))
    x_error = float(np.max(np.abs(image_x - basepoint(n).coords)))
    y_error = float(np.max(np.abs(image_y - expected_y))) / scale
    if max(x_error, y_error) > CANONICAL_TOLERANCE:
        raise MeasureEstimationError(
            f"Canonicalization check failed (x error {x_error:.3e}, y error {y_error:.3e})."
        )
    return g, t


def measure_wall_set(wall_set: WallSet, n: int, cfg: IntegrationConfig) -> MeasureEstimate:
    """Measure of the walls meeting every separation constraint (points in the chart about o)."""
    integrator = IntegratorFactory().get_integrator(cfg, n)
    estimate = integrator.measure(wall_set)
    logger.debug(
        "Measured %d-constraint wall set: %.10g +- %.3g (%s).",
        len(wall_set),
        estimate.value,
        estimate.stderr,
        estimate.method,
    )
    return estimate


def measure_separating(
    x: HyperbolicPoint, y: HyperbolicPoint, cfg: IntegrationConfig
) -> MeasureEstimate:
    """F(x, y): measure of the walls separating x from y."""
    n = _check_same_dimension(x, y)
    integrator = IntegratorFactory().get_integrator(cfg, n)
    if hyperbolic_distance(x, y) <= EPS_ALG:
        return MeasureEstimate.zero(integrator.method)

    if cfg.canonicalize:
        _, t = canonicalize_pair(x, y)
        wall_set = ((basepoint(n), _canonical_point(t, n)),)
    else:
        wall_set = ((x, y),)
    return integrator.measure(wall_set)


def _move_to_origin(base: HyperbolicPoint, points: Sequence[HyperbolicPoint]):
    n = _check_same_dimension(base, *points)
    if hyperbolic_distance(base, basepoint(n)) == 0.0:
        return n, list(points)
    to_origin = translation_to(base).inverse()
    return n, [apply_point(to_origin, p) for p in points]


def _separating_sets(base: HyperbolicPoint, points: Sequence[HyperbolicPoint]):
    """S_p = {walls separating p from base}, each as a one-constraint wall set about o."""
    n, moved = _move_to_origin(base, points)
    o = basepoint(n)
    return n, [((o, p),) for p in moved]


def measure_joint_separating(
    x: HyperbolicPoint, y: HyperbolicPoint, base: HyperbolicPoint, cfg: IntegrationConfig
) -> MeasureEstimate:
    """mu(S_x & S_y), the walls separating both x and y from base."""
    n, (s_x, s_y) = _separating_sets(base, [x, y])
    return measure_wall_set(s_x + s_y, n, cfg)


def gram_matrix(
    points: Sequence[HyperbolicPoint], base: HyperbolicPoint, cfg: IntegrationConfig
) -> Tuple[np.ndarray, np.ndarray]:
    """G_ij = mu(S_i & S_j) and its standard errors; entry (i, j) draws from its own seed."""
    if not points:
        raise UsageError("gram_matrix needs at least one point.")
    n, sets = _separating_sets(base, points)
    m = len(sets)
    gram, stderr = np.zeros((m, m)), np.zeros((m, m))
    for i in range(m):
        for j in range(i, m):
            entry_cfg = cfg.model_copy(update={"seed": derive_seed(cfg.seed, i, j)})
            estimate = measure_wall_set(sets[i] + sets[j], n, entry_cfg)
            gram[i, j] = gram[j, i] = estimate.value
            stderr[i, j] = stderr[j, i] = estimate.stderr
    return gram, stderr


def measure_embedding_norm(
    points: Sequence[HyperbolicPoint],
    lam: Sequence[float],
    base: HyperbolicPoint,
    cfg: IntegrationConfig,
) -> MeasureEstimate:
    """
    ||sum_i lam_i Phi(x_i)||^2 = integral of (sum_i lam_i 1_{S_i})^2.

    Monte Carlo evaluates the squared combination sample by sample on one shared
    wall sample, so the error bar is that of a single estimate.
    """
    lam = np.asarray(lam, dtype=float)
    if lam.shape != (len(points),):
        raise UsageError(f"Expected {len(points)} coefficients, got shape {lam.shape}.")
    n, sets = _separating_sets(base, points)
    integrator = IntegratorFactory().get_integrator(cfg, n)
    return integrator.embedding_norm(sets, lam)
