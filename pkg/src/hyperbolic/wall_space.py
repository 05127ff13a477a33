# src/hyperbolic/wall_space.py

"""
De Sitter space as the space of walls of hyperbolic n-space.

A unit spacelike vector u (<u,u> = +1) names the totally geodesic hyperplane
P_u = {x : <x,u> = 0}; u and -u name the same wall, so every Wall is stored in a
canonical sign. The chart u(r, w) = (sinh r, cosh r * w), r real, w on S^{n-1},
makes r the signed distance from o to the wall and carries the invariant density
cosh^{n-1}(r) dr dw.
"""

from dataclasses import dataclass
from typing import Union

import numpy as np
from scipy.special import gamma

from hyperbolic.lorentz_core import (
    EPS_ALG,
    GeometryError,
    HyperbolicPoint,
    LorentzTransform,
    MinkowskiVector,
    UsageError,
    minkowski_inner,
    minkowski_inner_many,
)


EPS_SIGN = 1e-12
EPS_SIDE = 1e-12


class WallSpaceError(GeometryError):
    """Raised for internal inconsistencies in wall computations."""

    pass


def canonical_sign(coords: np.ndarray) -> float:
    """+1 or -1 such that the first coordinate above EPS_SIGN becomes positive."""
    for value in coords:
        if abs(value) > EPS_SIGN:
            return 1.0 if value > 0 else -1.0
    raise WallSpaceError("Cannot canonicalize a vector with no significant entry.")


@dataclass(frozen=True, eq=False)
class Wall:
    """A totally geodesic hyperplane, as a canonical unit de Sitter vector."""

    vector: MinkowskiVector

    def __post_init__(self):
        u = self.vector.coords
        scale = max(1.0, abs(float(u[0])))
        scaled = u / scale
        defect = abs(minkowski_inner(scaled, scaled) - 1.0 / scale**2)
        if defect > EPS_ALG:
            raise UsageError(f"Vector is not a unit de Sitter vector (defect {defect:.3e}).")
        if canonical_sign(u) < 0:
            object.__setattr__(self, "vector", -self.vector)

    @classmethod
    def from_coords(cls, coords, renormalize: bool = False) -> "Wall":
        values = np.array(coords, dtype=float)
        if renormalize:
            spatial_norm = np.linalg.norm(values[1:])
            if spatial_norm == 0.0:
                raise WallSpaceError("Wall vector has a vanishing spatial part.")
            values[1:] *= np.hypot(1.0, values[0]) / spatial_norm
        return cls(MinkowskiVector(values))

    @property
    def coords(self) -> np.ndarray:
        return self.vector.coords

    @property
    def n(self) -> int:
        return self.vector.n

    def __eq__(self, other) -> bool:
        if not isinstance(other, Wall):
            return NotImplemented
        return self.coords.shape == other.coords.shape and bool(
            np.allclose(self.coords, other.coords, rtol=0.0, atol=1e-10)
        )

    def __hash__(self) -> int:
        return hash(tuple(np.round(self.coords, 10)))

    def __repr__(self) -> str:
        return f"Wall({self.coords.tolist()})"


@dataclass(frozen=True)
class WallChart:
    """Chart coordinates (r, omega) of a wall."""

    r: float
    omega: tuple

    def __post_init__(self):
        omega = tuple(float(w) for w in self.omega)
        if len(omega) < 2:
            raise UsageError("omega must be a unit vector in R^n with n >= 2.")
        if abs(sum(w * w for w in omega) - 1.0) > EPS_ALG:
            raise UsageError("omega must be a unit vector.")
        if not np.isfinite(self.r):
            raise UsageError("r must be finite.")
        object.__setattr__(self, "r", float(self.r))
        object.__setattr__(self, "omega", omega)


def wall_from_chart(chart: WallChart) -> Wall:
    omega = np.asarray(chart.omega)
    return Wall.from_coords(np.concatenate([[np.sinh(chart.r)], np.cosh(chart.r) * omega]))


def chart_from_wall(u: Wall) -> WallChart:
    coords = u.coords
    r = float(np.arcsinh(coords[0]))
    if np.linalg.norm(coords[1:]) == 0.0:
        raise WallSpaceError("Wall has a degenerate spatial part.")
    omega = coords[1:] / np.cosh(r)
    # absorb the last ulp so the chart invariant holds exactly
    omega = omega / np.linalg.norm(omega)
    return WallChart(r=r, omega=tuple(omega))


WallLike = Union[Wall, MinkowskiVector, np.ndarray]


def _wall_coords(u: WallLike) -> np.ndarray:
    if isinstance(u, (Wall, MinkowskiVector)):
        return u.coords
    return np.asarray(u, dtype=float)


def side(u: WallLike, x: HyperbolicPoint, eps_side: float = EPS_SIDE) -> int:
    """Sign of <x, u>, with 0 inside the dead zone |<x, u>| <= eps_side."""
    value = minkowski_inner(_wall_coords(u), x.coords)
    if abs(value) <= eps_side:
        return 0
    return 1 if value > 0 else -1


def separates(
    u: WallLike, x: HyperbolicPoint, y: HyperbolicPoint, eps_side: float = EPS_SIDE
) -> bool:
    """True iff x and y lie strictly on opposite sides of the wall."""
    return side(u, x, eps_side) * side(u, y, eps_side) == -1


def wall_density(r, n: int):
    """cosh^{n-1}(r), the invariant density in chart coordinates."""
    if int(n) < 2:
        raise UsageError(f"Dimension n must be >= 2, got {n}.")
    return np.cosh(r) ** (int(n) - 1)


def point_wall_distance(u: WallLike, x: HyperbolicPoint) -> float:
    """dist(x, P_u) = asinh(|<x, u>|)."""
    return float(np.arcsinh(abs(minkowski_inner(_wall_coords(u), x.coords))))


def apply_wall(g: LorentzTransform, u: Wall) -> Wall:
    if g.n != u.n:
        raise UsageError(f"Dimension mismatch: transform {g.n} vs wall {u.n}.")
    return Wall.from_coords(g.matrix @ u.coords, renormalize=True)


def wall_through(x: HyperbolicPoint, normal) -> Wall:
    """The wall through x whose unit normal at x is the tangent vector `normal`."""
    v = np.asarray(normal, dtype=float)
    tangent = v + minkowski_inner(v, x.coords) * x.coords
    norm_sq = minkowski_inner(tangent, tangent)
    if norm_sq <= 0.0:
        raise UsageError("Normal direction must be spacelike at x.")
    return Wall.from_coords(tangent / np.sqrt(norm_sq), renormalize=True)


def sphere_area(n: int) -> float:
    """Area of the unit sphere S^{n-1} in R^n."""
    return float(2.0 * np.pi ** (n / 2.0) / gamma(n / 2.0))


def sample_directions(rng: np.random.Generator, n: int, m: int) -> np.ndarray:
    """m uniform points on S^{n-1}, as normalized Gaussian vectors."""
    directions = rng.standard_normal((m, n))
    directions /= np.linalg.norm(directions, axis=1, keepdims=True)
    return directions


def chart_walls(r: np.ndarray, omega: np.ndarray) -> np.ndarray:
    """Vectorized chart: rows (sinh r_k, cosh r_k * omega_k), uncanonicalized."""
    return np.column_stack([np.sinh(r), np.cosh(r)[:, None] * omega])


def side_signs(walls: np.ndarray, x: HyperbolicPoint, eps_side: float = EPS_SIDE) -> np.ndarray:
    """Vectorized `side` for the rows of `walls`."""
    values = minkowski_inner_many(walls, x.coords)
    signs = np.sign(values).astype(np.int8)
    signs[np.abs(values) <= eps_side] = 0
    return signs


def crossing_slope(x: HyperbolicPoint, omega: np.ndarray) -> np.ndarray:
    """
    a_x(omega) = <x_s, omega> / x0, in (-1, 1).

    In the chart about o, <x, u(r, omega)> = cosh r * x0 * (a_x - tanh r), so the
    wall with direction omega passes through x at tanh r = a_x and x lies on its
    positive side exactly when tanh r < a_x.
    """
    coords = x.coords
    return (omega @ coords[1:]) / coords[0]
