# src/hyperbolic/lorentz_core.py

"""
Minkowski linear algebra on R^{n+1} and the hyperboloid model of hyperbolic n-space.

Coordinate 0 is timelike: <x, y> = -x0*y0 + x1*y1 + ... + xn*yn. Points of
hyperbolic space live on the upper sheet <x, x> = -1, x0 > 0, and SO(n,1)
elements act on it as (n+1)x(n+1) matrices.

All value types are immutable; every operation is a pure function of its inputs.
"""

import logging
from dataclasses import dataclass
from typing import Optional, Tuple, Union

import numpy as np

logger = logging.getLogger(__name__)

EPS_ALG = 1e-9
REPAIR_LIMIT = 1e-6
MIN_DIMENSION = 2
MAX_DIMENSION = 8
ARCCOSH_SPLIT = 1.25
OVERFLOW_T = 700.0


class GeometryError(Exception):
    """Base exception for hyperbolic geometry errors."""

    pass


class UsageError(GeometryError, ValueError):
    """Raised for invalid arguments: dimension mismatch, bad axis, bad ranges."""

    pass


class DegenerateInputError(GeometryError, ValueError):
    """Raised when an operation needs distinct points and gets coincident ones."""

    pass


class DomainError(GeometryError, ArithmeticError):
    """Raised when a value falls outside the double-precision regime."""

    pass


def check_dimension(n: int) -> int:
    if not MIN_DIMENSION <= int(n) <= MAX_DIMENSION:
        raise UsageError(
            f"Dimension n must lie in [{MIN_DIMENSION}, {MAX_DIMENSION}], got {n}."
        )
    return int(n)


def _frozen(values, ndim: int) -> np.ndarray:
    array = np.array(values, dtype=float)
    if array.ndim != ndim:
        raise UsageError(f"Expected a {ndim}-d array, got shape {array.shape}.")
    if not np.all(np.isfinite(array)):
        raise UsageError("Coordinates must be finite.")
    array.setflags(write=False)
    return array


@dataclass(frozen=True, eq=False)
class MinkowskiVector:
    """An (n+1)-tuple of reals carrying the signature (n,1) form."""

    coords: np.ndarray

    def __post_init__(self):
        coords = _frozen(self.coords, 1)
        if coords.shape[0] < MIN_DIMENSION + 1:
            raise UsageError(
                f"Minkowski vectors need at least {MIN_DIMENSION + 1} coordinates."
            )
        object.__setattr__(self, "coords", coords)

    @property
    def n(self) -> int:
        return self.coords.shape[0] - 1

    def __len__(self) -> int:
        return self.coords.shape[0]

    def __getitem__(self, index):
        return self.coords[index]

    def __neg__(self) -> "MinkowskiVector":
        return MinkowskiVector(-self.coords)

    def __repr__(self) -> str:
        return f"MinkowskiVector({self.coords.tolist()})"


VectorLike = Union[MinkowskiVector, "HyperbolicPoint", np.ndarray]


def _coords(value) -> np.ndarray:
    if isinstance(value, (MinkowskiVector, HyperbolicPoint)):
        return value.coords
    if hasattr(value, "vector"):
        return value.vector.coords
    return np.asarray(value, dtype=float)


def _lift_time(coords: np.ndarray) -> np.ndarray:
    """Recomputes x0 = sqrt(1 + |x_s|^2) so the point sits exactly on the sheet."""
    lifted = np.array(coords, dtype=float)
    lifted[0] = np.hypot(1.0, np.linalg.norm(lifted[1:]))
    return lifted


@dataclass(frozen=True, eq=False)
class HyperbolicPoint:
    """A point of the upper sheet <x,x> = -1, x0 > 0."""

    vector: MinkowskiVector

    def __post_init__(self):
        x = self.vector.coords
        scale = max(1.0, abs(float(x[0])))
        scaled = x / scale
        defect = abs(minkowski_inner(scaled, scaled) + 1.0 / scale**2)
        if defect > EPS_ALG:
            raise UsageError(f"Point is off the hyperboloid (defect {defect:.3e}).")
        if x[0] < 1.0 - EPS_ALG:
            raise UsageError("Point is not on the upper sheet (x0 < 1).")

    @classmethod
    def from_coords(cls, coords, renormalize: bool = False) -> "HyperbolicPoint":
        values = np.asarray(coords, dtype=float)
        if renormalize:
            values = _lift_time(values)
        return cls(MinkowskiVector(values))

    @property
    def coords(self) -> np.ndarray:
        return self.vector.coords

    @property
    def n(self) -> int:
        return self.vector.n

    def __repr__(self) -> str:
        return f"HyperbolicPoint({self.coords.tolist()})"


def basepoint(n: int) -> HyperbolicPoint:
    """The basepoint o = (1, 0, ..., 0)."""
    coords = np.zeros(check_dimension(n) + 1)
    coords[0] = 1.0
    return HyperbolicPoint.from_coords(coords)


def minkowski_form(n: int) -> np.ndarray:
    """J = diag(-1, 1, ..., 1)."""
    form = np.eye(n + 1)
    form[0, 0] = -1.0
    return form


def minkowski_inner(x: VectorLike, y: VectorLike) -> float:
    """<x, y> = -x0*y0 + sum_i xi*yi."""
    a, b = _coords(x), _coords(y)
    if a.shape != b.shape:
        raise UsageError(f"Dimension mismatch: {a.shape} vs {b.shape}.")
    return float(-a[0] * b[0] + np.dot(a[1:], b[1:]))


def minkowski_inner_many(X: np.ndarray, y: np.ndarray) -> np.ndarray:
    """Row-wise <X_k, y> for an (m, n+1) array of vectors."""
    return -X[..., 0] * y[0] + X[..., 1:] @ y[1:]


def stable_arccosh(z: float, w: Optional[float] = None) -> float:
    """
    arccosh(z) for z >= 1, clamping roundoff below 1.

    Near 1 the log1p branch is used with w = z - 1; callers that can compute w
    without cancellation (e.g. from a chord) pass it in.
    """
    z = max(float(z), 1.0)
    if z >= ARCCOSH_SPLIT:
        return float(np.log(z + np.sqrt(z - 1.0) * np.sqrt(z + 1.0)))
    w = max(float(z - 1.0 if w is None else w), 0.0)
    return float(np.log1p(w + np.sqrt(2.0 * w + w * w)))


def hyperbolic_distance(x: HyperbolicPoint, y: HyperbolicPoint) -> float:
    """d(x, y) = arccosh(-<x, y>), evaluated stably."""
    a, b = _coords(x), _coords(y)
    z = -minkowski_inner(a, b)
    if z >= ARCCOSH_SPLIT:
        return stable_arccosh(z)
    # <x-y, x-y> = -2 - 2<x,y> = 2(z - 1) on the sheet
    chord = a - b
    w = 0.5 * minkowski_inner(chord, chord)
    return stable_arccosh(z, w)


def _scaled_defect(matrix: np.ndarray) -> float:
    scale = max(1.0, float(np.max(np.abs(matrix))))
    form = minkowski_form(matrix.shape[0] - 1)
    scaled = matrix / scale
    return float(np.max(np.abs(scaled.T @ form @ scaled - form / scale**2)))


def _max_abs(matrix: np.ndarray) -> float:
    return float(np.max(np.abs(matrix)))


def _gram_schmidt(matrix: np.ndarray) -> np.ndarray:
    """One Minkowski Gram-Schmidt pass over the columns (column 0 timelike)."""
    columns = np.array(matrix, dtype=float)
    signs = np.ones(columns.shape[1])
    signs[0] = -1.0
    for k in range(columns.shape[1]):
        for j in range(k):
            coefficient = minkowski_inner(columns[:, k], columns[:, j]) * signs[j]
            columns[:, k] -= coefficient * columns[:, j]
        norm_sq = signs[k] * minkowski_inner(columns[:, k], columns[:, k])
        if norm_sq <= 0.0:
            raise UsageError("Columns are not Minkowski-orthonormalizable.")
        columns[:, k] /= np.sqrt(norm_sq)
    return columns


class LorentzTransform:
    """An orthochronous Lorentz matrix acting on points and walls."""

    __slots__ = ("_matrix", "defect")

    def __init__(self, matrix, conditioning: float = 1.0):
        """`conditioning` is the roundoff growth the matrix was built with; the
        scaled defect is measured in units of it before the repair thresholds."""
        values = _frozen(matrix, 2)
        if values.shape[0] != values.shape[1] or values.shape[0] < MIN_DIMENSION + 1:
            raise UsageError(f"Expected a square (n+1)x(n+1) matrix, got {values.shape}.")
        if not conditioning >= 1.0:
            raise UsageError(f"conditioning must be >= 1, got {conditioning}.")

        defect = _scaled_defect(values) / conditioning
        if defect > REPAIR_LIMIT:
            raise UsageError(f"Matrix does not preserve the Minkowski form (defect {defect:.3e}).")
        if defect > EPS_ALG / 10:
            logger.warning("Re-orthonormalizing transform with defect %.3e.", defect)
            values = _frozen(_gram_schmidt(values), 2)
            defect = _scaled_defect(values) / conditioning
            if defect > EPS_ALG:
                raise UsageError(f"Transform defect {defect:.3e} remains after repair.")
        if values[0, 0] <= 0.0:
            raise UsageError("Transform is not orthochronous (entry [0,0] <= 0).")

        object.__setattr__(self, "_matrix", values)
        object.__setattr__(self, "defect", defect)

    def __setattr__(self, name, value):
        raise AttributeError("LorentzTransform is immutable.")

    @property
    def matrix(self) -> np.ndarray:
        return self._matrix

    @property
    def n(self) -> int:
        return self._matrix.shape[0] - 1

    @classmethod
    def identity(cls, n: int) -> "LorentzTransform":
        return cls(np.eye(check_dimension(n) + 1))

    def __matmul__(self, other: "LorentzTransform") -> "LorentzTransform":
        if not isinstance(other, LorentzTransform):
            return NotImplemented
        if other.n != self.n:
            raise UsageError(f"Dimension mismatch: {self.n} vs {other.n}.")
        product = self._matrix @ other._matrix
        # entries of size |A||B| may cancel down to |AB|
        growth = _max_abs(self._matrix) * _max_abs(other._matrix) / max(1.0, _max_abs(product))
        return LorentzTransform(product, conditioning=max(1.0, growth))

    def inverse(self) -> "LorentzTransform":
        """Lambda^{-1} = J Lambda^T J."""
        form = minkowski_form(self.n)
        return LorentzTransform(form @ self._matrix.T @ form)

    def __repr__(self) -> str:
        return f"LorentzTransform(n={self.n}, defect={self.defect:.2e})"


def boost(t: float, axis: int, n: int) -> LorentzTransform:
    """The one-parameter boost a_t along spatial axis `axis`."""
    n = check_dimension(n)
    if not 1 <= int(axis) <= n:
        raise UsageError(f"Boost axis must lie in [1, {n}], got {axis}.")
    if abs(t) > OVERFLOW_T:
        raise DomainError(f"Boost parameter |t| = {abs(t)} exceeds {OVERFLOW_T}.")
    matrix = np.eye(n + 1)
    matrix[0, 0] = matrix[axis, axis] = np.cosh(t)
    matrix[0, axis] = matrix[axis, 0] = np.sinh(t)
    return LorentzTransform(matrix)


def rotation(spatial: np.ndarray) -> LorentzTransform:
    """Embeds an SO(n) matrix as the block diag(1, Q)."""
    spatial = np.asarray(spatial, dtype=float)
    n = spatial.shape[0]
    matrix = np.eye(n + 1)
    matrix[1:, 1:] = spatial
    return LorentzTransform(matrix)


def random_rotation_matrix(rng: np.random.Generator, n: int) -> np.ndarray:
    """Haar-random SO(n) matrix from an orthogonalized Gaussian matrix."""
    q, r = np.linalg.qr(rng.standard_normal((n, n)))
    q = q * np.sign(np.diag(r))
    if np.linalg.det(q) < 0:
        q[:, 0] = -q[:, 0]
    return q


def random_rotation(rng: np.random.Generator, n: int) -> LorentzTransform:
    return rotation(random_rotation_matrix(rng, check_dimension(n)))


def random_lorentz(
    rng: np.random.Generator, n: int, t_range: Tuple[float, float] = (-3.0, 3.0)
) -> LorentzTransform:
    """R1 * boost(t, 1) * R2 with Haar rotations and t uniform on t_range."""
    n = check_dimension(n)
    first = random_rotation(rng, n)
    t = rng.uniform(*t_range)
    second = random_rotation(rng, n)
    return first @ boost(t, 1, n) @ second


def random_point(
    rng: np.random.Generator, n: int, max_radius: float = 2.0
) -> HyperbolicPoint:
    """Point at a uniform distance in [0, max_radius] from o in a uniform direction."""
    n = check_dimension(n)
    direction = rng.standard_normal(n)
    direction /= np.linalg.norm(direction)
    radius = rng.uniform(0.0, max_radius)
    return HyperbolicPoint.from_coords(
        np.concatenate([[np.cosh(radius)], np.sinh(radius) * direction]),
        renormalize=True,
    )


def apply_point(g: LorentzTransform, x: HyperbolicPoint) -> HyperbolicPoint:
    """g.x, renormalized onto the sheet."""
    if g.n != x.n:
        raise UsageError(f"Dimension mismatch: transform {g.n} vs point {x.n}.")
    return HyperbolicPoint.from_coords(g.matrix @ x.coords, renormalize=True)


def translation_to(p: HyperbolicPoint) -> LorentzTransform:
    """The pure boost taking o to p."""
    x0, spatial = p.coords[0], p.coords[1:]
    n = p.n
    matrix = np.empty((n + 1, n + 1))
    matrix[0, 0] = x0
    matrix[0, 1:] = spatial
    matrix[1:, 0] = spatial
    matrix[1:, 1:] = np.eye(n) + np.outer(spatial, spatial) / (1.0 + x0)
    return LorentzTransform(matrix)


def geodesic_point(x: HyperbolicPoint, y: HyperbolicPoint, s: float) -> HyperbolicPoint:
    """The point at arclength s*d(x,y) from x on the geodesic towards y."""
    distance = hyperbolic_distance(x, y)
    if distance <= EPS_ALG:
        raise DegenerateInputError("Geodesic between coincident points is undefined.")
    if s == 0.0:
        return x
    if s == 1.0:
        return y

    a, b = x.coords, y.coords
    tangent = b + minkowski_inner(a, b) * a
    norm = np.sqrt(max(minkowski_inner(tangent, tangent), 0.0))
    if norm == 0.0:
        raise DegenerateInputError("Geodesic tangent vanished.")
    sigma = s * distance
    return HyperbolicPoint.from_coords(
        np.cosh(sigma) * a + np.sinh(sigma) * (tangent / norm), renormalize=True
    )
