# src/cnk_kernel.py

"""
Conditionally negative kernels from the hyperbolic distance.

A symmetric matrix D is conditionally negative on a sample when
sum_ij lam_i lam_j D_ij <= 0 for every lam with sum_i lam_i = 0. The defect below
turns that quantified statement into one number: the largest eigenvalue of D
restricted to the sum-zero hyperplane.
"""

import logging
import math
from dataclasses import dataclass
from typing import Dict, List, NamedTuple, Optional, Sequence, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict
from scipy.linalg import helmert

from crofton_verifier import (
    ABSOLUTE_ERROR_FLOOR,
    DEFAULT_T_VALUES,
    PASS_SIGMA,
    QUADRATURE_REL_ERROR,
    STRICT_SIGMA,
    CroftonReport,
    estimate_c,
    make_row,
    summarize_rows,
)
from data_validation import IntegrationConfig, ReportRow, SuiteSummary
from hyperbolic.lorentz_core import (
    OVERFLOW_T,
    DomainError,
    HyperbolicPoint,
    LorentzTransform,
    UsageError,
    apply_point,
    basepoint,
    boost,
    check_dimension,
    hyperbolic_distance,
    random_lorentz,
    random_point,
)
from utils.config import progress_bar
from utils.rng import derive_seed, substream
from wall_measure import gram_matrix, measure_embedding_norm

logger = logging.getLogger(__name__)

EPS_CNK_REL = 1e-8
PROBE_SLACK = 1e-10
DEFAULT_PROBES = 10_000
SYMMETRY_TOL = 1e-12
LEFT_INVARIANCE_TOL = 1e-8
UNBOUNDED_REL_TOL = 1e-12
LAMBDA_SUM_TOL = 1e-12
MAX_SET_POINTS = 64

# suite tags mixed into derived seeds
CNK_INPUTS, PROBES, HILBERT, GRAM = 11, 12, 13, 14

POINT_RADIUS = 2.0
HILBERT_POINT_RADIUS = 1.0
TRANSFORM_T_RANGE = (-3.0, 3.0)


@dataclass(frozen=True, eq=False)
class KernelMatrix:
    """A symmetric m x m kernel matrix; distance kernels also have a zero diagonal."""

    values: np.ndarray
    distance: bool = True

    def __post_init__(self):
        values = np.array(self.values, dtype=float)
        if values.ndim != 2 or values.shape[0] != values.shape[1]:
            raise UsageError(f"Kernel matrix must be square, got shape {values.shape}.")
        if not np.all(np.isfinite(values)):
            raise UsageError("Kernel matrix entries must be finite.")
        scale = max(1.0, float(np.max(np.abs(values), initial=0.0)))
        if np.max(np.abs(values - values.T), initial=0.0) > SYMMETRY_TOL * scale:
            raise UsageError("Kernel matrix is not symmetric.")
        if self.distance and (np.any(np.diag(values) != 0.0) or np.any(values < 0.0)):
            raise UsageError("Distance kernels need a zero diagonal and nonnegative entries.")
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    @property
    def size(self) -> int:
        return self.values.shape[0]

    @property
    def max_abs(self) -> float:
        return float(np.max(np.abs(self.values), initial=0.0))


@dataclass(frozen=True, eq=False)
class GroupElementSample:
    """A finite sample of SO(n,1) acting on the basepoint o."""

    transforms: Tuple[LorentzTransform, ...]

    def __post_init__(self):
        transforms = tuple(self.transforms)
        if not transforms:
            raise UsageError("A group sample needs at least one transform.")
        if any(not isinstance(g, LorentzTransform) for g in transforms):
            raise UsageError("Group samples hold LorentzTransform values only.")
        if len({g.n for g in transforms}) != 1:
            raise UsageError("All transforms of a sample must share one dimension.")
        object.__setattr__(self, "transforms", transforms)

    @property
    def n(self) -> int:
        return self.transforms[0].n

    @property
    def basepoint(self) -> HyperbolicPoint:
        return basepoint(self.n)


def _matrix(D) -> np.ndarray:
    return D.values if isinstance(D, KernelMatrix) else np.asarray(D, dtype=float)


def cnk_defect(D) -> float:
    """max of lam^T D lam over unit lam with sum(lam) = 0."""
    values = _matrix(D)
    m = values.shape[0]
    if m < 2:
        raise UsageError("The CNK defect needs at least two points.")
    # rows of the Helmert matrix: orthonormal basis of the sum-zero hyperplane
    basis = helmert(m).T
    projected = basis.T @ values @ basis
    return float(np.linalg.eigvalsh((projected + projected.T) / 2.0)[-1])


def cnk_tolerance(D) -> float:
    return EPS_CNK_REL * float(np.max(np.abs(_matrix(D)), initial=0.0))


def random_probe_defect(
    D, rng: np.random.Generator, probes: int = DEFAULT_PROBES
) -> float:
    """Largest lam^T D lam over random unit mean-zero lam; never above cnk_defect."""
    values = _matrix(D)
    lam = rng.standard_normal((probes, values.shape[0]))
    lam -= lam.mean(axis=1, keepdims=True)
    lam /= np.linalg.norm(lam, axis=1, keepdims=True)
    return float(np.max(np.einsum("ki,ij,kj->k", lam, values, lam)))


def distance_matrix(points: Sequence[HyperbolicPoint]) -> KernelMatrix:
    m = len(points)
    values = np.zeros((m, m))
    for i in range(m):
        for j in range(i + 1, m):
            values[i, j] = values[j, i] = hyperbolic_distance(points[i], points[j])
    return KernelMatrix(values)


def _bound_row(
    suite: str,
    case: str,
    observed: float,
    expected: float,
    tolerance: float,
    two_sided: bool = False,
    details: Optional[Dict] = None,
) -> ReportRow:
    """Deterministic row: passes when (|)observed - expected(|) <= tolerance."""
    deviation = float(observed - expected)
    passed = (abs(deviation) if two_sided else deviation) <= tolerance
    return ReportRow(
        suite=suite,
        case=case,
        observed=float(observed),
        expected=float(expected),
        deviation=deviation,
        tolerance=float(tolerance),
        passed=passed,
        strict_passed=passed,
        details=details or {},
    )


def _cnk_rows(
    suite: str, case: str, D: KernelMatrix, rng: Optional[np.random.Generator], probes: int
) -> List[ReportRow]:
    defect = cnk_defect(D)
    tolerance = cnk_tolerance(D)
    details = {"points": D.size, "max_entry": D.max_abs}
    rows = [_bound_row(suite, f"{case} defect", defect, 0.0, tolerance, details=details)]
    if rng is not None:
        probe = random_probe_defect(D, rng, probes)
        rows.append(
            _bound_row(suite, f"{case} random probes", probe, defect, PROBE_SLACK,
                       details={"probes": probes})
        )
    logger.debug("%s %s: defect %.3e (tolerance %.3e).", suite, case, defect, tolerance)
    return rows


def set_cnk_suite(
    points: Sequence[HyperbolicPoint],
    rng: Optional[np.random.Generator] = None,
    probes: int = DEFAULT_PROBES,
    case: str = "configuration",
) -> List[ReportRow]:
    """CNK defect of the pairwise distance matrix, cross-checked by random probes when rng is given."""
    if not 2 <= len(points) <= MAX_SET_POINTS:
        raise UsageError(f"set_cnk_suite takes 2 to {MAX_SET_POINTS} points, got {len(points)}.")
    return _cnk_rows("set-cnk", case, distance_matrix(points), rng, probes)


def psi(g: LorentzTransform) -> float:
    """psi(g) = d(o, g o)."""
    o = basepoint(g.n)
    return hyperbolic_distance(o, apply_point(g, o))


def group_kernel(g: LorentzTransform, h: LorentzTransform) -> float:
    """K(g, h) = d(g o, h o)."""
    if g.n != h.n:
        raise UsageError(f"Dimension mismatch: {g.n} vs {h.n}.")
    o = basepoint(g.n)
    return hyperbolic_distance(apply_point(g, o), apply_point(h, o))


def group_kernel_matrix(sample: GroupElementSample) -> KernelMatrix:
    o = sample.basepoint
    return distance_matrix([apply_point(g, o) for g in sample.transforms])


def group_cnk_suite(
    sample: GroupElementSample,
    rng: Optional[np.random.Generator] = None,
    probes: int = DEFAULT_PROBES,
    case: str = "group sample",
) -> List[ReportRow]:
    if len(sample.transforms) < 2:
        raise UsageError("group_cnk_suite needs at least two transforms.")
    return _cnk_rows("group-cnk", case, group_kernel_matrix(sample), rng, probes)


def check_left_invariance(
    g: LorentzTransform, h: LorentzTransform, k: LorentzTransform
) -> float:
    """|K(gh, gk) - K(h, k)|."""
    return abs(group_kernel(g @ h, g @ k) - group_kernel(h, k))


def unboundedness_sweep(t_values: Sequence[float], n: int = 2) -> List[ReportRow]:
    """
    Rows (t, K(a_t, e)) checking K(a_t, e) = |t| and strict growth in |t|.

    |t| beyond OVERFLOW_T is outside double precision (cosh t overflows) and
    raises DomainError.
    """
    n = check_dimension(n)
    t_values = [float(t) for t in t_values]
    if not t_values:
        raise UsageError("unboundedness_sweep needs at least one t value.")
    beyond = [t for t in t_values if abs(t) > OVERFLOW_T]
    if beyond:
        raise DomainError(
            f"|t| = {abs(beyond[0])} exceeds the double-precision limit {OVERFLOW_T}."
        )

    identity = LorentzTransform.identity(n)
    kernel = [group_kernel(boost(t, 1, n), identity) for t in t_values]
    rows = [
        _bound_row(
            "unboundedness",
            f"t={t:.6g}",
            value,
            abs(t),
            UNBOUNDED_REL_TOL * abs(t),
            two_sided=True,
            details={"t": t},
        )
        for t, value in zip(t_values, kernel)
    ]

    ordered = sorted(zip((abs(t) for t in t_values), kernel))
    violations = sum(
        1
        for (a, k_a), (b, k_b) in zip(ordered, ordered[1:])
        if b > a and not k_b > k_a
    )
    rows.append(
        _bound_row(
            "unboundedness",
            "strictly increasing in |t|",
            violations,
            0.0,
            0.0,
            details={"max_t": ordered[-1][0], "max_kernel": ordered[-1][1]},
        )
    )
    return rows


class HilbertIdentityResult(NamedTuple):
    lhs: float
    rhs: float
    combined_error: float
    passed: bool


def _gromov_products(points: Sequence[HyperbolicPoint], base: HyperbolicPoint) -> np.ndarray:
    """(d(x_i, base) + d(x_j, base) - d(x_i, x_j)) / 2."""
    to_base = np.array([hyperbolic_distance(p, base) for p in points])
    return (to_base[:, None] + to_base[None, :] - distance_matrix(points).values) / 2.0


def hilbert_identity_check(
    points: Sequence[HyperbolicPoint],
    lam: Sequence[float],
    cfg: IntegrationConfig,
    c_hat: float,
    c_stderr: float = 0.0,
) -> HilbertIdentityResult:
    """
    sum_ij lam_i lam_j c d(x_i, x_j) against -2 ||sum_i lam_i Phi(x_i)||^2.

    The right-hand side is measured directly on walls; the left-hand side uses
    the fitted constant c_hat.
    """
    lam = np.asarray(lam, dtype=float)
    if lam.shape != (len(points),):
        raise UsageError(f"Expected {len(points)} coefficients, got shape {lam.shape}.")
    if abs(lam.sum()) > LAMBDA_SUM_TOL * max(1.0, float(np.abs(lam).sum())):
        raise UsageError("Coefficients must sum to zero.")

    quadratic_form = float(lam @ distance_matrix(points).values @ lam)
    lhs = c_hat * quadratic_form
    lhs_error = abs(quadratic_form) * c_stderr

    o = basepoint(points[0].n)
    norm = measure_embedding_norm(points, lam, o, cfg)
    rhs = -2.0 * norm.value
    if norm.method == "quadrature":
        # lam^T G lam cancels; bound its error through the entries of G
        magnitude = np.abs(lam) @ _gromov_products(points, o) @ np.abs(lam)
        rhs_error = 2.0 * max(norm.stderr, QUADRATURE_REL_ERROR * c_hat * magnitude)
    else:
        rhs_error = 2.0 * norm.stderr

    combined = math.hypot(lhs_error, rhs_error)
    passed = abs(lhs - rhs) <= PASS_SIGMA * max(combined, ABSOLUTE_ERROR_FLOOR)
    logger.debug("Hilbert identity: lhs %.8g, rhs %.8g, error %.3g.", lhs, rhs, combined)
    return HilbertIdentityResult(lhs, rhs, combined, passed)


def check_gram_consistency(
    points: Sequence[HyperbolicPoint],
    cfg: IntegrationConfig,
    c_hat: float,
    c_stderr: float = 0.0,
) -> List[ReportRow]:
    """G_ij = mu(S_i & S_j) against c_hat times the Gromov product of x_i, x_j at o."""
    o = basepoint(points[0].n)
    gram, gram_stderr = gram_matrix(points, o, cfg)
    gromov = _gromov_products(points, o)
    rows = []
    for i in range(len(points)):
        for j in range(i, len(points)):
            # zero stderr means a quadrature entry, accurate relative to the sets' own size
            entry_error = gram_stderr[i, j] or QUADRATURE_REL_ERROR * math.sqrt(
                gram[i, i] * gram[j, j]
            )
            sigma = math.hypot(entry_error, gromov[i, j] * c_stderr)
            rows.append(
                make_row(
                    "gram",
                    f"G[{i},{j}]",
                    gram[i, j],
                    c_hat * gromov[i, j],
                    sigma,
                    details={"gromov_product": float(gromov[i, j])},
                )
            )
    return rows


class CnkReport(BaseModel):
    model_config = ConfigDict(frozen=True)

    n: int
    c_hat: float
    defect_max: float
    rows: List[ReportRow]
    summaries: List[SuiteSummary]
    passed: bool


def default_sweep(t_max: float) -> List[float]:
    """0 followed by a logarithmic grid from 0.01 up to t_max."""
    if t_max > OVERFLOW_T:
        raise DomainError(f"t-max {t_max} exceeds the double-precision limit {OVERFLOW_T}.")
    return [0.0] + np.geomspace(0.01, t_max, 16).tolist()


def run_cnk_suites(
    n: int,
    cfg: IntegrationConfig,
    points: int = 8,
    configurations: int = 200,
    transforms: int = 10,
    t_max: float = 300.0,
    t_grid: Optional[Sequence[float]] = None,
    crofton: Optional[CroftonReport] = None,
    hilbert_instances: int = 20,
    triples: int = 1000,
    probes: int = DEFAULT_PROBES,
    progress: Optional[bool] = None,
) -> CnkReport:
    """
    Set and group CNK defects, left invariance, unboundedness, the Hilbert identity
    and Gram consistency, on inputs drawn from cfg.seed.

    Without a CroftonReport, c(n) is estimated first on the default t values.
    """
    n = check_dimension(n)
    if not 2 <= points <= MAX_SET_POINTS:
        raise UsageError(f"points must lie in [2, {MAX_SET_POINTS}], got {points}.")
    sweep = list(t_grid) if t_grid else default_sweep(t_max)
    sweep_rows = unboundedness_sweep(sweep, n)

    rng = substream(cfg.seed, CNK_INPUTS)
    set_rows = []
    for k in progress_bar(range(configurations), "set-cnk", progress):
        sample = [random_point(rng, n, POINT_RADIUS) for _ in range(points)]
        set_rows.extend(
            set_cnk_suite(sample, substream(cfg.seed, PROBES, k), probes, f"configuration {k}")
        )

    group = GroupElementSample(
        tuple(random_lorentz(rng, n, TRANSFORM_T_RANGE) for _ in range(max(points, transforms)))
    )
    group_rows = group_cnk_suite(group, substream(cfg.seed, PROBES, configurations), probes)

    invariance_rows = []
    for index in range(triples):
        g, h, k = (random_lorentz(rng, n, TRANSFORM_T_RANGE) for _ in range(3))
        invariance_rows.append(
            _bound_row("left-invariance", f"triple {index}", check_left_invariance(g, h, k),
                       0.0, LEFT_INVARIANCE_TOL)
        )

    if crofton is None:
        crofton = estimate_c(n, DEFAULT_T_VALUES, cfg)
    c_hat, c_stderr = crofton.c_hat, crofton.c_stderr

    hilbert_rows = []
    for k in progress_bar(range(hilbert_instances), "hilbert", progress):
        sample = [random_point(rng, n, HILBERT_POINT_RADIUS) for _ in range(5)]
        lam = rng.standard_normal(len(sample))
        lam -= lam.mean()
        instance_cfg = cfg.model_copy(update={"seed": derive_seed(cfg.seed, HILBERT, k)})
        result = hilbert_identity_check(sample, lam, instance_cfg, c_hat, c_stderr)
        sigma = max(result.combined_error, ABSOLUTE_ERROR_FLOOR)
        hilbert_rows.append(
            ReportRow(
                suite="hilbert",
                case=f"instance {k}",
                observed=result.rhs,
                expected=result.lhs,
                deviation=result.rhs - result.lhs,
                tolerance=PASS_SIGMA * sigma,
                stderr=sigma,
                passed=result.passed,
                strict_passed=abs(result.rhs - result.lhs) <= STRICT_SIGMA * sigma,
            )
        )

    gram_sample = [random_point(rng, n, HILBERT_POINT_RADIUS) for _ in range(4)]
    gram_cfg = cfg.model_copy(update={"seed": derive_seed(cfg.seed, GRAM)})
    gram_rows = check_gram_consistency(gram_sample, gram_cfg, c_hat, c_stderr)

    summaries = [
        summarize_rows(set_rows, "set-cnk", pass_fraction=1.0),
        summarize_rows(group_rows, "group-cnk", pass_fraction=1.0),
        summarize_rows(invariance_rows, "left-invariance", pass_fraction=1.0),
        summarize_rows(sweep_rows, "unboundedness", pass_fraction=1.0),
        summarize_rows(hilbert_rows, "hilbert"),
        summarize_rows(gram_rows, "gram"),
    ]
    defects = [row.observed for row in set_rows + group_rows if row.case.endswith("defect")]
    return CnkReport(
        n=n,
        c_hat=c_hat,
        defect_max=max(defects),
        rows=set_rows + group_rows + invariance_rows + sweep_rows + hilbert_rows + gram_rows,
        summaries=summaries,
        passed=all(summary.passed for summary in summaries),
    )
