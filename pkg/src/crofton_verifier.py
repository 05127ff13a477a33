# src/crofton_verifier.py

"""
Numerical checks that the separating-wall measure F(x, y) is an invariant,
additive, linear function of the distance, and estimation of the constant c(n)
in F(x, y) = c(n) d(x, y).
"""

import logging
import math
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, model_validator
from data_validation import IntegrationConfig, MeasureEstimate, ReportRow, SuiteSummary
from hyperbolic.lorentz_core import (
    HyperbolicPoint,
    LorentzTransform,
    UsageError,
    apply_point,
    basepoint,
    boost,
    check_dimension,
    geodesic_point,
    random_lorentz,
    random_point,
)
from utils.config import progress_bar
from utils.rng import derive_seed, substream
from wall_measure import measure_separating

logger = logging.getLogger(__name__)

# Quadrature estimates carry no stderr; their assumed relative accuracy
QUADRATURE_REL_ERROR = 1e-3
ABSOLUTE_ERROR_FLOOR = 1e-12

PASS_SIGMA = 3.0
STRICT_SIGMA = 5.0
PASS_FRACTION = 0.95
REDUCED_CHI2_LIMIT = 2.0

MIN_T_VALUES = 4
MIN_T_SPAN = 8.0
DEFAULT_T_VALUES = (0.25, 0.5, 1.0, 2.0, 4.0)
DEFAULT_SCALE_T_VALUES = (0.5, 1.0, 2.0)

# suite tags mixed into derived seeds
INVARIANCE, ADDITIVITY, LINEARITY, SCALE, SUITE_INPUTS = 1, 2, 3, 4, 5

# random inputs stay within distance ~3.5 of o, where the default quadrature is resolved
POINT_RADIUS = 1.5
TRANSFORM_T_RANGE = (-2.0, 2.0)
ADDITIVITY_S_RANGE = (0.05, 0.95)


class CroftonReport(BaseModel):
    """Fitted c(n) with its fit diagnostics and every checked row."""

    model_config = ConfigDict(frozen=True)

    n: int
    c_hat: float
    c_stderr: float
    halfwidth: float
    intercept: float
    intercept_stderr: float
    reduced_chi2: float
    rows: List[ReportRow]
    summaries: List[SuiteSummary]
    passed: bool

    @model_validator(mode="after")
    def check_positive_slope(self):
        if self.passed and not self.c_hat > 0:
            raise ValueError("A passing report must have c_hat > 0.")
        return self


def error_bar(estimate: MeasureEstimate) -> float:
    """stderr for Monte Carlo; the assumed relative accuracy for quadrature."""
    if estimate.method == "quadrature":
        return max(estimate.stderr, QUADRATURE_REL_ERROR * estimate.value)
    return estimate.stderr


def make_row(
    suite: str,
    case: str,
    observed: float,
    expected: float,
    sigma: float,
    estimates: Sequence[MeasureEstimate] = (),
    details: Optional[Dict] = None,
) -> ReportRow:
    """A row passing at PASS_SIGMA, with the PASS_SIGMA / STRICT_SIGMA verdicts recorded."""
    sigma = max(float(sigma), ABSOLUTE_ERROR_FLOOR)
    deviation = float(observed - expected)
    methods = sorted({e.method for e in estimates})
    return ReportRow(
        suite=suite,
        case=case,
        observed=float(observed),
        expected=float(expected),
        deviation=deviation,
        tolerance=PASS_SIGMA * sigma,
        stderr=sigma,
        passed=abs(deviation) <= PASS_SIGMA * sigma,
        strict_passed=abs(deviation) <= STRICT_SIGMA * sigma,
        method="+".join(methods) if methods else None,
        samples=sum(e.samples for e in estimates) if estimates else None,
        details=details or {},
    )


def _with_seed(cfg: IntegrationConfig, *keys: int, **updates) -> IntegrationConfig:
    return cfg.model_copy(update={"seed": derive_seed(cfg.seed, *keys), **updates})


def check_invariance(
    pairs: Sequence[Tuple[HyperbolicPoint, HyperbolicPoint]],
    transforms: Sequence[LorentzTransform],
    cfg: IntegrationConfig,
    progress: Optional[bool] = None,
) -> List[ReportRow]:
    """
    F(gx, gy) against F(x, y) for every (pair, g).

    Both sides are integrated in the chart about o without reducing the pair, with
    the same row seed, so that they sample the measure at genuinely different walls.
    """
    if not pairs or not transforms:
        raise UsageError("check_invariance needs at least one pair and one transform.")
    rows = []
    cases = [(i, k) for i in range(len(pairs)) for k in range(len(transforms))]
    for i, k in progress_bar(cases, "invariance", progress):
        (x, y), g = pairs[i], transforms[k]
        row_cfg = _with_seed(cfg, INVARIANCE, i, k, canonicalize=False)
        before = measure_separating(x, y, row_cfg)
        after = measure_separating(apply_point(g, x), apply_point(g, y), row_cfg)
        rows.append(
            make_row(
                "invariance",
                f"pair {i}, transform {k}",
                after.value,
                before.value,
                math.hypot(error_bar(before), error_bar(after)),
                (before, after),
                {"pair": i, "transform": k, "stderr_before": before.stderr,
                 "stderr_after": after.stderr},
            )
        )
    return rows


def check_additivity(
    x: HyperbolicPoint,
    y: HyperbolicPoint,
    s_values: Sequence[float],
    cfg: IntegrationConfig,
    row_key: int = 0,
) -> List[ReportRow]:
    """F(x, z) + F(z, y) against F(x, y) for z = geodesic_point(x, y, s)."""
    if any(not 0.0 < s < 1.0 for s in s_values):
        raise UsageError("Additivity parameters s must lie in (0, 1).")
    whole = measure_separating(x, y, _with_seed(cfg, ADDITIVITY, row_key, 0))
    rows = []
    for index, s in enumerate(s_values):
        z = geodesic_point(x, y, s)
        first = measure_separating(x, z, _with_seed(cfg, ADDITIVITY, row_key, index + 1, 1))
        second = measure_separating(z, y, _with_seed(cfg, ADDITIVITY, row_key, index + 1, 2))
        sigma = math.sqrt(error_bar(whole) ** 2 + error_bar(first) ** 2 + error_bar(second) ** 2)
        rows.append(
            make_row(
                "additivity",
                f"instance {row_key}, s={s:.6g}",
                first.value + second.value,
                whole.value,
                sigma,
                (whole, first, second),
                {"instance": row_key, "s": float(s), "F_xz": first.value,
                 "F_zy": second.value},
            )
        )
    return rows


def _validate_t_values(t_values: Sequence[float]) -> List[float]:
    t_values = [float(t) for t in t_values]
    if any(not math.isfinite(t) or t <= 0.0 for t in t_values):
        raise UsageError("t values must be finite and strictly positive.")
    distinct = sorted(set(t_values))
    if len(distinct) < MIN_T_VALUES:
        raise UsageError(f"estimate_c needs at least {MIN_T_VALUES} distinct t values.")
    if distinct[-1] / distinct[0] < MIN_T_SPAN:
        raise UsageError(f"t values must span at least a factor of {MIN_T_SPAN:g}.")
    return distinct


def separating_along_axis(t: float, n: int, cfg: IntegrationConfig) -> MeasureEstimate:
    """F(o, boost(t, 1) o)."""
    o = basepoint(n)
    return measure_separating(o, apply_point(boost(t, 1, n), o), cfg)


def estimate_c(
    n: int, t_values: Sequence[float], cfg: IntegrationConfig
) -> CroftonReport:
    """
    Fits F(o, boost(t, 1) o) = c t by weighted least squares through the origin.

    The report also carries the unconstrained affine fit, whose intercept must be
    within PASS_SIGMA standard errors of zero, and the reduced chi-square of the
    origin fit.
    """
    n = check_dimension(n)
    t = np.asarray(_validate_t_values(t_values))
    estimates = [
        separating_along_axis(value, n, _with_seed(cfg, LINEARITY, index))
        for index, value in enumerate(t)
    ]
    values = np.array([e.value for e in estimates])
    sigma = np.array([max(error_bar(e), ABSOLUTE_ERROR_FLOOR) for e in estimates])

    weights = 1.0 / sigma**2
    information = float(np.sum(weights * t**2))
    c_hat = float(np.sum(weights * t * values) / information)
    c_stderr = 1.0 / math.sqrt(information)
    residuals = (values - c_hat * t) / sigma
    reduced_chi2 = float(np.sum(residuals**2) / (len(t) - 1))

    (slope, intercept), covariance = np.polyfit(t, values, 1, w=1.0 / sigma, cov="unscaled")
    intercept_stderr = float(math.sqrt(covariance[1, 1]))
    logger.info(
        "n=%d: c_hat = %.6f +- %.2e (affine slope %.6f, intercept %.3e +- %.1e, chi2/dof %.3f).",
        n, c_hat, c_stderr, slope, intercept, intercept_stderr, reduced_chi2,
    )

    rows = [
        make_row(
            "linearity",
            f"t={value:.6g}",
            estimate.value / value,
            c_hat,
            error_bar(estimate) / value,
            (estimate,),
            {"t": float(value), "F": estimate.value, "F_stderr": estimate.stderr},
        )
        for value, estimate in zip(t, estimates)
    ]
    rows.append(
        make_row(
            "linearity",
            "affine intercept",
            float(intercept),
            0.0,
            intercept_stderr,
            estimates,
            {"slope": float(slope)},
        )
    )
    rows.append(
        ReportRow(
            suite="linearity",
            case="reduced chi-square",
            observed=reduced_chi2,
            expected=REDUCED_CHI2_LIMIT,
            deviation=reduced_chi2 - REDUCED_CHI2_LIMIT,
            tolerance=0.0,
            passed=reduced_chi2 <= REDUCED_CHI2_LIMIT,
            strict_passed=reduced_chi2 <= REDUCED_CHI2_LIMIT,
            details={"dof": len(t) - 1},
        )
    )
    lower = c_hat - PASS_SIGMA * c_stderr
    rows.append(
        ReportRow(
            suite="linearity",
            case="positivity",
            observed=c_hat,
            expected=0.0,
            deviation=lower,
            tolerance=PASS_SIGMA * c_stderr,
            stderr=c_stderr,
            passed=lower > 0.0,
            strict_passed=c_hat - STRICT_SIGMA * c_stderr > 0.0,
            details={"check": "c_hat - 3 stderr > 0"},
        )
    )

    summary = summarize_rows(rows, "linearity")
    fit_passed = all(row.passed for row in rows[len(t):])
    return CroftonReport(
        n=n,
        c_hat=c_hat,
        c_stderr=c_stderr,
        halfwidth=PASS_SIGMA * c_stderr,
        intercept=float(intercept),
        intercept_stderr=intercept_stderr,
        reduced_chi2=reduced_chi2,
        rows=rows,
        summaries=[summary],
        passed=summary.passed and fit_passed and c_hat > 0.0,
    )


def check_scale(
    n: int,
    cfg: IntegrationConfig,
    t_values: Sequence[float] = DEFAULT_SCALE_T_VALUES,
) -> List[ReportRow]:
    """F(2t) / F(t) against 2."""
    n = check_dimension(n)
    rows = []
    for index, t in enumerate(t_values):
        single = separating_along_axis(t, n, _with_seed(cfg, SCALE, index, 1))
        double = separating_along_axis(2.0 * t, n, _with_seed(cfg, SCALE, index, 2))
        if single.value <= 0.0:
            raise UsageError(f"F({t}) estimated as zero; increase the sample count.")
        ratio = double.value / single.value
        sigma = ratio * math.hypot(
            error_bar(single) / single.value,
            error_bar(double) / max(double.value, ABSOLUTE_ERROR_FLOOR),
        )
        rows.append(
            make_row(
                "scale",
                f"t={t:.6g}",
                ratio,
                2.0,
                sigma,
                (single, double),
                {"t": float(t), "F_t": single.value, "F_2t": double.value},
            )
        )
    return rows


def summarize_rows(
    rows: Sequence[ReportRow], suite: str, pass_fraction: float = PASS_FRACTION
) -> SuiteSummary:
    """A suite passes when at least `pass_fraction` of its rows pass and none fails at 5 sigma."""
    total = len(rows)
    passed_rows = sum(row.passed for row in rows)
    strict_failures = sum(row.strict_passed is False for row in rows)
    fraction = passed_rows / total if total else 0.0
    passed = total > 0 and fraction >= pass_fraction and strict_failures == 0
    level = logging.INFO if passed else logging.WARNING
    logger.log(
        level,
        "Suite %s: %d/%d rows passed, %d strict failures -> %s.",
        suite, passed_rows, total, strict_failures, "PASS" if passed else "FAIL",
    )
    return SuiteSummary(
        suite=suite,
        rows=total,
        passed_rows=passed_rows,
        pass_fraction=fraction,
        strict_failures=strict_failures,
        passed=passed,
    )


def random_pairs(
    rng: np.random.Generator, n: int, count: int
) -> List[Tuple[HyperbolicPoint, HyperbolicPoint]]:
    return [
        (random_point(rng, n, POINT_RADIUS), random_point(rng, n, POINT_RADIUS))
        for _ in range(count)
    ]


def run_crofton_suites(
    n: int,
    cfg: IntegrationConfig,
    t_values: Optional[Sequence[float]] = None,
    pairs: int = 10,
    transforms: int = 10,
    additivity_instances: int = 20,
    progress: Optional[bool] = None,
) -> CroftonReport:
    """Invariance, additivity, linearity and scale suites on inputs drawn from cfg.seed."""
    n = check_dimension(n)
    rng = substream(cfg.seed, SUITE_INPUTS)
    pair_list = random_pairs(rng, n, pairs)
    transform_list = [random_lorentz(rng, n, TRANSFORM_T_RANGE) for _ in range(transforms)]
    additivity_inputs = [
        (*random_pairs(rng, n, 1)[0], float(rng.uniform(*ADDITIVITY_S_RANGE)))
        for _ in range(additivity_instances)
    ]

    logger.info("Running Crofton suites for n=%d (%s).", n, cfg.method.value)
    invariance = check_invariance(pair_list, transform_list, cfg, progress)
    additivity = []
    for key, (x, y, s) in enumerate(progress_bar(additivity_inputs, "additivity", progress)):
        additivity.extend(check_additivity(x, y, [s], cfg, row_key=key))
    linearity = estimate_c(n, t_values or DEFAULT_T_VALUES, cfg)
    scale = check_scale(n, cfg)

    summaries = [
        summarize_rows(invariance, "invariance"),
        summarize_rows(additivity, "additivity"),
        *linearity.summaries,
        summarize_rows(scale, "scale"),
    ]
    return linearity.model_copy(
        update={
            "rows": invariance + additivity + linearity.rows + scale,
            "summaries": summaries,
            "passed": linearity.passed and all(s.passed for s in summaries),
        }
    )
