# tests/test_cnk_kernel.py

import numpy as np
import pytest
from scipy.linalg import null_space

from cnk_kernel import (
    GroupElementSample,
    KernelMatrix,
    check_gram_consistency,
    check_left_invariance,
    cnk_defect,
    cnk_tolerance,
    default_sweep,
    distance_matrix,
    group_cnk_suite,
    group_kernel,
    group_kernel_matrix,
    hilbert_identity_check,
    psi,
    random_probe_defect,
    run_cnk_suites,
    set_cnk_suite,
    unboundedness_sweep,
)
from crofton_verifier import estimate_c
from hyperbolic.lorentz_core import (
    DomainError,
    LorentzTransform,
    UsageError,
    apply_point,
    basepoint,
    boost,
    random_lorentz,
    random_point,
)


def projected_eigenvalues(D):
    basis = null_space(np.ones((1, D.shape[0])))
    return np.linalg.eigvalsh(basis.T @ D @ basis)


def test_two_point_defect_is_minus_the_distance():
    assert cnk_defect(np.array([[0.0, 1.5], [1.5, 0.0]])) == pytest.approx(-1.5)
    assert cnk_defect(np.array([[0.0, -1.0], [-1.0, 0.0]])) == pytest.approx(1.0)


def test_defect_matches_null_space_projection(rng):
    for m in (3, 6, 12):
        D = distance_matrix([random_point(rng, 3) for _ in range(m)]).values
        assert cnk_defect(D) == pytest.approx(projected_eigenvalues(D)[-1], abs=1e-12)


def test_defect_matches_centred_spectrum(rng):
    D = distance_matrix([random_point(rng, 2) for _ in range(7)]).values
    centring = np.eye(7) - np.ones((7, 7)) / 7
    spectrum = np.linalg.eigvalsh(centring @ D @ centring)
    # the centred matrix adds one zero eigenvalue along the ones vector
    nonzero = np.delete(spectrum, np.argmin(np.abs(spectrum)))
    np.testing.assert_allclose(np.sort(nonzero), projected_eigenvalues(D), atol=1e-10)


def test_defect_needs_two_points():
    with pytest.raises(UsageError):
        cnk_defect(np.zeros((1, 1)))


@pytest.mark.parametrize("n", [2, 3, 5, 8])
def test_hyperbolic_distance_is_conditionally_negative(rng, n):
    for _ in range(20):
        D = distance_matrix([random_point(rng, n, 2.0) for _ in range(10)])
        assert cnk_defect(D) < 0.0


def test_duplicated_point_gives_zero_defect(rng):
    points = [random_point(rng, 2) for _ in range(5)]
    with_duplicate = distance_matrix(points + [points[2]])
    assert abs(cnk_defect(with_duplicate)) <= 1e-10 * with_duplicate.max_abs
    assert cnk_defect(distance_matrix(points)) < 0.0


def test_negated_distance_is_not_conditionally_negative(rng):
    D = distance_matrix([random_point(rng, 2) for _ in range(4)]).values
    assert cnk_defect(-D) > 0.0


def test_random_probes_never_exceed_the_defect(rng):
    D = distance_matrix([random_point(rng, 3) for _ in range(8)])
    probe = random_probe_defect(D, rng, probes=2_000)
    assert probe <= cnk_defect(D) + 1e-10


def test_random_probes_are_exact_for_two_points(rng):
    D = np.array([[0.0, 2.0], [2.0, 0.0]])
    assert random_probe_defect(D, rng, probes=10) == pytest.approx(-2.0)


def test_tolerance_scales_with_entries():
    assert cnk_tolerance(np.array([[0.0, 300.0], [300.0, 0.0]])) == pytest.approx(3e-6)


@pytest.mark.parametrize(
    "values",
    [
        np.zeros((2, 3)),
        np.array([[0.0, 1.0], [2.0, 0.0]]),
        np.array([[1.0, 1.0], [1.0, 0.0]]),
        np.array([[0.0, -1.0], [-1.0, 0.0]]),
        np.array([[0.0, np.nan], [np.nan, 0.0]]),
    ],
)
def test_kernel_matrix_validation(values):
    with pytest.raises(UsageError):
        KernelMatrix(values)


def test_kernel_matrix_without_distance_constraints():
    K = KernelMatrix(np.array([[1.0, -2.0], [-2.0, 1.0]]), distance=False)
    assert K.size == 2
    assert K.max_abs == 2.0
    with pytest.raises(ValueError):
        K.values[0, 0] = 3.0


def test_set_suite_rows(rng):
    points = [random_point(rng, 3) for _ in range(6)]
    rows = set_cnk_suite(points, rng, probes=500, case="demo")
    assert [row.case for row in rows] == ["demo defect", "demo random probes"]
    assert all(row.passed for row in rows)
    assert rows[0].details["points"] == 6
    assert len(set_cnk_suite(points)) == 1


@pytest.mark.parametrize("count", [1, 65])
def test_set_suite_point_count(rng, count):
    points = [random_point(rng, 2) for _ in range(count)]
    with pytest.raises(UsageError):
        set_cnk_suite(points)


@pytest.mark.parametrize("t", [0.0, 0.3, -2.5, 40.0])
def test_psi_of_a_boost(t):
    assert psi(boost(t, 1, 3)) == pytest.approx(abs(t), rel=1e-12, abs=1e-12)


def test_group_kernel_properties(rng):
    for _ in range(50):
        g, h = random_lorentz(rng, 3), random_lorentz(rng, 3)
        assert group_kernel(g, h) == group_kernel(h, g)
        assert group_kernel(g, h) == pytest.approx(psi(g.inverse() @ h), abs=1e-8)
        assert psi(g) == pytest.approx(psi(g.inverse()), abs=1e-8)
    assert group_kernel(g, g) == 0.0


def test_group_kernel_dimension_mismatch():
    with pytest.raises(UsageError):
        group_kernel(LorentzTransform.identity(2), LorentzTransform.identity(3))


def test_left_invariance(rng):
    for _ in range(200):
        g, h, k = (random_lorentz(rng, 4) for _ in range(3))
        assert check_left_invariance(g, h, k) <= 1e-8


def test_group_sample_validation():
    with pytest.raises(UsageError):
        GroupElementSample(())
    with pytest.raises(UsageError):
        GroupElementSample((LorentzTransform.identity(2), LorentzTransform.identity(3)))
    with pytest.raises(UsageError):
        GroupElementSample((np.eye(3),))


def test_group_suite(rng):
    sample = GroupElementSample(tuple(random_lorentz(rng, 2) for _ in range(8)))
    assert sample.n == 2
    assert group_kernel_matrix(sample).size == 8
    rows = group_cnk_suite(sample, rng, probes=500)
    assert all(row.passed for row in rows)
    with pytest.raises(UsageError):
        group_cnk_suite(GroupElementSample((LorentzTransform.identity(2),)))


def test_unboundedness_sweep():
    t_values = default_sweep(300.0)
    rows = unboundedness_sweep(t_values + [-5.0])
    assert len(rows) == len(t_values) + 2
    assert all(row.passed for row in rows)
    assert rows[-1].case == "strictly increasing in |t|"
    assert rows[-1].details["max_kernel"] == pytest.approx(300.0, rel=1e-12)


def test_unboundedness_sweep_limits():
    with pytest.raises(DomainError):
        unboundedness_sweep([1.0, 701.0])
    with pytest.raises(UsageError):
        unboundedness_sweep([])


def test_default_sweep():
    sweep = default_sweep(300.0)
    assert sweep[0] == 0.0
    assert sweep[1] == pytest.approx(0.01)
    assert sweep[-1] == pytest.approx(300.0)
    assert len(sweep) == 17
    with pytest.raises(DomainError):
        default_sweep(800.0)


def test_hilbert_identity(quadrature_cfg, rng):
    for _ in range(3):
        points = [random_point(rng, 2, 1.0) for _ in range(5)]
        lam = rng.standard_normal(5)
        lam -= lam.mean()
        result = hilbert_identity_check(points, lam, quadrature_cfg, c_hat=2.0)
        assert result.lhs <= 0.0
        assert result.rhs == pytest.approx(result.lhs, rel=1e-2, abs=1e-6)
        assert result.passed


def test_hilbert_identity_fails_with_a_wrong_constant(quadrature_cfg):
    o = basepoint(2)
    points = [o, apply_point(boost(1.0, 1, 2), o), apply_point(boost(1.0, 2, 2), o),
              apply_point(boost(-1.0, 1, 2), o)]
    lam = np.array([1.0, -1.0, 0.5, -0.5])
    assert not hilbert_identity_check(points, lam, quadrature_cfg, c_hat=3.0).passed


def test_hilbert_identity_input_checks(quadrature_cfg, rng):
    points = [random_point(rng, 2) for _ in range(3)]
    with pytest.raises(UsageError):
        hilbert_identity_check(points, [1.0, -1.0], quadrature_cfg, c_hat=2.0)
    with pytest.raises(UsageError):
        hilbert_identity_check(points, [1.0, 1.0, -1.0], quadrature_cfg, c_hat=2.0)


def test_gram_consistency(quadrature_cfg):
    o = basepoint(3)
    points = [
        apply_point(boost(0.8, 1, 3), o),
        apply_point(boost(0.6, 2, 3), o),
        apply_point(boost(0.5, 1, 3) @ boost(0.5, 3, 3), o),
    ]
    rows = check_gram_consistency(points, quadrature_cfg, c_hat=np.pi)
    assert len(rows) == 6
    assert all(row.passed for row in rows)


def test_run_cnk_suites(quadrature_cfg):
    crofton = estimate_c(2, (0.25, 0.5, 1.0, 2.0, 4.0), quadrature_cfg)
    report = run_cnk_suites(
        2,
        quadrature_cfg,
        points=5,
        configurations=3,
        transforms=5,
        t_max=50.0,
        crofton=crofton,
        hilbert_instances=2,
        triples=10,
        probes=500,
    )
    assert [s.suite for s in report.summaries] == [
        "set-cnk",
        "group-cnk",
        "left-invariance",
        "unboundedness",
        "hilbert",
        "gram",
    ]
    assert report.passed
    assert report.defect_max < 0.0
    assert report.c_hat == crofton.c_hat


def test_run_cnk_suites_point_count(quadrature_cfg):
    with pytest.raises(UsageError):
        run_cnk_suites(2, quadrature_cfg, points=1)


@pytest.mark.slow
def test_set_cnk_over_many_configurations(rng):
    for k in range(200):
        n = 2 + k % 4
        m = int(rng.integers(2, 65))
        sample = [random_point(rng, n, 2.0) for _ in range(m)]
        rows = set_cnk_suite(sample, rng, probes=200, case=f"configuration {k}")
        assert all(row.passed for row in rows), rows


@pytest.mark.slow
@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_left_invariance_over_many_triples(rng, n):
    worst = max(
        check_left_invariance(*(random_lorentz(rng, n) for _ in range(3))) for _ in range(1000)
    )
    assert worst <= 1e-8


@pytest.mark.slow
def test_hilbert_identity_over_many_instances(quadrature_cfg, rng):
    passed = 0
    for _ in range(20):
        points = [random_point(rng, 2, 1.0) for _ in range(5)]
        lam = rng.standard_normal(5)
        lam -= lam.mean()
        passed += hilbert_identity_check(points, lam, quadrature_cfg, c_hat=2.0).passed
    assert passed >= 19
