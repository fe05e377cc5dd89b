import numpy as np
import pytest

from siegeldisk import (
    ComplexCovariance,
    DiskPoint,
    GaussKernel,
    InvariantViolation,
    PureFB,
    SingularMatrixError,
    abc_conjugate,
    classify,
    cov_to_disk,
    fb_pure_eval,
    gauss_kernel_eval,
    husimi_eval,
    husimi_from_cov,
    husimi_kernel_identity_residual,
    kernel_to_matrix,
    matrix_to_kernel,
    mixed_kernel_eval,
    mobius,
    pure_embed,
    quadrature_apply,
    shear_element,
)
from siegeldisk.harness import (
    rand_disk_point,
    rand_disk_semigroup,
    rand_gauss_kernel,
    rand_state,
    trial_rng,
)


def thermal_cov(nu, n=1):
    return ComplexCovariance(0.5 * nu * np.eye(2 * n))


def test_fb_pure_eval_vacuum_is_one():
    for zeta in ([0.0], [1.3 - 0.4j]):
        assert np.isclose(fb_pure_eval(np.zeros((1, 1)), zeta), 1.0)


def test_fb_pure_eval_scalar_values():
    got = fb_pure_eval(np.array([[0.5]]), [1.0])
    assert np.isclose(got, 0.75**0.25 * np.exp(0.25))
    assert np.isclose(fb_pure_eval(np.array([[0.5]]), [0.0]), 0.75**0.25)


def test_gauss_kernel_reproducing_form():
    kernel = GaussKernel(np.array([[0, 1], [1, 0]], dtype=complex))
    zeta, omega_star = 0.7 - 0.2j, 0.4 + 0.9j
    value = gauss_kernel_eval(kernel, [zeta], [omega_star])
    assert np.isclose(value, np.exp(zeta * omega_star))


def test_gauss_kernel_at_origin_returns_scalar():
    kernel = GaussKernel(np.array([[0.2, 0.5], [0.5, 0.1]]), c=2.5 - 1j)
    assert np.isclose(gauss_kernel_eval(kernel, [0.0], [0.0]), 2.5 - 1j)


def test_gauss_kernel_scalar_exponent_arithmetic():
    kernel = GaussKernel(np.array([[0.2, 1.0], [1.0, 0.1]], dtype=complex))
    # exponent: (0.2*1 + 2*1*i + 0.1*i^2)/2 = 0.05 + i
    assert np.isclose(gauss_kernel_eval(kernel, [1.0], [1j]), np.exp(0.05 + 1j))


def test_mixed_kernel_trivial_and_thermal(sx):
    assert np.isclose(mixed_kernel_eval(np.zeros((2, 2)), [0.9 + 0.3j]), 1.0)
    assert np.isclose(mixed_kernel_eval(0.5 * np.asarray(sx), [1.0]), np.exp(0.5))


def test_mixed_kernel_of_pure_embed_factorizes():
    for i in range(10):
        rng = trial_rng(50, i)
        n = int(rng.integers(1, 3))
        k = rand_disk_point(n, rng)
        zeta = rng.normal(size=n) + 1j * rng.normal(size=n)
        joint = mixed_kernel_eval(pure_embed(k), zeta)
        single = fb_pure_eval(k, zeta)
        norm_sq = PureFB(k).normalization ** 2
        assert np.isclose(joint, single * np.conj(single) / norm_sq)


def test_husimi_from_cov_examples():
    assert np.allclose(husimi_from_cov(thermal_cov(1.0)).sigma_q, np.eye(2))
    assert np.allclose(husimi_from_cov(thermal_cov(3.0)).sigma_q, 2.0 * np.eye(2))


def test_husimi_from_cov_rejects_non_state():
    with pytest.raises(InvariantViolation):
        husimi_from_cov(thermal_cov(0.5))


def test_husimi_matches_disk_parameter_conjugate(sx):
    # A* = sigma_x (1 - sigma_Q^{-1}) on random states
    for i in range(200):
        rng = trial_rng(51, i)
        n = int(rng.integers(1, 4))
        sigma = rand_state(n, rng)
        point = cov_to_disk(sigma)
        sq = husimi_from_cov(sigma).sigma_q
        sx_n = np.kron(np.array([[0, 1], [1, 0]]), np.eye(n))
        target = sx_n @ (np.eye(2 * n) - np.linalg.inv(sq))
        assert np.linalg.norm(point.a.conj() - target, 2) <= 1e-10


def test_husimi_eval_vacuum_values():
    h = husimi_from_cov(thermal_cov(1.0))
    assert np.isclose(husimi_eval(h, [0.0, 0.0]), 1.0 / np.pi)
    assert np.isclose(husimi_eval(h, [1.0, 1.0]), np.exp(-1.0) / np.pi)


def test_husimi_eval_rejects_malformed_argument():
    h = husimi_from_cov(thermal_cov(1.0))
    with pytest.raises(InvariantViolation):
        husimi_eval(h, [1.0, 2.0 + 1j])


def test_husimi_normalizes_on_a_grid():
    h = husimi_from_cov(thermal_cov(3.0))
    radius, points = 6.0, 201
    step = 2 * radius / points
    xs = -radius + (np.arange(points) + 0.5) * step
    gx, gy = np.meshgrid(xs, xs, indexing="ij")
    zs = gx + 1j * gy
    total = sum(
        husimi_eval(h, [z, np.conj(z)]) for z in zs.ravel()
    ) * step * step
    assert abs(total - 1.0) <= 1e-4


def test_kernel_husimi_pointwise_identity():
    for i in range(25):
        rng = trial_rng(52, i)
        n = int(rng.integers(1, 3))
        sigma = rand_state(n, rng)
        for _ in range(20):
            zeta = 0.8 * (rng.normal(size=n) + 1j * rng.normal(size=n))
            assert husimi_kernel_identity_residual(sigma, zeta) <= 1e-10


def test_kernel_to_matrix_identity():
    kernel = GaussKernel(np.array([[0, 1], [1, 0]], dtype=complex))
    assert np.allclose(kernel_to_matrix(kernel).matrix, np.eye(2))


def test_matrix_to_kernel_identity():
    kernel = matrix_to_kernel(np.eye(2))
    assert np.allclose(kernel.a2n, np.array([[0, 1], [1, 0]]))


def test_kernel_matrix_roundtrips():
    for i in range(200):
        rng = trial_rng(53, i)
        n = int(rng.integers(1, 3))
        kernel = rand_gauss_kernel(n, rng)
        back = matrix_to_kernel(kernel_to_matrix(kernel))
        assert np.linalg.norm(back.a2n - kernel.a2n, 2) <= 1e-10
        t = rand_disk_semigroup(n, rng)
        t_back = kernel_to_matrix(matrix_to_kernel(t))
        assert np.linalg.norm(t_back.matrix - t.matrix, 2) <= 1e-10


def test_kernel_to_matrix_lands_in_disk_semigroup():
    for i in range(30):
        rng = trial_rng(54, i)
        n = int(rng.integers(1, 3))
        t = kernel_to_matrix(rand_gauss_kernel(n, rng))
        report = classify(t)
        assert report.sp_complex and report.sp_plus_disk


def test_kernel_to_matrix_singular_b_block():
    bad = np.zeros((2, 2), dtype=complex)
    bad[0, 0] = 0.3
    bad[1, 1] = 0.2
    with pytest.raises(SingularMatrixError):
        kernel_to_matrix(GaussKernel(bad))


def test_matrix_to_kernel_symmetry_of_shear_conjugate():
    t = abc_conjugate(shear_element(0.4, 1).matrix)
    kernel = matrix_to_kernel(t)
    assert np.linalg.norm(kernel.a2n - kernel.a2n.T, 2) <= 1e-12


def test_quadrature_identity_kernel_reproduces():
    kernel = GaussKernel(np.array([[0, 1], [1, 0]], dtype=complex))
    report = quadrature_apply(kernel, PureFB(DiskPoint(np.zeros((1, 1)))))
    assert report.max_rel_deviation <= 1e-6
    assert abs(report.disk_image) <= 1e-12
    assert np.isclose(report.scale, 1.0, atol=1e-8)


def test_quadrature_matches_mobius_on_unitary_boundary_kernel():
    s = abc_conjugate(np.array([[np.cosh(0.3), np.sinh(0.3)], [np.sinh(0.3), np.cosh(0.3)]]))
    kernel = matrix_to_kernel(s)
    psi = PureFB(DiskPoint(np.array([[0.3 + 0j]])))
    report = quadrature_apply(kernel, psi)
    assert report.max_rel_deviation <= 1e-5
    assert np.isclose(report.disk_image, mobius(s, np.array([[0.3 + 0j]]))[0, 0])


def test_quadrature_contraction_kernel():
    t = abc_conjugate(shear_element(0.2, 1).matrix)
    kernel = matrix_to_kernel(t)
    psi = PureFB(DiskPoint(np.array([[0.2 + 0j]])))
    report = quadrature_apply(kernel, psi)
    assert report.max_rel_deviation <= 1e-5


def test_quadrature_guards():
    kernel = GaussKernel(np.array([[0, 1], [1, 0.999]], dtype=complex))
    psi = PureFB(DiskPoint(np.array([[0.95 + 0j]])))
    with pytest.raises(InvariantViolation):
        quadrature_apply(kernel, psi)  # decay rate below the margin
    two_mode = GaussKernel(np.block([[np.zeros((2, 2)), np.eye(2)], [np.eye(2), np.zeros((2, 2))]]))
    with pytest.raises(InvariantViolation):
        quadrature_apply(two_mode, PureFB(DiskPoint(np.zeros((2, 2)))))


def test_gauss_kernel_guards():
    with pytest.raises(InvariantViolation):
        GaussKernel(np.array([[0.0, 1.0], [0.5, 0.0]]))  # not symmetric
    with pytest.raises(InvariantViolation):
        GaussKernel(np.array([[0, 1], [1, 0]], dtype=complex), c=0.0)
