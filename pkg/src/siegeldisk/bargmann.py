"""Holomorphic (Fock-Bargmann) wavefunctions, Gauss kernels, Husimi functions.

The doubled-disk elements of this library are exactly the quadratic-form
parameters of Gauss kernels on the holomorphic Hilbert space. This module
evaluates those objects pointwise, realizes the two-way dictionary between
kernels and disk-semigroup acting matrices, and provides a single-mode
quadrature oracle that checks the dictionary by direct integration.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import InvariantViolation, SingularMatrixError
from .linalg import (
    DEFAULT_TOL,
    Tolerances,
    as_complex_matrix,
    condition_estimate,
    frozen,
    hermitize,
    psd_check,
)
from .siegel import BlockMap, DiskPoint, mobius
from .states import ComplexCovariance, DoubleDiskPoint, cov_to_disk

__all__ = [
    "PureFB",
    "GaussKernel",
    "HusimiGaussian",
    "QuadratureReport",
    "fb_pure_eval",
    "gauss_kernel_eval",
    "mixed_kernel_eval",
    "husimi_from_cov",
    "husimi_eval",
    "kernel_to_matrix",
    "matrix_to_kernel",
    "quadrature_apply",
    "husimi_kernel_identity_residual",
]


@dataclass(frozen=True)
class PureFB:
    """A pure Gaussian holomorphic wavefunction ``det(1-KK*)^{1/4} exp(z^T K z / 2)``."""

    point: DiskPoint

    @property
    def normalization(self) -> float:
        det = np.linalg.det(np.eye(self.point.n) - self.point.k @ self.point.k.conj())
        return float(det.real) ** 0.25


@dataclass(frozen=True)
class GaussKernel:
    """Quadratic-exponential kernel ``c exp((z^T A z + 2 z^T B w + w^T D w)/2)``.

    The symmetric parameter matrix stacks the blocks as ``[[A, B], [B^T, D]]``;
    for oscillator-semigroup use it lies in the doubled Siegel disk and ``B``
    is invertible.
    """

    a2n: np.ndarray
    c: complex = 1.0 + 0.0j
    tol: Tolerances = field(default=DEFAULT_TOL, repr=False, compare=False)

    def __post_init__(self):
        arr = as_complex_matrix(self.a2n, name="kernel matrix")
        if arr.shape[0] != arr.shape[1] or arr.shape[0] % 2:
            raise InvariantViolation("kernel matrix must be square with even dimension")
        resid = float(np.linalg.norm(arr - arr.T, 2))
        if resid > self.tol.atol * max(1.0, float(np.linalg.norm(arr, 2))):
            raise InvariantViolation("kernel matrix must be symmetric", residual=resid)
        if self.c == 0:
            raise InvariantViolation("kernel scalar must be nonzero")
        object.__setattr__(self, "a2n", frozen((arr + arr.T) / 2))
        object.__setattr__(self, "c", complex(self.c))

    @property
    def n(self) -> int:
        return self.a2n.shape[0] // 2

    @property
    def a_block(self) -> np.ndarray:
        return self.a2n[: self.n, : self.n]

    @property
    def b_block(self) -> np.ndarray:
        return self.a2n[: self.n, self.n :]

    @property
    def d_block(self) -> np.ndarray:
        return self.a2n[self.n :, self.n :]


@dataclass(frozen=True)
class HusimiGaussian:
    """Gaussian Husimi function with covariance ``sigma_Q`` (Hermitian PD)."""

    sigma_q: np.ndarray
    tol: Tolerances = field(default=DEFAULT_TOL, repr=False, compare=False)

    def __post_init__(self):
        arr = hermitize(self.sigma_q, self.tol, "Husimi covariance")
        if arr.shape[0] % 2:
            raise InvariantViolation("Husimi covariance must have even dimension")
        if not psd_check(arr, strict=True, tol=self.tol, name="Husimi covariance"):
            raise InvariantViolation("Husimi covariance must be positive definite")
        object.__setattr__(self, "sigma_q", frozen(arr))

    @property
    def n(self) -> int:
        return self.sigma_q.shape[0] // 2


def _vector(z, n, name="vector") -> np.ndarray:
    arr = np.atleast_1d(np.asarray(z, dtype=complex))
    if arr.shape != (n,):
        raise InvariantViolation(f"{name} must have length {n}, got shape {arr.shape}")
    return arr


def fb_pure_eval(k, zeta, tol: Tolerances = DEFAULT_TOL) -> complex:
    r"""Evaluate :math:`\det(1 - KK^*)^{1/4} e^{\zeta^T K \zeta / 2}`."""
    point = k if isinstance(k, DiskPoint) else DiskPoint(np.asarray(k, dtype=complex), tol)
    z = _vector(zeta, point.n, "zeta")
    return complex(PureFB(point).normalization * np.exp(0.5 * z @ point.k @ z))


def gauss_kernel_eval(kernel: GaussKernel, zeta, omega_star) -> complex:
    r"""Evaluate the kernel at independent arguments ``(zeta, omega*)``."""
    z = _vector(zeta, kernel.n, "zeta")
    w = _vector(omega_star, kernel.n, "omega_star")
    quad = z @ kernel.a_block @ z + 2.0 * z @ kernel.b_block @ w + w @ kernel.d_block @ w
    return complex(kernel.c * np.exp(0.5 * quad))


def mixed_kernel_eval(a, zeta, tol: Tolerances = DEFAULT_TOL) -> complex:
    r"""Diagonal mixed-state kernel ``exp(z^T A z / 2)`` with ``z = (zeta, conj(zeta))``.

    Tracked up to the trace-normalization scalar throughout.
    """
    point = a if isinstance(a, DoubleDiskPoint) else DoubleDiskPoint(a, tol)
    z = _vector(zeta, point.n, "zeta")
    zz = np.concatenate([z, z.conj()])
    return complex(np.exp(0.5 * zz @ point.a @ zz))


def husimi_from_cov(sigma, tol: Tolerances = DEFAULT_TOL) -> HusimiGaussian:
    r"""Husimi covariance of a state: :math:`\sigma_Q = \sigma^* + 1/2`.

    The conjugate is deliberate: the doubled-disk parameter satisfies
    :math:`A^* = \sigma_x(1 - \sigma_Q^{-1})`.
    """
    cov = sigma if isinstance(sigma, ComplexCovariance) else ComplexCovariance(sigma, tol)
    if not cov.is_state():
        raise InvariantViolation("Husimi function requires a state covariance")
    return HusimiGaussian(cov.sigma.conj() + np.eye(2 * cov.n) / 2, tol)


def husimi_eval(h: HusimiGaussian, z) -> float:
    r"""Evaluate :math:`\pi^{-n}\det(\sigma_Q)^{-1/2} e^{-z^\dagger \sigma_Q^{-1} z/2}`.

    ``z`` must be of the doubled form ``(zeta, conj(zeta))``.
    """
    arr = np.atleast_1d(np.asarray(z, dtype=complex))
    if arr.shape != (2 * h.n,):
        raise InvariantViolation(f"argument must have length {2 * h.n}")
    if not np.allclose(arr[h.n :], arr[: h.n].conj(), atol=1e-12, rtol=0.0):
        raise InvariantViolation("argument must have the form (zeta, conj(zeta))")
    det = float(np.linalg.det(h.sigma_q).real)
    quad = arr.conj() @ np.linalg.solve(h.sigma_q, arr)
    return float(np.pi ** (-h.n) * det ** (-0.5) * np.exp(-0.5 * quad.real))


def kernel_to_matrix(kernel, tol: Tolerances = DEFAULT_TOL) -> BlockMap:
    r"""Acting matrix of a Gauss kernel under the oscillator-semigroup dictionary.

    For kernel blocks ``(A, B, D)`` with ``B`` invertible,

        T = [[B^{-T}, -B^{-T} D], [A B^{-T}, B - A B^{-T} D]],

    the unique matrix (up to overall sign) whose fractional action matches
    the kernel's integral action on pure Gaussian states; see
    :func:`quadrature_apply` for the direct numerical verification. Inverse
    of :func:`matrix_to_kernel`.
    """
    k = kernel if isinstance(kernel, GaussKernel) else GaussKernel(kernel, 1.0, tol)
    cond = condition_estimate(k.b_block)
    if cond >= tol.cond_max:
        raise SingularMatrixError("homomorphism undefined: B block not invertible", cond)
    b_inv_t = np.linalg.inv(k.b_block).T
    a, d = k.a_block, k.d_block
    return BlockMap.from_blocks(b_inv_t, -b_inv_t @ d, a @ b_inv_t, k.b_block - a @ b_inv_t @ d)


def matrix_to_kernel(t, tol: Tolerances = DEFAULT_TOL) -> GaussKernel:
    r"""Kernel parameters of an acting matrix ``T = [[alpha, beta], [gamma, delta]]``:

        A2n = [[gamma alpha^{-1}, alpha^{-T}], [alpha^{-1}, -alpha^{-1} beta]].

    Defined whenever ``alpha`` is invertible; the scalar is left at 1
    (normalization is tracked separately and never drives decisions).
    """
    arr = t.matrix if isinstance(t, BlockMap) else as_complex_matrix(t, name="acting matrix")
    if arr.shape[0] != arr.shape[1] or arr.shape[0] % 2:
        raise InvariantViolation("acting matrix must be square with even dimension")
    m = arr.shape[0] // 2
    alpha, beta = arr[:m, :m], arr[:m, m:]
    gamma = arr[m:, :m]
    cond = condition_estimate(alpha)
    if cond >= tol.cond_max:
        raise SingularMatrixError("kernel parameters undefined: alpha block not invertible", cond)
    alpha_inv = np.linalg.inv(alpha)
    a2n = np.block([[gamma @ alpha_inv, alpha_inv.T], [alpha_inv, -alpha_inv @ beta]])
    return GaussKernel((a2n + a2n.T) / 2, 1.0, tol)


@dataclass(frozen=True)
class QuadratureReport:
    """Outcome of the single-mode integral cross-check of a kernel action."""

    zetas: np.ndarray
    integrals: np.ndarray
    predicted: np.ndarray
    scale: complex
    max_rel_deviation: float
    disk_image: complex


_DEFAULT_SAMPLES = np.array(
    [0.0, 0.4, -0.55, 0.8j, 0.35 + 0.45j, -0.3 - 0.6j, 1.0, -0.9j, 0.7 - 0.2j, -0.65 + 0.5j]
)


def quadrature_apply(
    kernel: GaussKernel,
    psi: PureFB,
    radius: float = 6.0,
    points: int = 201,
    samples=None,
    margin: float = 0.05,
    tol: Tolerances = DEFAULT_TOL,
) -> QuadratureReport:
    r"""Apply a single-mode Gauss kernel to a pure state by direct integration.

    Midpoint rule on a uniform ``points x points`` grid over the square of
    half-side ``radius``, against the measure
    :math:`d\mu(\omega) = \pi^{-1} e^{-|\omega|^2} d^2\omega`. The result is
    compared against the closed-form prediction: proportionality to the pure
    state at ``mobius(kernel_to_matrix(kernel), K)``, with the proportionality
    scalar estimated by least squares over the sample points.

    The integrand decays like ``exp(-(1 - (|D| + |K|)/2) |omega|^2)``, so the
    guard is on that decay rate, which also covers kernels sitting on the
    boundary of the doubled disk (their ``D`` block is strictly inside).
    """
    if kernel.n != 1 or psi.point.n != 1:
        raise InvariantViolation("quadrature oracle is single-mode only")
    a = complex(kernel.a_block[0, 0])
    b = complex(kernel.b_block[0, 0])
    d = complex(kernel.d_block[0, 0])
    k = complex(psi.point.k[0, 0])
    decay = 1.0 - (abs(d) + abs(k)) / 2.0
    if decay < margin:
        raise InvariantViolation(
            f"kernel too close to the integrability boundary (decay rate {decay:.3g})"
        )

    h = 2.0 * radius / points
    grid = -radius + (np.arange(points) + 0.5) * h
    wx, wy = np.meshgrid(grid, grid, indexing="ij")
    w = wx + 1j * wy
    # kernel(zeta, conj(w)) * psi(w) * exp(-|w|^2), zeta-independent part
    base = psi.normalization * np.exp(
        -np.abs(w) ** 2 + 0.5 * d * np.conj(w) ** 2 + 0.5 * k * w**2
    )

    zetas = _DEFAULT_SAMPLES if samples is None else np.atleast_1d(np.asarray(samples, complex))
    integrals = np.empty(zetas.shape, dtype=complex)
    for i, z in enumerate(zetas):
        integrals[i] = kernel.c * h * h / np.pi * np.sum(
            np.exp(0.5 * a * z * z + b * z * np.conj(w)) * base
        )

    t = kernel_to_matrix(kernel, tol)
    image = mobius(t, psi.point.k, tol)
    k_out = DiskPoint(image, tol)
    predicted = np.array([fb_pure_eval(k_out, [z], tol) for z in zetas])

    scale = complex((integrals @ predicted.conj()) / (predicted @ predicted.conj()))
    deviation = float(
        np.max(np.abs(integrals - scale * predicted)) / np.max(np.abs(integrals))
    )
    return QuadratureReport(
        zetas=frozen(zetas),
        integrals=frozen(integrals),
        predicted=frozen(predicted),
        scale=scale,
        max_rel_deviation=deviation,
        disk_image=complex(image[0, 0]),
    )


def husimi_kernel_identity_residual(sigma, zeta, tol: Tolerances = DEFAULT_TOL) -> float:
    r"""Pointwise residual of the kernel/Husimi identity for a state.

    With the trace-unnormalized kernel tracked here, the exact relation is

        exp(z^T A z / 2) * exp(-|zeta|^2)
            = det(sigma_Q)^{1/2} * pi^n * Q((conj(zeta), zeta)),

    i.e. the Husimi function evaluated at the swapped doubled argument,
    scaled by the kernel's missing normalization constant.
    """
    cov = sigma if isinstance(sigma, ComplexCovariance) else ComplexCovariance(sigma, tol)
    z = _vector(zeta, cov.n, "zeta")
    point = cov_to_disk(cov, tol)
    lhs = mixed_kernel_eval(point, z, tol) * np.exp(-float(np.vdot(z, z).real))
    h = husimi_from_cov(cov, tol)
    det = float(np.linalg.det(h.sigma_q).real)
    rhs = det**0.5 * np.pi**cov.n * husimi_eval(h, np.concatenate([z.conj(), z]))
    return float(abs(lhs - rhs) / max(1.0, abs(rhs)))
