"""Gaussian states: covariance matrices, Williamson form, double-disk picture.

Two parametrizations of the same mixed Gaussian state are maintained:

- the covariance picture: a real ``2n x 2n`` covariance matrix ``Sigma``
  (vacuum is ``I/2``) or its Cayley-conjugated complex form ``sigma``;
- the disk picture: a symmetric ``2n x 2n`` matrix ``A`` strictly inside
  the Siegel disk of doubled dimension, obtained from ``sigma`` by the fixed
  fractional coordinate change ``A = sigma_x (sigma - 1/2)(sigma + 1/2)^{-1}``.

The covariance picture doubles as the independent oracle for everything the
disk picture computes.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import schur

from .errors import InvariantViolation, SingularMatrixError
from .linalg import (
    DEFAULT_TOL,
    Tolerances,
    abc_conjugate,
    abc_unconjugate,
    as_complex_matrix,
    frozen,
    hermitize,
    is_abc,
    omega,
    pauli_lifted,
    psd_check,
)
from .siegel import DiskPoint, in_siegel_disk

__all__ = [
    "RealCovariance",
    "ComplexCovariance",
    "DoubleDiskPoint",
    "ThermalSpectrum",
    "StateMembership",
    "complex_from_real",
    "real_from_complex",
    "williamson",
    "symplectic_spectrum",
    "cov_to_disk",
    "disk_to_cov",
    "state_membership",
    "pure_embed",
    "thermal_disk",
    "disk_williamson",
]


@dataclass(frozen=True)
class RealCovariance:
    """Real symmetric positive-definite covariance matrix (vacuum is ``I/2``)."""

    sigma: np.ndarray
    tol: Tolerances = field(default=DEFAULT_TOL, repr=False, compare=False)

    def __post_init__(self):
        arr = as_complex_matrix(self.sigma, name="real covariance")
        n2 = arr.shape[0]
        if arr.shape[0] != arr.shape[1] or n2 % 2:
            raise InvariantViolation("covariance must be square with even dimension")
        imag = float(np.linalg.norm(arr.imag, 2))
        if imag > self.tol.atol * max(1.0, float(np.linalg.norm(arr, 2))):
            raise InvariantViolation("real covariance has an imaginary part", residual=imag)
        sym = arr.real
        if not psd_check(sym, strict=True, tol=self.tol, name="real covariance"):
            raise InvariantViolation("covariance is not positive definite")
        if np.linalg.norm(sym - sym.T, 2) > self.tol.atol * max(1.0, np.linalg.norm(sym, 2)):
            raise InvariantViolation("covariance is not symmetric")
        object.__setattr__(self, "sigma", frozen((sym + sym.T) / 2))

    @property
    def n(self) -> int:
        return self.sigma.shape[0] // 2

    def is_state(self) -> bool:
        """All symplectic eigenvalues at least 1 (within slack)."""
        nu = symplectic_spectrum(self, self.tol)
        return bool(nu.min() >= 1.0 - self.tol.psd_slack)


@dataclass(frozen=True)
class ComplexCovariance:
    """Hermitian, positive-definite, adjoint-by-Cayley covariance matrix."""

    sigma: np.ndarray
    tol: Tolerances = field(default=DEFAULT_TOL, repr=False, compare=False)

    def __post_init__(self):
        arr = hermitize(self.sigma, self.tol, "complex covariance")
        if arr.shape[0] % 2:
            raise InvariantViolation("covariance must have even dimension")
        if not is_abc(arr, self.tol):
            raise InvariantViolation("complex covariance is not adjoint-by-Cayley")
        if not psd_check(arr, strict=True, tol=self.tol, name="complex covariance"):
            raise InvariantViolation("covariance is not positive definite")
        object.__setattr__(self, "sigma", frozen(arr))

    @property
    def n(self) -> int:
        return self.sigma.shape[0] // 2

    def is_state(self) -> bool:
        """Uncertainty principle ``sigma - sigma_z/2 >= 0`` (within slack)."""
        sz = pauli_lifted("z", self.n)
        return psd_check(self.sigma - sz / 2, strict=False, tol=self.tol, name="uncertainty")


@dataclass(frozen=True)
class DoubleDiskPoint:
    """Mixed-state representative: a point of the doubled Siegel disk.

    Constructors reject matrices outside (or on) the disk, but deliberately
    admit non-states: elements violating the uncertainty principle remain
    representable so the characterization tests can exercise them. Use
    :meth:`is_state` / :meth:`is_abc` for the physical sub-flags.
    """

    a: np.ndarray
    tol: Tolerances = field(default=DEFAULT_TOL, repr=False, compare=False)

    def __post_init__(self):
        arr = as_complex_matrix(self.a, name="double-disk point")
        if arr.shape[0] != arr.shape[1] or arr.shape[0] % 2:
            raise InvariantViolation("double-disk point must be square with even dimension")
        if not in_siegel_disk(arr, self.tol):
            raise InvariantViolation("matrix is not strictly inside the doubled Siegel disk")
        object.__setattr__(self, "a", frozen(arr))

    @property
    def n(self) -> int:
        return self.a.shape[0] // 2

    @property
    def k_block(self) -> np.ndarray:
        """Upper-left block (pure-state part)."""
        return self.a[: self.n, : self.n]

    @property
    def w_block(self) -> np.ndarray:
        """Upper-right block; its positivity is the uncertainty principle."""
        return self.a[: self.n, self.n :]

    def is_abc(self) -> bool:
        return is_abc(self.a, self.tol)

    def is_state(self) -> bool:
        report = state_membership(self.a, self.tol)
        return report.abc and report.w_psd


@dataclass(frozen=True)
class ThermalSpectrum:
    """Symplectic eigenvalues ``nu_i >= 1`` and the disk temperatures derived from them."""

    nu: np.ndarray
    tol: Tolerances = field(default=DEFAULT_TOL, repr=False, compare=False)

    def __post_init__(self):
        arr = np.atleast_1d(np.asarray(self.nu, dtype=float))
        if arr.ndim != 1 or arr.size == 0 or not np.all(np.isfinite(arr)):
            raise InvariantViolation("thermal spectrum must be a finite 1-d sequence")
        if arr.min() < 1.0 - self.tol.psd_slack:
            raise InvariantViolation(
                "symplectic eigenvalue below 1", residual=float(arr.min() - 1.0)
            )
        object.__setattr__(self, "nu", frozen(arr))

    @property
    def n(self) -> int:
        return self.nu.size

    @property
    def xi(self) -> np.ndarray:
        """Entrywise ``(nu - 1)/(nu + 1)``, clamped to exactly 0 on pure modes."""
        xi = (self.nu - 1.0) / (self.nu + 1.0)
        xi = np.where(np.abs(self.nu - 1.0) <= self.tol.psd_slack, 0.0, xi)
        return xi


def complex_from_real(sigma) -> ComplexCovariance:
    """Cayley-conjugate a real covariance into its complex form."""
    cov = sigma if isinstance(sigma, RealCovariance) else RealCovariance(sigma)
    return ComplexCovariance(abc_conjugate(cov.sigma), cov.tol)


def real_from_complex(sigma) -> RealCovariance:
    """Inverse of :func:`complex_from_real`."""
    cov = sigma if isinstance(sigma, ComplexCovariance) else ComplexCovariance(sigma)
    return RealCovariance(abc_unconjugate(cov.sigma), cov.tol)


def _real_sqrt_factors(m: np.ndarray):
    w, v = np.linalg.eigh(m)
    return (v * np.sqrt(w)) @ v.T, (v / np.sqrt(w)) @ v.T


def williamson(sigma, tol: Tolerances = DEFAULT_TOL):
    r"""Williamson normal form ``Sigma = 1/2 S (nu ⊕ nu) S^T`` of a covariance.

    The symplectic factor is computed from the real Schur form of the
    antisymmetric matrix :math:`M^{-1/2}\,\Omega\,M^{-1/2}` with
    ``M = 2 Sigma``: ordering the Schur blocks pairs each mode with its
    symplectic eigenvalue, and undoing the square roots yields a symplectic
    ``S``. The factor is unique only up to the stabilizer of the thermal
    form, so callers should validate by reconstruction, not by comparing
    ``S`` entrywise.

    Returns:
        ``(S, spectrum)`` with ``S`` real symplectic (as an ndarray) and
        ``spectrum`` a :class:`ThermalSpectrum` sorted descending.
    """
    cov = sigma if isinstance(sigma, RealCovariance) else RealCovariance(sigma, tol)
    n = cov.n
    m = 2.0 * cov.sigma.real
    m_half, m_inv_half = _real_sqrt_factors(m)
    anti = m_inv_half @ omega(n) @ m_inv_half
    t, q = schur(anti, output="real")
    # flip pair orientation so every Schur block is [[0, kappa], [-kappa, 0]] with kappa > 0
    for i in range(n):
        if t[2 * i, 2 * i + 1] < 0:
            q[:, [2 * i, 2 * i + 1]] = q[:, [2 * i + 1, 2 * i]]
            t[[2 * i, 2 * i + 1], :] = t[[2 * i + 1, 2 * i], :]
            t[:, [2 * i, 2 * i + 1]] = t[:, [2 * i + 1, 2 * i]]
    kappa = np.array([t[2 * i, 2 * i + 1] for i in range(n)])
    if kappa.min() <= 0:
        raise InvariantViolation("degenerate symplectic spectrum extraction")
    nu = 1.0 / kappa
    order = np.argsort(-nu)
    nu = nu[order]
    cols = [2 * i for i in order] + [2 * i + 1 for i in order]
    q_block = q[:, cols]
    d_inv_half = np.concatenate([1.0 / np.sqrt(nu), 1.0 / np.sqrt(nu)])
    s = m_half @ q_block * d_inv_half
    return s, ThermalSpectrum(nu, tol)


def symplectic_spectrum(sigma, tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    """Symplectic eigenvalues: moduli of the eigenvalues of ``i Omega (2 Sigma)``.

    The moduli come in equal pairs; they are paired off and returned as ``n``
    values sorted descending.
    """
    cov = sigma if isinstance(sigma, RealCovariance) else RealCovariance(sigma, tol)
    n = cov.n
    ev = np.linalg.eigvals(1j * omega(n) @ (2.0 * cov.sigma.real))
    mods = np.sort(np.abs(ev))[::-1]
    return (mods[0::2] + mods[1::2]) / 2


def cov_to_disk(sigma, tol: Tolerances = DEFAULT_TOL) -> DoubleDiskPoint:
    r"""Coordinate change into the doubled disk:
    :math:`A = \sigma_x(\sigma - 1/2)(\sigma + 1/2)^{-1}`.

    Always lands strictly inside the doubled Siegel disk and preserves the
    adjoint-by-Cayley property; the image is a state exactly when ``sigma``
    satisfies the uncertainty principle.
    """
    cov = sigma if isinstance(sigma, ComplexCovariance) else ComplexCovariance(sigma, tol)
    n2 = 2 * cov.n
    sx = pauli_lifted("x", cov.n)
    eye = np.eye(n2)
    try:
        a = sx @ np.linalg.solve((cov.sigma + eye / 2).T, (cov.sigma - eye / 2).T).T
    except np.linalg.LinAlgError as exc:  # unreachable for PD sigma; guard anyway
        raise SingularMatrixError("covariance shift not invertible") from exc
    a = (a + a.T) / 2
    return DoubleDiskPoint(a, cov.tol)


def disk_to_cov(a, tol: Tolerances = DEFAULT_TOL) -> ComplexCovariance:
    r"""Inverse coordinate change:
    :math:`\sigma = \tfrac12(1 + \sigma_x A)(1 - \sigma_x A)^{-1}`.

    Requires an adjoint-by-Cayley input, otherwise the image would not be
    Hermitian.
    """
    point = a if isinstance(a, DoubleDiskPoint) else DoubleDiskPoint(a, tol)
    if not point.is_abc():
        raise InvariantViolation("double-disk point is not adjoint-by-Cayley")
    n2 = 2 * point.n
    sx = pauli_lifted("x", point.n)
    x = sx @ point.a
    eye = np.eye(n2)
    try:
        sig = 0.5 * np.linalg.solve((eye - x).T, (eye + x).T).T
    except np.linalg.LinAlgError as exc:  # unreachable strictly inside the disk
        raise SingularMatrixError("disk-point shift not invertible") from exc
    return ComplexCovariance((sig + sig.conj().T) / 2, point.tol)


@dataclass(frozen=True)
class StateMembership:
    """Report of the double-disk physicality checks for one matrix."""

    in_disk: bool
    abc: bool
    up_fractional: bool
    w_psd: bool
    residuals: dict


def state_membership(a, tol: Tolerances = DEFAULT_TOL) -> StateMembership:
    r"""Evaluate both forms of the disk-picture uncertainty principle.

    ``up_fractional`` checks
    :math:`(1 + \sigma_x A)(1 - \sigma_x A)^{-1} - \sigma_z \succeq 0`, the
    transported covariance inequality; ``w_psd`` checks positivity of the
    upper-right block. For adjoint-by-Cayley points inside the disk the two
    agree (up to the slack band around zero).
    """
    arr = as_complex_matrix(a, name="double-disk candidate")
    if arr.shape[0] != arr.shape[1] or arr.shape[0] % 2:
        raise InvariantViolation("double-disk candidate must be square with even dimension")
    n = arr.shape[0] // 2
    sx = pauli_lifted("x", n)
    sz = pauli_lifted("z", n)
    eye = np.eye(2 * n)

    residuals: dict = {}
    inside = in_siegel_disk(arr, tol)
    abc_flag = is_abc(arr, tol)
    gram = eye - arr.conj().T @ arr
    residuals["disk_min_eig"] = float(np.linalg.eigvalsh((gram + gram.conj().T) / 2).min())
    residuals["abc"] = float(np.linalg.norm(arr @ sx - sx @ arr.conj(), 2))

    w = arr[:n, n:]
    w_h = (w + w.conj().T) / 2
    lam_w = float(np.linalg.eigvalsh(w_h).min())
    w_floor = tol.psd_slack * max(1.0, float(np.linalg.norm(w_h, 2)))
    residuals["w_min_eig"] = lam_w
    residuals["w_floor"] = w_floor
    w_flag = lam_w >= -w_floor

    x = sx @ arr
    try:
        up = np.linalg.solve((eye - x).T, (eye + x).T).T - sz
        up = (up + up.conj().T) / 2
        lam_up = float(np.linalg.eigvalsh(up).min())
        up_floor = tol.psd_slack * max(1.0, float(np.linalg.norm(up, 2)))
        up_flag = lam_up >= -up_floor
    except np.linalg.LinAlgError:
        lam_up, up_floor = float("-inf"), float("inf")
        up_flag = False
    residuals["up_min_eig"] = lam_up
    residuals["up_floor"] = up_floor

    return StateMembership(
        in_disk=inside, abc=abc_flag, up_fractional=up_flag, w_psd=w_flag, residuals=residuals
    )


def pure_embed(k, tol: Tolerances = DEFAULT_TOL) -> DoubleDiskPoint:
    """Embed a pure-state disk point as the block-diagonal ``K ⊕ conj(K)``."""
    point = k if isinstance(k, DiskPoint) else DiskPoint(np.asarray(k, dtype=complex), tol)
    n = point.n
    a = np.zeros((2 * n, 2 * n), dtype=complex)
    a[:n, :n] = point.k
    a[n:, n:] = point.k.conj()
    return DoubleDiskPoint(a, tol)


def thermal_disk(nu, tol: Tolerances = DEFAULT_TOL) -> DoubleDiskPoint:
    r"""Thermal normal form in the disk: :math:`A_\xi = \xi_{\oplus^*}\sigma_x`
    with :math:`\xi = (\nu - 1)(\nu + 1)^{-1}`."""
    spectrum = nu if isinstance(nu, ThermalSpectrum) else ThermalSpectrum(nu, tol)
    n = spectrum.n
    xi = spectrum.xi
    a = np.zeros((2 * n, 2 * n), dtype=complex)
    a[:n, n:] = np.diag(xi)
    a[n:, :n] = np.diag(xi)
    return DoubleDiskPoint(a, tol)


def disk_williamson(a, tol: Tolerances = DEFAULT_TOL):
    r"""Normal-mode decomposition of a state directly in the disk picture.

    Returns ``(S, spectrum)`` with ``S`` adjoint-by-Cayley symplectic such
    that the state equals the image of the thermal representative
    :math:`A_\xi` under the doubled fractional action of ``S``. Implemented
    by transporting to the covariance picture, using :func:`williamson`,
    and conjugating back.
    """
    point = a if isinstance(a, DoubleDiskPoint) else DoubleDiskPoint(a, tol)
    if not point.is_state():
        raise InvariantViolation("double-disk point is not a state")
    cov = disk_to_cov(point, tol)
    s_real, spectrum = williamson(real_from_complex(cov), tol)
    return abc_conjugate(s_real), spectrum
