"""Deterministic randomized generators and cross-picture equivalence suites.

Every generator draws from a per-trial stream derived from ``(seed, index)``,
so reports are byte-identical across runs and independent of scheduling.
Generators construct valid objects by parametrization (normal form,
exponential map), never by rejection on positivity tests, and the suites
deliberately mix in near-boundary stress cases.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np
from scipy.linalg import expm

from .errors import InvariantViolation
from .linalg import (
    DEFAULT_TOL,
    Tolerances,
    abc_conjugate,
    cayley_gamma,
    omega,
    pauli_lifted,
)
from .siegel import BlockMap, DiskPoint, cayley_point, classify, in_siegel_disk, in_upper_half_plane, mobius
from .states import (
    ComplexCovariance,
    DoubleDiskPoint,
    cov_to_disk,
    disk_to_cov,
    state_membership,
)
from .channels import (
    GaussianChannelXY,
    channel_apply_cov,
    channel_apply_disk,
    channel_compose,
    channel_embed,
    embed_boxplus,
)
from .bargmann import GaussKernel, kernel_to_matrix, matrix_to_kernel

__all__ = [
    "trial_rng",
    "rand_symplectic",
    "rand_state",
    "rand_channel",
    "rand_disk_point",
    "rand_double_disk",
    "rand_disk_semigroup",
    "rand_uhp_semigroup",
    "rand_gauss_kernel",
    "TrialReport",
    "SUITES",
    "equivalence_run",
]

_STREAM_SALT = 0x5D15C  # fixed salt so library streams never collide with user seeds


def trial_rng(seed: int, index: int = 0) -> np.random.Generator:
    """Independent deterministic stream for trial ``index`` of run ``seed``."""
    return np.random.default_rng([_STREAM_SALT, int(seed) & 0xFFFFFFFFFFFFFFFF, int(index)])


def _rng(seed) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return trial_rng(int(seed))


def rand_symplectic(n: int, seed) -> np.ndarray:
    """Random real symplectic matrix ``exp(Omega H)`` with ``H`` symmetric."""
    rng = _rng(seed)
    h = rng.uniform(-0.5, 0.5, (2 * n, 2 * n))
    h = (h + h.T) / 2
    return expm(omega(n) @ h)


def rand_state(n: int, seed, nu_max: float = 4.0, tol: Tolerances = DEFAULT_TOL) -> ComplexCovariance:
    """Random state covariance built from its normal form (uncertainty holds by construction)."""
    if nu_max < 1.0:
        raise InvariantViolation("nu_max must be at least 1")
    rng = _rng(seed)
    nu = rng.uniform(1.0, nu_max, n)
    s = abc_conjugate(rand_symplectic(n, rng))
    sigma = 0.5 * s @ np.diag(np.concatenate([nu, nu])) @ s.conj().T
    return ComplexCovariance((sigma + sigma.conj().T) / 2, tol)


def rand_channel(n: int, seed, tol: Tolerances = DEFAULT_TOL) -> GaussianChannelXY:
    """Random valid channel: condition-bounded ABC ``X`` plus just-enough ABC noise.

    ``Y`` is the positive part ``|H|`` of the deficit
    ``H = (X sigma_z X^dag - sigma_z)/2`` plus a strictly positive isotropic
    margin, which is adjoint-by-Cayley and dominates the deficit, so the
    channel always validates.
    """
    rng = _rng(seed)
    q1, _ = np.linalg.qr(rng.normal(size=(2 * n, 2 * n)))
    q2, _ = np.linalg.qr(rng.normal(size=(2 * n, 2 * n)))
    singulars = rng.uniform(0.4, 2.0, 2 * n)
    x = abc_conjugate(q1 @ np.diag(singulars) @ q2)
    sz = pauli_lifted("z", n)
    deficit = 0.5 * (x @ sz @ x.conj().T - sz)
    deficit = (deficit + deficit.conj().T) / 2
    w, v = np.linalg.eigh(deficit)
    y = (v * np.abs(w)) @ v.conj().T + rng.uniform(0.05, 0.5) * np.eye(2 * n)
    return GaussianChannelXY(x, (y + y.conj().T) / 2, tol)


def rand_disk_point(n: int, seed, radius: float = 0.9, tol: Tolerances = DEFAULT_TOL) -> DiskPoint:
    """Random symmetric point with operator norm at most ``radius`` (< 1)."""
    rng = _rng(seed)
    m = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    m = (m + m.T) / 2
    m *= radius * rng.uniform(0.1, 1.0) / np.linalg.norm(m, 2)
    return DiskPoint(m, tol)


def rand_double_disk(
    n: int, seed, nu_range=(1.0, 3.0), tol: Tolerances = DEFAULT_TOL
) -> DoubleDiskPoint:
    """Random adjoint-by-Cayley double-disk point from a normal-form covariance.

    ``nu_range`` below 1 produces uncertainty-principle violators that still
    sit inside the doubled disk, exactly the inputs the characterization
    suite needs.
    """
    rng = _rng(seed)
    lo, hi = nu_range
    if lo <= 0:
        raise InvariantViolation("nu_range must be positive")
    nu = rng.uniform(lo, hi, n)
    s = abc_conjugate(rand_symplectic(n, rng))
    sigma = 0.5 * s @ np.diag(np.concatenate([nu, nu])) @ s.conj().T
    cov = ComplexCovariance((sigma + sigma.conj().T) / 2, tol)
    return cov_to_disk(cov, tol)


def rand_disk_semigroup(n: int, seed, tol: Tolerances = DEFAULT_TOL) -> BlockMap:
    """Random element of the disk-preserving semigroup via the kernel dictionary."""
    rng = _rng(seed)
    m = rng.normal(size=(2 * n, 2 * n)) + 1j * rng.normal(size=(2 * n, 2 * n))
    m = (m + m.T) / 2
    m *= 0.8 * rng.uniform(0.2, 1.0) / np.linalg.norm(m, 2)
    # keep the B block comfortably invertible
    m[:n, n:] += 0.5 * np.eye(n)
    m[n:, :n] += 0.5 * np.eye(n)
    m *= 0.95 / max(1.0, np.linalg.norm(m, 2))
    return kernel_to_matrix(GaussKernel(m, 1.0, tol), tol)


def rand_uhp_semigroup(n: int, seed, tol: Tolerances = DEFAULT_TOL) -> BlockMap:
    """Random element of the half-plane-preserving semigroup (Cayley conjugate)."""
    g = cayley_gamma(n)
    t = rand_disk_semigroup(n, seed, tol)
    return BlockMap(g.conj().T @ t.matrix @ g)


def rand_gauss_kernel(
    n: int, seed, norm_max: float = 0.8, tol: Tolerances = DEFAULT_TOL
) -> GaussKernel:
    """Random symmetric kernel strictly inside the doubled disk with invertible B."""
    rng = _rng(seed)
    m = rng.normal(size=(2 * n, 2 * n)) + 1j * rng.normal(size=(2 * n, 2 * n))
    m = (m + m.T) / 2
    m *= norm_max * rng.uniform(0.3, 1.0) / np.linalg.norm(m, 2)
    m[:n, n:] += 0.4 * np.eye(n)
    m[n:, :n] += 0.4 * np.eye(n)
    m *= min(1.0, norm_max / np.linalg.norm(m, 2))
    return GaussKernel(m, 1.0, tol)


@dataclass(frozen=True)
class TrialReport:
    """One line of an equivalence run; failing payloads reproduce from (seed, trial)."""

    suite: str
    trial: int
    n: int
    max_residual: float
    passed: bool
    payload: dict | None = None

    def to_json(self) -> str:
        record = {
            "suite": self.suite,
            "trial": self.trial,
            "n": self.n,
            "max_residual": self.max_residual,
            "passed": self.passed,
        }
        if self.payload is not None:
            record["payload"] = self.payload
        return json.dumps(record, sort_keys=True)


def _echo(matrix) -> list:
    arr = np.asarray(matrix, dtype=complex)
    return [[[float(v.real), float(v.imag)] for v in row] for row in arr]


def _suite_channel_square(n, rng, tol):
    sigma = rand_state(n, rng, tol=tol)
    ch = rand_channel(n, rng, tol=tol)
    via_cov = cov_to_disk(channel_apply_cov(ch, sigma, tol), tol)
    via_disk = channel_apply_disk(channel_embed(ch, tol), cov_to_disk(sigma, tol), tol)
    resid = float(np.linalg.norm(via_cov.a - via_disk.a, 2))
    ok = resid <= 1e-9 and via_disk.is_state()
    payload = None
    if not ok:
        payload = {"sigma": _echo(sigma.sigma), "X": _echo(ch.x), "Y": _echo(ch.y)}
    return resid, ok, payload


def _suite_unitary_congruence(n, rng, tol):
    s = abc_conjugate(rand_symplectic(n, rng))
    sigma = rand_state(n, rng, tol=tol)
    a = cov_to_disk(sigma, tol)
    moved = mobius(embed_boxplus(s), a.a, tol)
    lhs = disk_to_cov(DoubleDiskPoint((moved + moved.T) / 2, tol), tol).sigma
    rhs = s @ sigma.sigma @ s.conj().T
    resid = float(np.linalg.norm(lhs - rhs, 2))
    sz = pauli_lifted("z", n)
    up = rhs - sz / 2
    lam = float(np.linalg.eigvalsh((up + up.conj().T) / 2).min())
    ok = resid <= 1e-9 and lam >= -tol.psd_slack * max(1.0, float(np.linalg.norm(up, 2)))
    payload = {"S": _echo(s), "sigma": _echo(sigma.sigma)} if not ok else None
    return resid, ok, payload


def _suite_composition(n, rng, tol):
    ch1 = rand_channel(n, rng, tol=tol)
    ch2 = rand_channel(n, rng, tol=tol)
    composed = channel_compose(ch2, ch1, tol)
    prod = channel_embed(ch2, tol).matrix @ channel_embed(ch1, tol).matrix
    resid_embed = float(np.linalg.norm(prod - channel_embed(composed, tol).matrix, 2))
    resid_xy = max(
        float(np.linalg.norm(composed.x - ch2.x @ ch1.x, 2)),
        float(np.linalg.norm(composed.y - (ch2.x @ ch1.y @ ch2.x.conj().T + ch2.y), 2)),
    )
    resid = max(resid_embed, resid_xy)
    ok = resid_embed <= 1e-9 and resid_xy <= 1e-10
    payload = None
    if not ok:
        payload = {"X1": _echo(ch1.x), "Y1": _echo(ch1.y), "X2": _echo(ch2.x), "Y2": _echo(ch2.y)}
    return resid, ok, payload


def _suite_characterization(n, rng, tol, stress=False):
    if stress:
        # every symplectic eigenvalue within 1e-6 of the pure boundary
        nu_range = (1.0, 1.0 + 1e-6)
    else:
        nu_range = (0.3, 3.0)
    point = rand_double_disk(n, rng, nu_range=nu_range, tol=tol)
    report = state_membership(point.a, tol)
    lam_w = report.residuals["w_min_eig"]
    lam_up = report.residuals["up_min_eig"]
    disagree = report.w_psd != report.up_fractional
    # only a disagreement with both smallest eigenvalues clear of their own
    # slack floors counts: inside the band the sign is numerically undefined
    outside_band = abs(lam_w) > report.residuals["w_floor"] and abs(lam_up) > report.residuals[
        "up_floor"
    ]
    ok = not (disagree and outside_band)
    resid = float(min(abs(lam_w), abs(lam_up))) if disagree else 0.0
    payload = {"A": _echo(point.a)} if not ok else None
    return resid, ok, payload


def _boundary_disk_point(n, rng, norm, tol):
    m = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    m = (m + m.T) / 2
    return DiskPoint(norm * m / np.linalg.norm(m, 2), tol)


def _suite_disk_preservation(n, rng, tol, stress=False):
    t = rand_disk_semigroup(n, rng, tol)
    t2 = rand_disk_semigroup(n, rng, tol)
    if stress:
        k = _boundary_disk_point(n, rng, 0.999, tol)
    else:
        k = rand_disk_point(n, rng, radius=0.9, tol=tol)
    image = mobius(t, k.k, tol)
    ok = in_siegel_disk(image, tol, strict=False)
    lhs = mobius(t2, image, tol)
    rhs = mobius(t2.matrix @ t.matrix, k.k, tol)
    resid = float(np.linalg.norm(lhs - rhs, 2))
    ok = ok and resid <= 1e-9

    u = rand_uhp_semigroup(n, rng, tol)
    u2 = rand_uhp_semigroup(n, rng, tol)
    if stress:
        z_point = _boundary_disk_point(n, rng, 0.999, tol)
    else:
        z_point = rand_disk_point(n, rng, radius=0.9, tol=tol)
    z = cayley_point(z_point.k, "disk_to_uhp", tol)
    image_z = mobius(u, z, tol)
    ok = ok and in_upper_half_plane(image_z, tol, strict=False)
    lhs_z = mobius(u2, image_z, tol)
    rhs_z = mobius(u2.matrix @ u.matrix, z, tol)
    resid_z = float(np.linalg.norm(lhs_z - rhs_z, 2))
    ok = ok and resid_z <= 1e-9
    resid = max(resid, resid_z)
    payload = {"T": _echo(t.matrix), "K": _echo(k.k)} if not ok else None
    return resid, ok, payload


def _suite_homomorphism_roundtrip(n, rng, tol):
    kernel = rand_gauss_kernel(n, rng, tol=tol)
    t = kernel_to_matrix(kernel, tol)
    back = matrix_to_kernel(t, tol)
    resid_a = float(np.linalg.norm(back.a2n - kernel.a2n, 2))

    t0 = rand_disk_semigroup(n, rng, tol)
    kernel0 = matrix_to_kernel(t0, tol)
    t_back = kernel_to_matrix(kernel0, tol)
    resid_t = float(np.linalg.norm(t_back.matrix - t0.matrix, 2))
    resid = max(resid_a, resid_t)
    ok = resid <= 1e-10 and classify(t, tol).sp_plus_disk
    payload = {"A2n": _echo(kernel.a2n)} if not ok else None
    return resid, ok, payload


SUITES = {
    "channel_square": _suite_channel_square,
    "unitary_congruence": _suite_unitary_congruence,
    "composition": _suite_composition,
    "characterization": _suite_characterization,
    "disk_preservation": _suite_disk_preservation,
    "homomorphism_roundtrip": _suite_homomorphism_roundtrip,
}

_STRESS_SUITES = ("characterization", "disk_preservation")
_STRESS_EVERY = 10  # every tenth trial exercises the near-boundary band


def equivalence_run(
    suite: str,
    trials: int,
    seed: int,
    n_list=(1, 2, 3),
    tol: Tolerances = DEFAULT_TOL,
) -> list[TrialReport]:
    """Run a named equivalence suite over deterministic draws.

    Trial ``i`` uses mode count ``n_list[i % len(n_list)]`` and the stream
    ``trial_rng(seed, i)``; identical arguments give byte-identical reports.
    """
    if suite not in SUITES:
        raise InvariantViolation(
            f"unknown suite {suite!r}; choose one of {sorted(SUITES)}"
        )
    if trials < 1:
        raise InvariantViolation("trials must be at least 1")
    fn = SUITES[suite]
    n_list = tuple(int(v) for v in n_list)
    reports = []
    for i in range(trials):
        n = n_list[i % len(n_list)]
        rng = trial_rng(seed, i)
        if suite in _STRESS_SUITES:
            stress = (i % _STRESS_EVERY) == _STRESS_EVERY - 1
            resid, ok, payload = fn(n, rng, tol, stress=stress)
        else:
            resid, ok, payload = fn(n, rng, tol)
        reports.append(
            TrialReport(suite=suite, trial=i, n=n, max_residual=resid, passed=ok, payload=payload)
        )
    return reports
