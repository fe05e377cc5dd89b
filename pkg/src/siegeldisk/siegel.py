"""Siegel domains and matrix linear fractional transformations.

Pure Gaussian states live in the Siegel upper half-plane (symmetric ``Z``
with positive-definite imaginary part) or, after the Cayley change of
coordinates, in the Siegel disk (symmetric ``K`` with ``K^dag K < 1``).
Dynamics acts by the fractional map

    phi_T(Z) = (D Z + C) (B Z + A)^{-1}

for an acting matrix ``T = [[A, B], [C, D]]`` (the "DCBA" ordering). The
map composes by matrix multiplication of the acting matrices and is only
partially defined; singular denominators surface as structured errors
carrying the condition estimate.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import InvariantViolation, SingularMatrixError
from .linalg import (
    DEFAULT_TOL,
    Tolerances,
    as_complex_matrix,
    cayley_gamma,
    condition_estimate,
    frozen,
    hermitian_inv_sqrt_pd,
    pauli_lifted,
    psd_check,
)

__all__ = [
    "BlockMap",
    "DiskPoint",
    "HalfPlanePoint",
    "ProjectiveStack",
    "MembershipReport",
    "mobius",
    "compose_check",
    "cayley_point",
    "cayley_block_map",
    "classify",
    "shear_element",
    "vacuum_to_disk",
    "stack_apply",
    "stack_normalize",
    "in_siegel_disk",
    "in_upper_half_plane",
]


@dataclass(frozen=True)
class BlockMap:
    """A ``2m x 2m`` acting matrix with named ``m x m`` blocks A, B, C, D."""

    matrix: np.ndarray

    def __post_init__(self):
        arr = as_complex_matrix(self.matrix, name="acting matrix")
        if arr.shape[0] % 2:
            raise InvariantViolation("acting matrix must have even dimension")
        object.__setattr__(self, "matrix", frozen(arr))

    @classmethod
    def from_blocks(cls, a, b, c, d) -> "BlockMap":
        return cls(np.block([[np.asarray(a), np.asarray(b)], [np.asarray(c), np.asarray(d)]]))

    @property
    def n(self) -> int:
        return self.matrix.shape[0] // 2

    @property
    def a(self) -> np.ndarray:
        return self.matrix[: self.n, : self.n]

    @property
    def b(self) -> np.ndarray:
        return self.matrix[: self.n, self.n :]

    @property
    def c(self) -> np.ndarray:
        return self.matrix[self.n :, : self.n]

    @property
    def d(self) -> np.ndarray:
        return self.matrix[self.n :, self.n :]

    def __matmul__(self, other) -> "BlockMap":
        return BlockMap(self.matrix @ _acting(other))


def _acting(t) -> np.ndarray:
    """Accept a BlockMap or a raw even-dimensional square array."""
    if isinstance(t, BlockMap):
        return t.matrix
    arr = as_complex_matrix(t, name="acting matrix")
    if arr.shape[0] != arr.shape[1] or arr.shape[0] % 2:
        raise InvariantViolation("acting matrix must be square with even dimension")
    return arr


def _point(z, name="point") -> np.ndarray:
    arr = as_complex_matrix(z, name=name)
    if arr.shape[0] != arr.shape[1]:
        raise InvariantViolation(f"{name} must be square, got {arr.shape}")
    return arr


def in_siegel_disk(k, tol: Tolerances = DEFAULT_TOL, strict: bool = True) -> bool:
    """Disk membership: symmetric and ``I - K^dag K`` positive definite."""
    arr = _point(k, "disk point")
    if np.linalg.norm(arr - arr.T, 2) > tol.atol * max(1.0, np.linalg.norm(arr, 2)):
        return False
    gram = np.eye(arr.shape[0]) - arr.conj().T @ arr
    return psd_check(gram, strict=strict, tol=tol, name="disk gram")


def in_upper_half_plane(z, tol: Tolerances = DEFAULT_TOL, strict: bool = True) -> bool:
    """Half-plane membership: symmetric and ``Im Z`` positive definite."""
    arr = _point(z, "half-plane point")
    if np.linalg.norm(arr - arr.T, 2) > tol.atol * max(1.0, np.linalg.norm(arr, 2)):
        return False
    im = (arr - arr.conj().T) / 2j
    return psd_check(im, strict=strict, tol=tol, name="imaginary part")


@dataclass(frozen=True)
class DiskPoint:
    """A pure-state representative ``K`` in the Siegel disk."""

    k: np.ndarray
    tol: Tolerances = field(default=DEFAULT_TOL, repr=False, compare=False)

    def __post_init__(self):
        arr = _point(self.k, "disk point")
        if not in_siegel_disk(arr, self.tol):
            raise InvariantViolation("matrix is not strictly inside the Siegel disk")
        object.__setattr__(self, "k", frozen(arr))

    @property
    def n(self) -> int:
        return self.k.shape[0]


@dataclass(frozen=True)
class HalfPlanePoint:
    """A pure-state representative ``Z`` in the Siegel upper half-plane."""

    z: np.ndarray
    tol: Tolerances = field(default=DEFAULT_TOL, repr=False, compare=False)

    def __post_init__(self):
        arr = _point(self.z, "half-plane point")
        if not in_upper_half_plane(arr, self.tol):
            raise InvariantViolation("matrix is not strictly inside the upper half-plane")
        object.__setattr__(self, "z", frozen(arr))

    @property
    def n(self) -> int:
        return self.z.shape[0]


@dataclass(frozen=True)
class ProjectiveStack:
    """Homogeneous stack ``[P; Q]`` regarded modulo right GL(n) action."""

    p: np.ndarray
    q: np.ndarray

    def __post_init__(self):
        p = _point(self.p, "stack block P")
        q = as_complex_matrix(self.q, shape=p.shape, name="stack block Q")
        object.__setattr__(self, "p", frozen(p))
        object.__setattr__(self, "q", frozen(q))


def mobius(t, z, tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    r"""Apply the fractional transformation ``phi_T(Z) = (DZ + C)(BZ + A)^{-1}``.

    Args:
        t: acting matrix (``BlockMap`` or ``2m x 2m`` array).
        z: ``m x m`` point.

    Raises:
        SingularMatrixError: when ``BZ + A`` is not invertible at working
            precision; the error carries the condition estimate.
    """
    arr = _acting(t)
    zz = _point(z)
    m = zz.shape[0]
    if arr.shape[0] != 2 * m:
        raise InvariantViolation(
            f"acting matrix of dimension {arr.shape[0]} does not match point of dimension {m}"
        )
    a, b = arr[:m, :m], arr[:m, m:]
    c, d = arr[m:, :m], arr[m:, m:]
    den = b @ zz + a
    cond = condition_estimate(den)
    if cond >= tol.cond_max:
        raise SingularMatrixError("denominator not invertible", cond)
    num = d @ zz + c
    # solve X @ den = num without forming the inverse
    return np.linalg.solve(den.T, num.T).T


def compose_check(t2, t1, z, tol: Tolerances = DEFAULT_TOL) -> tuple[np.ndarray, np.ndarray]:
    """Both sides of the composition law at ``z``: ``phi_T2(phi_T1(z))`` and ``phi_{T2 T1}(z)``."""
    lhs = mobius(t2, mobius(t1, z, tol), tol)
    rhs = mobius(_acting(t2) @ _acting(t1), z, tol)
    return lhs, rhs


def cayley_block_map(n: int) -> BlockMap:
    """The Cayley matrix viewed as an acting block map on ``n x n`` points."""
    return BlockMap(cayley_gamma(n))


def cayley_point(m, direction: str, tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    """Change coordinates between the half-plane and the disk.

    ``direction="uhp_to_disk"`` maps ``Z`` to ``K = phi_Gamma(Z)``;
    ``"disk_to_uhp"`` is its inverse. The input must lie in the stated
    source domain.
    """
    arr = _point(m)
    n = arr.shape[0]
    gamma = cayley_block_map(n)
    if direction == "uhp_to_disk":
        if not in_upper_half_plane(arr, tol):
            raise InvariantViolation("input is not in the upper half-plane")
        return mobius(gamma, arr, tol)
    if direction == "disk_to_uhp":
        if not in_siegel_disk(arr, tol):
            raise InvariantViolation("input is not in the Siegel disk")
        return mobius(gamma.matrix.conj().T, arr, tol)
    raise InvariantViolation(f"unknown direction {direction!r}")


@dataclass(frozen=True)
class MembershipReport:
    """Group/semigroup membership flags with the residuals that decided them.

    boundary_saturated is true when the element saturates the semigroup
    inequality of a domain it preserves (disk or half-plane form).
    """

    sp_real: bool
    sp_complex: bool
    sp_abc: bool
    sp_plus_uhp: bool
    sp_plus_disk: bool
    boundary_saturated: bool
    residuals: dict

    def __str__(self):
        flags = {
            name: getattr(self, name)
            for name in (
                "sp_real",
                "sp_complex",
                "sp_abc",
                "sp_plus_uhp",
                "sp_plus_disk",
                "boundary_saturated",
            )
        }
        return f"MembershipReport({flags}, residuals={self.residuals})"


def classify(t, tol: Tolerances = DEFAULT_TOL) -> MembershipReport:
    r"""Classify an acting matrix against the symplectic groups and semigroups.

    Conditions tested (all to tolerance, residuals reported):

    - complex symplectic: :math:`T^T \sigma_y T = \sigma_y`;
    - real symplectic: complex symplectic with real entries;
    - adjoint-by-Cayley symplectic: complex symplectic and
      :math:`T\sigma_x = \sigma_x T^*`;
    - half-plane semigroup: complex symplectic and
      :math:`T^\dagger \sigma_y T - \sigma_y \succeq 0`;
    - disk semigroup: complex symplectic and
      :math:`T^\dagger \sigma_z T - \sigma_z \succeq 0`.
    """
    arr = _acting(t)
    n = arr.shape[0] // 2
    sx = pauli_lifted("x", n)
    sy = pauli_lifted("y", n)
    sz = pauli_lifted("z", n)
    norm = float(np.linalg.norm(arr, 2))
    scale1 = max(1.0, norm)
    scale2 = max(1.0, norm**2)

    r_complex = float(np.linalg.norm(arr.T @ sy @ arr - sy, 2)) / scale2
    r_real = float(np.linalg.norm(arr.imag, 2)) / scale1
    r_abc = float(np.linalg.norm(arr @ sx - sx @ arr.conj(), 2)) / scale1

    m_disk = arr.conj().T @ sz @ arr - sz
    m_uhp = arr.conj().T @ sy @ arr - sy
    m_disk = (m_disk + m_disk.conj().T) / 2
    m_uhp = (m_uhp + m_uhp.conj().T) / 2
    lam_disk = float(np.linalg.eigvalsh(m_disk).min())
    lam_uhp = float(np.linalg.eigvalsh(m_uhp).min())
    sat_disk = float(np.linalg.norm(m_disk, 2)) / scale2
    sat_uhp = float(np.linalg.norm(m_uhp, 2)) / scale2

    sp_complex = r_complex <= tol.atol
    sp_real = sp_complex and r_real <= tol.atol
    sp_abc = sp_complex and r_abc <= tol.atol
    floor = tol.psd_slack * max(1.0, float(np.linalg.norm(m_disk, 2)))
    sp_plus_disk = sp_complex and lam_disk >= -floor
    floor_uhp = tol.psd_slack * max(1.0, float(np.linalg.norm(m_uhp, 2)))
    sp_plus_uhp = sp_complex and lam_uhp >= -floor_uhp
    boundary = (sp_plus_disk and sat_disk <= tol.atol) or (sp_plus_uhp and sat_uhp <= tol.atol)

    return MembershipReport(
        sp_real=sp_real,
        sp_complex=sp_complex,
        sp_abc=sp_abc,
        sp_plus_uhp=sp_plus_uhp,
        sp_plus_disk=sp_plus_disk,
        boundary_saturated=boundary,
        residuals={
            "complex_symplectic": r_complex,
            "real_entries": r_real,
            "abc": r_abc,
            "disk_semigroup_min_eig": lam_disk,
            "uhp_semigroup_min_eig": lam_uhp,
            "disk_saturation": sat_disk,
            "uhp_saturation": sat_uhp,
        },
    )


def shear_element(eps: float, n: int) -> BlockMap:
    """The shear ``[[I, 0], [i*eps*I, I]]``; in the half-plane semigroup iff ``eps >= 0``.

    Its fractional action is ``Z -> Z + i*eps*I``, the damping (for positive
    ``eps``) of a wavefunction by a Gaussian envelope.
    """
    eye = np.eye(n)
    zero = np.zeros((n, n))
    return BlockMap.from_blocks(eye, zero, 1j * float(eps) * eye, eye)


def vacuum_to_disk(k, tol: Tolerances = DEFAULT_TOL) -> BlockMap:
    r"""The explicit group element moving the vacuum to ``K``.

    Returns ``S_K = [[alpha, beta], [conj(beta), conj(alpha)]]`` with
    :math:`\alpha = (I - K^\dagger K)^{-1/2}` and :math:`\beta^* = K\alpha`,
    so that ``mobius(S_K, 0) == K``. Combined with inverses this makes the
    disk action transitive.
    """
    point = k if isinstance(k, DiskPoint) else DiskPoint(_point(k, "disk point"), tol)
    arr = point.k
    alpha = hermitian_inv_sqrt_pd(np.eye(arr.shape[0]) - arr.conj().T @ arr, tol)
    beta_star = arr @ alpha
    return BlockMap.from_blocks(alpha, beta_star.conj(), beta_star, alpha.conj())


def stack_apply(t, stack: ProjectiveStack) -> ProjectiveStack:
    """Left action ``[P; Q] -> [A P + B Q; C P + D Q]`` on homogeneous stacks."""
    arr = _acting(t)
    m = stack.p.shape[0]
    if arr.shape[0] != 2 * m:
        raise InvariantViolation("acting matrix does not match stack dimension")
    a, b = arr[:m, :m], arr[:m, m:]
    c, d = arr[m:, :m], arr[m:, m:]
    return ProjectiveStack(a @ stack.p + b @ stack.q, c @ stack.p + d @ stack.q)


def stack_normalize(stack: ProjectiveStack, tol: Tolerances = DEFAULT_TOL) -> ProjectiveStack:
    """Canonical representative ``[I; Q P^{-1}]``; defined only for invertible P."""
    cond = condition_estimate(stack.p)
    if cond >= tol.cond_max:
        raise SingularMatrixError("no canonical representative: P not invertible", cond)
    q = np.linalg.solve(stack.p.T, stack.q.T).T
    return ProjectiveStack(np.eye(stack.p.shape[0]), q)
