"""Dense complex linear-algebra substrate.

Fixed structural matrices (lifted Paulis, symplectic form, Cayley matrix),
tolerance-governed structural predicates, and guarded factorizations used by
every higher layer. All checks are relative to ``max(1, ||M||)`` so the same
tolerances work for matrices of any magnitude.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InvariantViolation, SingularMatrixError

__all__ = [
    "Tolerances",
    "DEFAULT_TOL",
    "as_complex_matrix",
    "frozen",
    "pauli_lifted",
    "omega",
    "cayley_gamma",
    "abc_conjugate",
    "abc_unconjugate",
    "is_abc",
    "is_hermitian",
    "is_symmetric",
    "hermitize",
    "hermitian_sqrt_pd",
    "hermitian_inv_sqrt_pd",
    "psd_check",
    "min_eigenvalue",
    "condition_estimate",
    "guarded_inverse",
]


@dataclass(frozen=True)
class Tolerances:
    """Numerical policy knobs.

    atol: absolute tolerance for equality-type residuals.
    psd_slack: eigenvalue floor factor for positive-(semi)definiteness.
    cond_max: refuse inverses whose condition estimate exceeds this bound.
    """

    atol: float = 1e-9
    psd_slack: float = 1e-9
    cond_max: float = 1e12

    def __post_init__(self):
        for name in ("atol", "psd_slack", "cond_max"):
            if not getattr(self, name) > 0:
                raise InvariantViolation(f"tolerance {name} must be strictly positive")


DEFAULT_TOL = Tolerances()


def as_complex_matrix(m, shape=None, name="matrix") -> np.ndarray:
    """Coerce to a 2-d complex ndarray with finite entries."""
    arr = np.asarray(m, dtype=complex)
    if arr.ndim != 2:
        raise InvariantViolation(f"{name} must be 2-dimensional, got shape {arr.shape}")
    if shape is not None and arr.shape != tuple(shape):
        raise InvariantViolation(f"{name} must have shape {tuple(shape)}, got {arr.shape}")
    if not np.all(np.isfinite(arr.real)) or not np.all(np.isfinite(arr.imag)):
        raise InvariantViolation(f"{name} contains non-finite entries")
    return arr


def frozen(arr: np.ndarray) -> np.ndarray:
    """Return a read-only copy; stored values are immutable by convention."""
    out = np.array(arr)
    out.flags.writeable = False
    return out


def _even_blocks(m, name="matrix") -> int:
    arr = np.asarray(m)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise InvariantViolation(f"{name} must be square, got shape {arr.shape}")
    if arr.shape[0] % 2:
        raise InvariantViolation(f"{name} must have even dimension, got {arr.shape[0]}")
    return arr.shape[0] // 2


def pauli_lifted(axis: str, m: int) -> np.ndarray:
    r"""The ``2m x 2m`` block Pauli matrix :math:`\sigma_\mu \otimes I_m`.

    ``pauli_lifted("y", n)`` equals :math:`-i\Omega` for the standard
    symplectic form, and is Hermitian, which is what makes the semigroup
    matrix inequalities well posed.
    """
    if m < 1:
        raise InvariantViolation("block size must be at least 1")
    eye = np.eye(m)
    zero = np.zeros((m, m))
    if axis == "x":
        return np.block([[zero, eye], [eye, zero]]).astype(complex)
    if axis == "y":
        return np.block([[zero, -1j * eye], [1j * eye, zero]])
    if axis == "z":
        return np.block([[eye, zero], [zero, -eye]]).astype(complex)
    raise InvariantViolation(f"unknown Pauli axis {axis!r}")


def omega(n: int) -> np.ndarray:
    """The real standard symplectic form ``[[0, I], [-I, 0]]``."""
    if n < 1:
        raise InvariantViolation("mode count must be at least 1")
    eye = np.eye(n)
    zero = np.zeros((n, n))
    return np.block([[zero, eye], [-eye, zero]])


def cayley_gamma(n: int) -> np.ndarray:
    r"""The unitary ``2n x 2n`` Cayley matrix with blocks
    :math:`\tfrac{1}{\sqrt2}\begin{pmatrix}I & -iI\\ I & iI\end{pmatrix}`.

    Conjugation by this matrix transports real phase-space objects to their
    complex (annihilation/creation) form.
    """
    if n < 1:
        raise InvariantViolation("mode count must be at least 1")
    eye = np.eye(n)
    return np.block([[eye, -1j * eye], [eye, 1j * eye]]) / np.sqrt(2)


def abc_conjugate(m) -> np.ndarray:
    """Adjoint-by-Cayley: ``Gamma @ M @ Gamma^dag`` for a ``2n x 2n`` matrix."""
    arr = as_complex_matrix(m)
    n = _even_blocks(arr)
    g = cayley_gamma(n)
    return g @ arr @ g.conj().T


def abc_unconjugate(m) -> np.ndarray:
    """Inverse of :func:`abc_conjugate`: ``Gamma^dag @ M @ Gamma``."""
    arr = as_complex_matrix(m)
    n = _even_blocks(arr)
    g = cayley_gamma(n)
    return g.conj().T @ arr @ g


def _norm(m) -> float:
    return float(np.linalg.norm(m, 2))


def is_abc(m, tol: Tolerances = DEFAULT_TOL) -> bool:
    r"""Whether ``M`` is adjoint-by-Cayley real: :math:`M\sigma_x = \sigma_x M^*`.

    Equivalent to ``M`` being the Cayley conjugate of a real matrix, i.e.
    having the block form ``[[a, b], [conj(b), conj(a)]]``.
    """
    arr = as_complex_matrix(m)
    n = _even_blocks(arr)
    sx = pauli_lifted("x", n)
    resid = _norm(arr @ sx - sx @ arr.conj())
    return resid <= tol.atol * max(1.0, _norm(arr))


def is_hermitian(m, tol: Tolerances = DEFAULT_TOL) -> bool:
    arr = as_complex_matrix(m)
    return _norm(arr - arr.conj().T) <= tol.atol * max(1.0, _norm(arr))


def is_symmetric(m, tol: Tolerances = DEFAULT_TOL) -> bool:
    arr = as_complex_matrix(m)
    return _norm(arr - arr.T) <= tol.atol * max(1.0, _norm(arr))


def hermitize(m, tol: Tolerances = DEFAULT_TOL, name="matrix") -> np.ndarray:
    """Symmetrize ``(M + M^dag)/2`` after checking Hermiticity within tol."""
    arr = as_complex_matrix(m, name=name)
    resid = _norm(arr - arr.conj().T)
    if resid > tol.atol * max(1.0, _norm(arr)):
        raise InvariantViolation(f"{name} is not Hermitian", residual=resid)
    return (arr + arr.conj().T) / 2


def min_eigenvalue(m, tol: Tolerances = DEFAULT_TOL, name="matrix") -> float:
    """Smallest eigenvalue of a (hermitized) matrix."""
    return float(np.linalg.eigvalsh(hermitize(m, tol, name)).min())


def psd_check(m, strict: bool = False, tol: Tolerances = DEFAULT_TOL, name="matrix") -> bool:
    """Positive-(semi)definiteness with an explicit eigenvalue floor.

    Non-strict admits eigenvalues down to ``-psd_slack * max(1, ||M||)``;
    strict requires them above ``+psd_slack * max(1, ||M||)``. Uses a full
    Hermitian eigendecomposition so near-boundary inputs produce a signed
    slack decision rather than a factorization failure.
    """
    arr = hermitize(m, tol, name)
    floor = tol.psd_slack * max(1.0, _norm(arr))
    lam_min = float(np.linalg.eigvalsh(arr).min())
    if strict:
        return lam_min > floor
    return lam_min >= -floor


def hermitian_sqrt_pd(m, tol: Tolerances = DEFAULT_TOL, name="matrix") -> np.ndarray:
    """Principal square root of a Hermitian positive-definite matrix."""
    arr = hermitize(m, tol, name)
    w, v = np.linalg.eigh(arr)
    floor = tol.psd_slack * max(1.0, _norm(arr))
    if w.min() <= floor:
        raise InvariantViolation(
            f"{name} is not positive definite", residual=float(w.min())
        )
    return (v * np.sqrt(w)) @ v.conj().T


def hermitian_inv_sqrt_pd(m, tol: Tolerances = DEFAULT_TOL, name="matrix") -> np.ndarray:
    """Inverse principal square root of a Hermitian positive-definite matrix."""
    arr = hermitize(m, tol, name)
    w, v = np.linalg.eigh(arr)
    floor = tol.psd_slack * max(1.0, _norm(arr))
    if w.min() <= floor:
        raise InvariantViolation(
            f"{name} is not positive definite", residual=float(w.min())
        )
    return (v / np.sqrt(w)) @ v.conj().T


def condition_estimate(m) -> float:
    """2-norm condition estimate; ``inf`` when the matrix is exactly singular."""
    try:
        c = float(np.linalg.cond(np.asarray(m, dtype=complex), 2))
    except np.linalg.LinAlgError:
        return float("inf")
    return c if np.isfinite(c) else float("inf")


def guarded_inverse(m, tol: Tolerances = DEFAULT_TOL, context="matrix") -> np.ndarray:
    """Inverse guarded by the condition bound; fails loudly, never silently."""
    arr = as_complex_matrix(m, name=context)
    cond = condition_estimate(arr)
    if cond >= tol.cond_max:
        raise SingularMatrixError(f"{context} not invertible", cond)
    return np.linalg.inv(arr)
