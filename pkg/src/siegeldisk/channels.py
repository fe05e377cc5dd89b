"""Deterministic Gaussian channels and their doubled-disk fractional action.

A channel is the affine covariance update ``sigma -> X sigma X^dag + Y``.
Its disk representative is the ``4n x 4n`` acting matrix

    Ebar = 1/2 [[X + X^{-dag} + 2 Y X^{-dag},      (X - X^{-dag} - 2 Y X^{-dag}) sx],
                [(X* - X^{-T} + 2 Y* X^{-T}) sx,    X* + X^{-T} - 2 Y* X^{-T}     ]]

whose fractional action reproduces the channel on state representatives, and
which factorizes as ``Lambda @ L_Y @ B_X @ Lambda^{-1}`` through the
covariance-to-disk coordinate change. Composition of channels is matrix
multiplication of the embedded matrices.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import InvariantViolation
from .linalg import (
    DEFAULT_TOL,
    Tolerances,
    as_complex_matrix,
    condition_estimate,
    frozen,
    guarded_inverse,
    hermitize,
    is_abc,
    pauli_lifted,
)
from .siegel import BlockMap, classify, mobius
from .states import ComplexCovariance, DoubleDiskPoint

__all__ = [
    "GaussianChannelXY",
    "ChannelValidity",
    "EmbeddedDiskMap",
    "lift_oplus",
    "embed_boxplus",
    "channel_validate",
    "channel_apply_cov",
    "channel_embed",
    "channel_apply_disk",
    "channel_compose",
    "vacuum_preserving",
    "loss_channel",
    "noise_channel",
    "unitary_channel",
    "kraus_embed",
    "coordinate_change_map",
    "coordinate_change_inverse",
    "additive_block",
    "multiplicative_block",
]


@dataclass(frozen=True)
class GaussianChannelXY:
    """Channel data ``(X, Y)`` acting on complex covariances as ``X sigma X^dag + Y``.

    Both matrices must be adjoint-by-Cayley (i.e. Cayley conjugates of real
    matrices), ``Y`` Hermitian, ``X`` invertible. Physical validity is *not*
    enforced here: invalid pairs stay constructible for negative tests and
    are refused at application time.
    """

    x: np.ndarray
    y: np.ndarray
    tol: Tolerances = field(default=DEFAULT_TOL, repr=False, compare=False)

    def __post_init__(self):
        x = as_complex_matrix(self.x, name="channel X")
        if x.shape[0] != x.shape[1] or x.shape[0] % 2:
            raise InvariantViolation("channel X must be square with even dimension")
        y = hermitize(as_complex_matrix(self.y, shape=x.shape, name="channel Y"), self.tol, "channel Y")
        if not is_abc(x, self.tol):
            raise InvariantViolation("channel X is not adjoint-by-Cayley")
        if not is_abc(y, self.tol):
            raise InvariantViolation("channel Y is not adjoint-by-Cayley")
        cond = condition_estimate(x)
        if cond >= self.tol.cond_max:
            raise InvariantViolation(
                f"channel X is not invertible (condition estimate {cond:.3e}); "
                "singular-X channels are unsupported"
            )
        object.__setattr__(self, "x", frozen(x))
        object.__setattr__(self, "y", frozen(y))

    @property
    def n(self) -> int:
        return self.x.shape[0] // 2


@dataclass(frozen=True)
class ChannelValidity:
    """Dual physicality report for a channel.

    ``valid`` uses ``Y + sigma_z/2 - X sigma_z X^dag / 2 >= 0``, the scaling
    consistent with the vacuum-``I/2`` convention used throughout (it accepts
    the loss channel and matches the vacuum-preservation identity
    ``Y = (1 - X X^dag)/2``). ``unscaled_valid`` evaluates the unscaled
    inequality ``X sigma_z X^dag + Y >= sigma_z`` for comparison; the two
    deliberately disagree on e.g. pure loss. ``residual`` is the smallest
    eigenvalue of the first form (negative means invalid).
    """

    valid: bool
    residual: float
    unscaled_valid: bool


@dataclass(frozen=True)
class EmbeddedDiskMap:
    """A ``4n x 4n`` acting matrix on the doubled disk, with provenance."""

    matrix: np.ndarray
    provenance: str = "raw"

    def __post_init__(self):
        arr = as_complex_matrix(self.matrix, name="embedded map")
        if arr.shape[0] != arr.shape[1] or arr.shape[0] % 4:
            raise InvariantViolation("embedded map must be square with dimension 4n")
        if self.provenance not in ("from_channel", "from_unitary", "from_kraus", "raw"):
            raise InvariantViolation(f"unknown provenance {self.provenance!r}")
        object.__setattr__(self, "matrix", frozen(arr))

    @property
    def n(self) -> int:
        """Mode count (matrix dimension is ``4n``)."""
        return self.matrix.shape[0] // 4

    def _block(self, i, j) -> np.ndarray:
        h = self.matrix.shape[0] // 2
        return self.matrix[i * h : (i + 1) * h, j * h : (j + 1) * h]

    @property
    def e11(self) -> np.ndarray:
        return self._block(0, 0)

    @property
    def e12(self) -> np.ndarray:
        return self._block(0, 1)

    @property
    def e21(self) -> np.ndarray:
        return self._block(1, 0)

    @property
    def e22(self) -> np.ndarray:
        return self._block(1, 1)

    def abc_pattern_residual(self) -> float:
        """Deviation from the eight-matrix block pattern
        ``E (sigma_x)_oplus* = (sigma_x)_oplus* E*`` that every embedded
        channel obeys."""
        sxo = lift_oplus(pauli_lifted("x", self.n))
        return float(np.linalg.norm(self.matrix @ sxo - sxo @ self.matrix.conj(), 2))

    def matches_abc_pattern(self, tol: Tolerances = DEFAULT_TOL) -> bool:
        scale = max(1.0, float(np.linalg.norm(self.matrix, 2)))
        return self.abc_pattern_residual() <= tol.atol * scale


def lift_oplus(z) -> np.ndarray:
    """Direct sum with the conjugate: ``Z ⊕ conj(Z)``."""
    arr = as_complex_matrix(z, name="lift input")
    if arr.shape[0] != arr.shape[1]:
        raise InvariantViolation("lift input must be square")
    m = arr.shape[0]
    out = np.zeros((2 * m, 2 * m), dtype=complex)
    out[:m, :m] = arr
    out[m:, m:] = arr.conj()
    return out


def embed_boxplus(t) -> np.ndarray:
    """Blockwise conjugate-sum embedding of a ``2n x 2n`` acting matrix into ``4n x 4n``.

    Each block of ``T = [[g, d], [z, e]]`` is replaced by its ``⊕*`` lift.
    Group and semigroup membership survive the embedding (the defining block
    relations lift block-by-block).
    """
    arr = t.matrix if isinstance(t, BlockMap) else as_complex_matrix(t, name="acting matrix")
    if arr.shape[0] != arr.shape[1] or arr.shape[0] % 2:
        raise InvariantViolation("acting matrix must be square with even dimension")
    m = arr.shape[0] // 2
    return np.block(
        [
            [lift_oplus(arr[:m, :m]), lift_oplus(arr[:m, m:])],
            [lift_oplus(arr[m:, :m]), lift_oplus(arr[m:, m:])],
        ]
    )


def channel_validate(ch: GaussianChannelXY, tol: Tolerances = DEFAULT_TOL) -> ChannelValidity:
    """Evaluate both physicality predicates; see :class:`ChannelValidity`."""
    sz = pauli_lifted("z", ch.n)
    xszx = ch.x @ sz @ ch.x.conj().T
    half_form = ch.y + sz / 2 - xszx / 2
    half_form = (half_form + half_form.conj().T) / 2
    lam = float(np.linalg.eigvalsh(half_form).min())
    floor = tol.psd_slack * max(1.0, float(np.linalg.norm(half_form, 2)))

    literal = xszx + ch.y - sz
    literal = (literal + literal.conj().T) / 2
    lam_lit = float(np.linalg.eigvalsh(literal).min())
    floor_lit = tol.psd_slack * max(1.0, float(np.linalg.norm(literal, 2)))

    return ChannelValidity(
        valid=lam >= -floor, residual=lam, unscaled_valid=lam_lit >= -floor_lit
    )


def channel_apply_cov(
    ch: GaussianChannelXY, sigma, tol: Tolerances = DEFAULT_TOL
) -> ComplexCovariance:
    """Covariance-picture update ``sigma' = X sigma X^dag + Y`` (valid channels only)."""
    cov = sigma if isinstance(sigma, ComplexCovariance) else ComplexCovariance(sigma, tol)
    if cov.n != ch.n:
        raise InvariantViolation("channel and state mode counts differ")
    report = channel_validate(ch, tol)
    if not report.valid:
        raise InvariantViolation(
            "channel violates the uncertainty-principle inequality", residual=report.residual
        )
    out = ch.x @ cov.sigma @ ch.x.conj().T + ch.y
    return ComplexCovariance((out + out.conj().T) / 2, tol)


def channel_embed(ch: GaussianChannelXY, tol: Tolerances = DEFAULT_TOL) -> EmbeddedDiskMap:
    """Build the doubled-disk representative of a channel from its ``(X, Y)`` data.

    Equals ``Lambda @ L_Y @ B_X @ Lambda^{-1}`` (see the factorization
    helpers below); for a symplectic ``X`` and ``Y = 0`` it reduces to the
    blockwise embedding :func:`embed_boxplus`.
    """
    sx = pauli_lifted("x", ch.n)
    x = ch.x
    y = ch.y
    x_inv = guarded_inverse(x, tol, context="channel X")
    x_invdag = x_inv.conj().T
    x_invt = x_inv.T
    e11 = x + x_invdag + 2 * y @ x_invdag
    e12 = (x - x_invdag - 2 * y @ x_invdag) @ sx
    e21 = (x.conj() - x_invt + 2 * y.conj() @ x_invt) @ sx
    e22 = x.conj() + x_invt - 2 * y.conj() @ x_invt
    matrix = 0.5 * np.block([[e11, e12], [e21, e22]])
    return EmbeddedDiskMap(matrix, provenance="from_channel")


def channel_apply_disk(
    e: EmbeddedDiskMap, a, tol: Tolerances = DEFAULT_TOL
) -> DoubleDiskPoint:
    """Disk-picture update ``A' = phi_Ebar(A)`` on a state representative."""
    point = a if isinstance(a, DoubleDiskPoint) else DoubleDiskPoint(a, tol)
    arr = e.matrix if isinstance(e, EmbeddedDiskMap) else as_complex_matrix(e)
    if arr.shape[0] != 2 * point.a.shape[0]:
        raise InvariantViolation("embedded map and state dimensions differ")
    out = mobius(arr, point.a, tol)
    out = (out + out.T) / 2
    return DoubleDiskPoint(out, tol)


def channel_compose(
    ch2: GaussianChannelXY, ch1: GaussianChannelXY, tol: Tolerances = DEFAULT_TOL
) -> GaussianChannelXY:
    """Channel composition ``ch2 ∘ ch1``: ``(X2 X1, X2 Y1 X2^dag + Y2)``.

    The embedded matrices multiply accordingly:
    ``channel_embed(compose) == channel_embed(ch2) @ channel_embed(ch1)``.
    """
    if ch1.n != ch2.n:
        raise InvariantViolation("cannot compose channels with different mode counts")
    x = ch2.x @ ch1.x
    y = ch2.x @ ch1.y @ ch2.x.conj().T + ch2.y
    return GaussianChannelXY(x, (y + y.conj().T) / 2, tol)


def vacuum_preserving(ch: GaussianChannelXY, tol: Tolerances = DEFAULT_TOL) -> bool:
    """Whether the channel fixes the vacuum: ``Y = (1 - X X^dag)/2``.

    Equivalent to the embedded matrix being block upper-triangular
    (vanishing ``E21``), since the vacuum sits at the disk origin.
    """
    target = (np.eye(2 * ch.n) - ch.x @ ch.x.conj().T) / 2
    resid = float(np.linalg.norm(ch.y - target, 2))
    scale = max(1.0, float(np.linalg.norm(ch.y, 2)), float(np.linalg.norm(target, 2)))
    return resid <= tol.atol * scale


def loss_channel(eta: float, n: int, tol: Tolerances = DEFAULT_TOL) -> GaussianChannelXY:
    """Pure loss with transmission ``eta`` in ``(0, 1]`` on every mode."""
    if not 0.0 < eta <= 1.0:
        raise InvariantViolation("loss transmission must lie in (0, 1]")
    eye = np.eye(2 * n)
    return GaussianChannelXY(np.sqrt(eta) * eye, ((1.0 - eta) / 2.0) * eye, tol)


def noise_channel(y0, tol: Tolerances = DEFAULT_TOL) -> GaussianChannelXY:
    """Additive classical noise: ``X = I`` and ``Y = Y0 >= 0``."""
    y = hermitize(as_complex_matrix(y0, name="noise matrix"), tol, "noise matrix")
    lam = float(np.linalg.eigvalsh(y).min())
    if lam < -tol.psd_slack * max(1.0, float(np.linalg.norm(y, 2))):
        raise InvariantViolation("noise matrix must be positive semidefinite", residual=lam)
    return GaussianChannelXY(np.eye(y.shape[0]), y, tol)


def unitary_channel(s, tol: Tolerances = DEFAULT_TOL) -> GaussianChannelXY:
    """The deterministic channel of a Gaussian unitary: ``(S, 0)`` for symplectic ``S``."""
    arr = s.matrix if isinstance(s, BlockMap) else as_complex_matrix(s, name="symplectic matrix")
    report = classify(arr, tol)
    if not report.sp_abc:
        raise InvariantViolation("unitary channel requires an adjoint-by-Cayley symplectic matrix")
    return GaussianChannelXY(arr, np.zeros_like(arr), tol)


def kraus_embed(t, tol: Tolerances = DEFAULT_TOL) -> EmbeddedDiskMap:
    """Embed a single-Kraus (disk-semigroup) element into the doubled disk.

    The image acts blockwise, so pure-state embeddings stay block-diagonal:
    pure states map to pure states.
    """
    arr = t.matrix if isinstance(t, BlockMap) else as_complex_matrix(t, name="acting matrix")
    report = classify(arr, tol)
    if not report.sp_plus_disk:
        raise InvariantViolation("matrix is not in the disk-preserving semigroup")
    provenance = "from_unitary" if report.sp_abc else "from_kraus"
    return EmbeddedDiskMap(embed_boxplus(arr), provenance=provenance)


def coordinate_change_map(n: int) -> np.ndarray:
    """The fixed ``4n x 4n`` acting matrix of the covariance-to-disk coordinate change."""
    sx = pauli_lifted("x", n)
    eye = np.eye(2 * n)
    return np.block([[eye / 2, eye], [-sx / 2, sx]])


def coordinate_change_inverse(n: int) -> np.ndarray:
    """Closed-form inverse of :func:`coordinate_change_map`."""
    sx = pauli_lifted("x", n)
    eye = np.eye(2 * n)
    return np.block([[eye, -sx], [eye / 2, sx / 2]])


def additive_block(y) -> np.ndarray:
    """Acting matrix of the additive update ``sigma -> sigma + Y``: ``[[1, 0], [Y, 1]]``."""
    arr = as_complex_matrix(y, name="additive block")
    eye = np.eye(arr.shape[0])
    zero = np.zeros_like(arr)
    return np.block([[eye, zero], [arr, eye]])


def multiplicative_block(x, tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    """Acting matrix of ``sigma -> X sigma X^dag``: ``diag(X^{-dag}, X)``."""
    arr = as_complex_matrix(x, name="multiplicative block")
    inv = guarded_inverse(arr, tol, context="multiplicative block")
    zero = np.zeros_like(arr)
    return np.block([[inv.conj().T, zero], [zero, arr]])
