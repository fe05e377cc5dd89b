"""Gaussian states and deterministic Gaussian channels in Siegel-disk coordinates.

Multimode Gaussian states are represented by symmetric matrices inside
Siegel symmetric domains and evolved by matrix linear fractional (Moebius)
transformations; the classical covariance-matrix picture is carried along
as an independent cross-validation oracle.
"""

from .errors import InvariantViolation, NumericalError, SchemaError, SingularMatrixError
from .linalg import (
    DEFAULT_TOL,
    Tolerances,
    abc_conjugate,
    abc_unconjugate,
    cayley_gamma,
    hermitian_sqrt_pd,
    is_abc,
    omega,
    pauli_lifted,
    psd_check,
)
from .siegel import (
    BlockMap,
    DiskPoint,
    HalfPlanePoint,
    MembershipReport,
    ProjectiveStack,
    cayley_point,
    classify,
    compose_check,
    in_siegel_disk,
    in_upper_half_plane,
    mobius,
    shear_element,
    stack_apply,
    stack_normalize,
    vacuum_to_disk,
)
from .states import (
    ComplexCovariance,
    DoubleDiskPoint,
    RealCovariance,
    StateMembership,
    ThermalSpectrum,
    complex_from_real,
    cov_to_disk,
    disk_to_cov,
    disk_williamson,
    pure_embed,
    real_from_complex,
    state_membership,
    symplectic_spectrum,
    thermal_disk,
    williamson,
)
from .channels import (
    ChannelValidity,
    EmbeddedDiskMap,
    GaussianChannelXY,
    additive_block,
    channel_apply_cov,
    channel_apply_disk,
    channel_compose,
    channel_embed,
    channel_validate,
    coordinate_change_inverse,
    coordinate_change_map,
    embed_boxplus,
    kraus_embed,
    lift_oplus,
    loss_channel,
    multiplicative_block,
    noise_channel,
    unitary_channel,
    vacuum_preserving,
)
from .bargmann import (
    GaussKernel,
    HusimiGaussian,
    PureFB,
    QuadratureReport,
    fb_pure_eval,
    gauss_kernel_eval,
    husimi_eval,
    husimi_from_cov,
    husimi_kernel_identity_residual,
    kernel_to_matrix,
    matrix_to_kernel,
    mixed_kernel_eval,
    quadrature_apply,
)
from .harness import (
    SUITES,
    TrialReport,
    equivalence_run,
    rand_channel,
    rand_disk_point,
    rand_disk_semigroup,
    rand_double_disk,
    rand_gauss_kernel,
    rand_state,
    rand_symplectic,
    rand_uhp_semigroup,
    trial_rng,
)

__version__ = "0.1.0"
