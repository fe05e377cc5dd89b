import numpy as np
import pytest

from siegeldisk import (
    ComplexCovariance,
    InvariantViolation,
    abc_conjugate,
    additive_block,
    channel_apply_cov,
    channel_apply_disk,
    channel_compose,
    channel_embed,
    channel_validate,
    classify,
    coordinate_change_inverse,
    coordinate_change_map,
    cov_to_disk,
    disk_to_cov,
    embed_boxplus,
    kraus_embed,
    lift_oplus,
    loss_channel,
    mobius,
    multiplicative_block,
    noise_channel,
    pauli_lifted,
    pure_embed,
    shear_element,
    thermal_disk,
    unitary_channel,
    vacuum_preserving,
)
from siegeldisk.channels import GaussianChannelXY
from siegeldisk.harness import (
    rand_channel,
    rand_disk_point,
    rand_disk_semigroup,
    rand_state,
    rand_symplectic,
    trial_rng,
)


def thermal_cov(nu, n=1):
    return ComplexCovariance(0.5 * nu * np.eye(2 * n))


def test_lift_oplus_examples():
    assert np.allclose(lift_oplus(np.eye(2)), np.eye(4))
    assert np.allclose(lift_oplus(np.array([[1j]])), np.diag([1j, -1j]))


def test_double_lift_conjugation_pattern():
    z = np.array([[0.3 + 0.7j]])
    twice = lift_oplus(lift_oplus(z))
    expected = np.diag([z[0, 0], z[0, 0].conj(), z[0, 0].conj(), z[0, 0]])
    assert np.allclose(twice, expected)


def test_embed_boxplus_identity():
    assert np.allclose(embed_boxplus(np.eye(4)), np.eye(8))


@pytest.mark.parametrize("n", [1, 2])
def test_embed_boxplus_preserves_memberships(n):
    s = abc_conjugate(rand_symplectic(n, trial_rng(30, n)))
    assert classify(embed_boxplus(s)).sp_abc
    t = rand_disk_semigroup(n, trial_rng(31, n))
    report = classify(embed_boxplus(t))
    assert report.sp_plus_disk and report.sp_complex


def test_embed_boxplus_doubles_the_pure_update():
    for i in range(20):
        rng = trial_rng(32, i)
        n = int(rng.integers(1, 4))
        t = rand_disk_semigroup(n, rng)
        k = rand_disk_point(n, rng)
        direct = lift_oplus(mobius(t, k.k))
        doubled = mobius(embed_boxplus(t), pure_embed(k).a)
        assert np.linalg.norm(direct - doubled, 2) <= 1e-10


def test_channel_validate_identity():
    report = channel_validate(loss_channel(1.0, 1))
    assert report.valid and report.unscaled_valid


def test_channel_validate_loss_dual_report():
    # eigenvalues of the half-normalized form are {1 - eta, 0}; the unscaled
    # form has a -(1 - eta)/2 eigenvalue, so the two predicates split
    report = channel_validate(loss_channel(0.5, 1))
    assert report.valid
    assert not report.unscaled_valid
    assert report.residual >= -1e-12


def test_channel_validate_amplifier_invalid():
    ch = GaussianChannelXY(2.0 * np.eye(2), np.zeros((2, 2)))
    assert not channel_validate(ch).valid


def test_channel_apply_cov_identity_and_loss():
    sigma = thermal_cov(3.0)
    assert np.allclose(channel_apply_cov(loss_channel(1.0, 1), sigma).sigma, sigma.sigma)
    out = channel_apply_cov(loss_channel(0.5, 1), sigma)
    assert np.allclose(out.sigma, 1.0 * np.eye(2), atol=1e-14)


def test_channel_apply_cov_vacuum_fixed_point():
    out = channel_apply_cov(loss_channel(0.37, 1), thermal_cov(1.0))
    assert np.allclose(out.sigma, 0.5 * np.eye(2), atol=1e-14)


def test_channel_apply_cov_refuses_invalid():
    bad = GaussianChannelXY(2.0 * np.eye(2), np.zeros((2, 2)))
    with pytest.raises(InvariantViolation):
        channel_apply_cov(bad, thermal_cov(1.0))


def test_channel_embed_identity():
    assert np.allclose(channel_embed(loss_channel(1.0, 1)).matrix, np.eye(4), atol=1e-14)


def test_channel_embed_loss_blocks(sx):
    # substituting X = sqrt(eta) I, Y = (1-eta)/2 I into the block formulas
    embedded = channel_embed(loss_channel(0.5, 1))
    root2 = np.sqrt(2.0)
    assert np.allclose(embedded.e11, root2 * np.eye(2), atol=1e-14)
    assert np.allclose(embedded.e12, -(root2 / 2) * np.asarray(sx), atol=1e-14)
    assert np.allclose(embedded.e21, np.zeros((2, 2)), atol=1e-14)
    assert np.allclose(embedded.e22, (root2 / 2) * np.eye(2), atol=1e-14)


def test_channel_embed_unitary_equals_boxplus():
    for i in range(30):
        rng = trial_rng(33, i)
        n = int(rng.integers(1, 4))
        s = abc_conjugate(rand_symplectic(n, rng))
        embedded = channel_embed(unitary_channel(s))
        assert np.linalg.norm(embedded.matrix - embed_boxplus(s), 2) <= 1e-10


def test_channel_embed_matches_factorization():
    for i in range(500):
        rng = trial_rng(34, i)
        n = int(rng.integers(1, 4))
        ch = rand_channel(n, rng)
        factored = (
            coordinate_change_map(n)
            @ additive_block(ch.y)
            @ multiplicative_block(ch.x)
            @ coordinate_change_inverse(n)
        )
        assert np.linalg.norm(channel_embed(ch).matrix - factored, 2) <= 1e-10


def test_coordinate_change_inverse_is_exact():
    for n in (1, 2, 3):
        prod = coordinate_change_map(n) @ coordinate_change_inverse(n)
        assert np.allclose(prod, np.eye(4 * n), atol=1e-15)


def test_embedded_maps_satisfy_the_block_pattern():
    for i in range(20):
        rng = trial_rng(35, i)
        n = int(rng.integers(1, 4))
        embedded = channel_embed(rand_channel(n, rng))
        assert embedded.matches_abc_pattern()
        assert classify(embedded.matrix).sp_plus_disk


def test_channel_apply_disk_identity():
    point = thermal_disk([2.0])
    out = channel_apply_disk(channel_embed(loss_channel(1.0, 1)), point)
    assert np.allclose(out.a, point.a, atol=1e-14)


def test_channel_apply_disk_loss_on_thermal(sx):
    # loss eta=0.5 on nu=3 gives nu'=2, i.e. xi' = 1/3
    out = channel_apply_disk(channel_embed(loss_channel(0.5, 1)), thermal_disk([3.0]))
    assert np.allclose(out.a, (1.0 / 3.0) * np.asarray(sx), atol=1e-12)
    via_cov = cov_to_disk(channel_apply_cov(loss_channel(0.5, 1), thermal_cov(3.0)))
    assert np.allclose(out.a, via_cov.a, atol=1e-12)


def test_vacuum_preservation_iff_upper_triangular():
    for i in range(30):
        rng = trial_rng(36, i)
        n = int(rng.integers(1, 4))
        x = rand_channel(n, rng).x
        y_vac = (np.eye(2 * n) - x @ x.conj().T) / 2
        ch = GaussianChannelXY(x, y_vac)
        assert vacuum_preserving(ch)
        assert np.linalg.norm(channel_embed(ch).e21, 2) <= 1e-10
        origin = np.zeros((2 * n, 2 * n))
        moved = channel_apply_disk(channel_embed(ch), origin)
        assert np.linalg.norm(moved.a, 2) <= 1e-10


def test_vacuum_preserving_examples():
    assert vacuum_preserving(loss_channel(1.0, 1))
    assert vacuum_preserving(loss_channel(0.3, 2))
    assert not vacuum_preserving(noise_channel(0.3 * np.eye(2)))


def test_channel_compose_with_identity():
    ch = rand_channel(2, trial_rng(37))
    composed = channel_compose(ch, loss_channel(1.0, 2))
    assert np.allclose(composed.x, ch.x) and np.allclose(composed.y, ch.y, atol=1e-14)


def test_channel_compose_loss_closed_form():
    eta1, eta2 = 0.6, 0.7
    composed = channel_compose(loss_channel(eta2, 1), loss_channel(eta1, 1))
    assert np.allclose(composed.x, np.sqrt(eta1 * eta2) * np.eye(2), atol=1e-14)
    assert np.allclose(composed.y, ((1 - eta1 * eta2) / 2) * np.eye(2), atol=1e-14)


def test_channel_compose_matches_embedded_product():
    for i in range(30):
        rng = trial_rng(38, i)
        n = int(rng.integers(1, 4))
        ch1 = rand_channel(n, rng)
        ch2 = rand_channel(n, rng)
        prod = channel_embed(ch2).matrix @ channel_embed(ch1).matrix
        embedded = channel_embed(channel_compose(ch2, ch1)).matrix
        assert np.linalg.norm(prod - embedded, 2) <= 1e-9


def test_channel_compose_dimension_mismatch():
    with pytest.raises(InvariantViolation):
        channel_compose(loss_channel(0.5, 1), loss_channel(0.5, 2))


def test_loss_channel_guards():
    with pytest.raises(InvariantViolation):
        loss_channel(0.0, 1)
    with pytest.raises(InvariantViolation):
        loss_channel(1.5, 1)


def test_noise_channel_examples(sx):
    assert np.allclose(channel_embed(noise_channel(np.zeros((2, 2)))).matrix, np.eye(4))
    y = 0.3 * np.eye(2)
    embedded = channel_embed(noise_channel(y))
    expected = np.block(
        [[np.eye(2) + y, -y @ np.asarray(sx)], [y @ np.asarray(sx), np.eye(2) - y]]
    )
    assert np.allclose(embedded.matrix, expected, atol=1e-14)
    with pytest.raises(InvariantViolation):
        noise_channel(-0.1 * np.eye(2))


def test_unitary_channel_requires_symplectic():
    with pytest.raises(InvariantViolation):
        unitary_channel(2.0 * np.eye(2))


def test_kraus_embed_identity_and_rejection():
    assert np.allclose(kraus_embed(np.eye(2)).matrix, np.eye(4))
    with pytest.raises(InvariantViolation):
        kraus_embed(shear_element(0.3, 1))  # preserves the half-plane, not the disk


def test_kraus_embed_keeps_pure_states_pure():
    gamma_shear = abc_conjugate(shear_element(0.2, 1).matrix)
    embedded = kraus_embed(gamma_shear)
    for i in range(10):
        k = rand_disk_point(1, trial_rng(39, i))
        out = mobius(embedded.matrix, pure_embed(k).a)
        assert np.linalg.norm(out[:1, 1:], 2) <= 1e-10  # W block stays zero


def test_kraus_embed_boundary_three_way_agreement():
    s = abc_conjugate(rand_symplectic(2, trial_rng(40)))
    a = kraus_embed(s).matrix
    b = embed_boxplus(s)
    c = channel_embed(unitary_channel(s)).matrix
    assert np.linalg.norm(a - b, 2) <= 1e-12
    assert np.linalg.norm(a - c, 2) <= 1e-10


def test_unitary_congruence_and_up_transport():
    for i in range(30):
        rng = trial_rng(41, i)
        n = int(rng.integers(1, 4))
        s = abc_conjugate(rand_symplectic(n, rng))
        sigma = rand_state(n, rng)
        moved = channel_apply_disk(kraus_embed(s), cov_to_disk(sigma))
        lhs = disk_to_cov(moved).sigma
        rhs = s @ sigma.sigma @ s.conj().T
        assert np.linalg.norm(lhs - rhs, 2) <= 1e-9
        sz = pauli_lifted("z", n)
        up = rhs - sz / 2
        assert np.linalg.eigvalsh((up + up.conj().T) / 2).min() >= -1e-9


def test_valid_channels_preserve_the_state_space():
    for i in range(40):
        rng = trial_rng(42, i)
        n = int(rng.integers(1, 4))
        sigma = rand_state(n, rng)
        ch = rand_channel(n, rng)
        out = channel_apply_disk(channel_embed(ch), cov_to_disk(sigma))
        assert out.is_state()


def test_channel_xy_constructor_guards():
    with pytest.raises(InvariantViolation):
        GaussianChannelXY(np.zeros((2, 2)), np.zeros((2, 2)))  # singular X
    with pytest.raises(InvariantViolation):
        GaussianChannelXY(1j * np.eye(2), np.zeros((2, 2)))  # not adjoint-by-Cayley
