import numpy as np
import pytest

from app.services.channels import (
    apply_unitary_mixture,
    basis_measurement,
    computational_basis_measurement,
    make_measurement,
    make_unitary_mixture,
    measure,
    measurement_trace_identity,
    mix_with_flags,
    random_projective_measurement,
    twirl_subsystem_B,
    weyl_mixture,
)
from app.services.entropy import logical_entropy
from app.services.errors import DimensionError, MeasurementError, ParameterError, SplitError
from app.services.linalg import BipartiteSplit, Subsystem, identity, partial_trace, tensor_product
from app.services.qstate import make_density, make_ensemble, random_density, random_unitary


# TEIL 1 - Messungen
def test_measure_plus_state():
    plus = make_density(np.full((2, 2), 0.5))
    post = measure(plus, computational_basis_measurement(2))
    np.testing.assert_allclose(post.matrix, identity(2) / 2, atol=1e-15)
    assert logical_entropy(plus) == pytest.approx(0.0, abs=1e-15)
    assert logical_entropy(post) == pytest.approx(0.5)


def test_measure_diagonal_state_unchanged(diag_three_quarters):
    post = measure(diag_three_quarters, computational_basis_measurement(2))
    np.testing.assert_allclose(post.matrix, diag_three_quarters.matrix, atol=1e-15)


def test_measure_dimension_mismatch(qubit_mixed):
    with pytest.raises(DimensionError):
        measure(qubit_mixed, computational_basis_measurement(3))


def test_make_measurement_incomplete():
    with pytest.raises(MeasurementError):
        make_measurement([np.diag([1.0, 0.0])])


def test_make_measurement_not_orthogonal():
    plus = np.full((2, 2), 0.5)
    with pytest.raises(MeasurementError):
        make_measurement([np.diag([1.0, 0.0]), plus, np.diag([0.0, 1.0]) - plus])


def test_basis_measurement_rejects_composition():
    with pytest.raises(MeasurementError):
        basis_measurement(identity(3), [1, 1])


@pytest.mark.parametrize("dim", [1, 2, 4, 8])
def test_random_measurement_is_valid(rng, dim):
    m = random_projective_measurement(dim, rng)
    assert 1 <= len(m.projectors) <= dim
    np.testing.assert_allclose(sum(m.projectors), identity(dim), atol=1e-10)


@pytest.mark.parametrize("seed", range(10))
def test_measurement_trace_identity(seed):
    rng = np.random.default_rng(seed)
    rho = random_density(4, 1 + seed % 4, seed)
    cross, post = measurement_trace_identity(rho, random_projective_measurement(4, rng))
    assert abs(cross - post) < 1e-10


def test_measure_keeps_trace(rng):
    rho = random_density(5, 3, 3)
    post = measure(rho, random_projective_measurement(5, rng))
    assert float(np.trace(post.matrix).real) == pytest.approx(1.0, abs=1e-12)


# TEIL 2 - Flag-Register
def test_mix_with_flags_single_component(diag_three_quarters):
    flagged = mix_with_flags(make_ensemble([1.0], [diag_three_quarters]))
    np.testing.assert_allclose(flagged.matrix, diag_three_quarters.matrix)
    assert flagged.split == BipartiteSplit(dim_a=2, dim_b=1)


def test_mix_with_flags_marginals():
    components = [random_density(3, 2, seed) for seed in range(3)]
    weights = [0.2, 0.3, 0.5]
    ensemble = make_ensemble(weights, components)
    flagged = mix_with_flags(ensemble)
    np.testing.assert_allclose(partial_trace(flagged.matrix, flagged.split, Subsystem.A), np.diag(weights), atol=1e-15)
    np.testing.assert_allclose(
        partial_trace(flagged.matrix, flagged.split, Subsystem.B), ensemble.mixture().matrix, atol=1e-15
    )


# TEIL 3 - Weyl-Twirl
def test_weyl_mixture_qubit():
    mixture = weyl_mixture(2)
    assert len(mixture.unitaries) == 4
    np.testing.assert_allclose(mixture.weights, [0.25] * 4)
    np.testing.assert_allclose(mixture.unitaries[0], identity(2))
    np.testing.assert_allclose(mixture.unitaries[1], np.diag([1.0, -1.0]), atol=1e-15)
    np.testing.assert_allclose(mixture.unitaries[2], np.array([[0.0, 1.0], [1.0, 0.0]]))


def test_weyl_mixture_rejects_small_b():
    with pytest.raises(ParameterError):
        weyl_mixture(1)


@pytest.mark.parametrize("b", [2, 3, 5])
def test_weyl_twirl_of_arbitrary_matrix(rng, b):
    m = rng.standard_normal((b, b)) + 1j * rng.standard_normal((b, b))
    twirled = apply_unitary_mixture(m, weyl_mixture(b))
    np.testing.assert_allclose(twirled, np.trace(m) * identity(b) / b, atol=1e-10)


def test_twirl_ket_zero(ket_zero):
    twirled = apply_unitary_mixture(ket_zero.matrix, weyl_mixture(2))
    np.testing.assert_allclose(twirled, identity(2) / 2, atol=1e-15)


def test_twirl_bell_state(bell_state):
    twirled = twirl_subsystem_B(bell_state)
    np.testing.assert_allclose(twirled.matrix, identity(4) / 4, atol=1e-15)


def test_twirl_product_state(diag_three_quarters):
    sigma = random_density(3, 2, 4)
    joint = make_density(tensor_product(diag_three_quarters.matrix, sigma.matrix))
    twirled = twirl_subsystem_B(joint, BipartiteSplit(dim_a=2, dim_b=3))
    expected = np.kron(diag_three_quarters.matrix, identity(3) / 3)
    np.testing.assert_allclose(twirled.matrix, expected, atol=1e-12)


def test_twirl_trivial_b_keeps_state():
    # tr_B ρ ⊗ I/1 = ρ
    rho = random_density(3, 2, 11)
    twirled = twirl_subsystem_B(rho, BipartiteSplit(dim_a=3, dim_b=1))
    np.testing.assert_allclose(twirled.matrix, rho.matrix, atol=1e-15)
    assert twirled.split == BipartiteSplit(dim_a=3, dim_b=1)


def test_twirl_needs_split():
    with pytest.raises(SplitError):
        twirl_subsystem_B(random_density(4, 4, 1))


def test_make_unitary_mixture_rejects_non_unitary():
    with pytest.raises(ParameterError):
        make_unitary_mixture([1.0], [np.diag([1.0, 2.0])])


def test_make_unitary_mixture(rng):
    u = random_unitary(3, rng)
    mixture = make_unitary_mixture([0.5, 0.5], [identity(3), u])
    rho = random_density(3, 3, 8)
    result = apply_unitary_mixture(rho.matrix, mixture)
    np.testing.assert_allclose(result, 0.5 * rho.matrix + 0.5 * u @ rho.matrix @ u.conj().T, atol=1e-14)
