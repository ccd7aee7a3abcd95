import numpy as np
import pytest

from nonclass.closed_forms import (
    SeparableEnsemble,
    WernerParams,
    d_closed_2xN,
    geometric_discord_2x2,
    horodecki_m,
    is_maximally_entangled_by_d,
    lower_bound_2xN,
    max_nonclassical_rank2_check,
    normal_form_2x2,
    optimal_ru_unitary_2xN,
    pure_state_objective,
    rank2_delta,
    rank2_separable_ensemble,
    separable_d_given_u,
    separable_upper_bound,
    upper_bound_2xN,
    werner_d,
    werner_d_given_u,
    werner_discord,
    werner_state,
)
from nonclass.core import kron, partial_trace, random_density, random_haar_unitary
from nonclass.families import bell, random_maximally_mixed_a, random_separable_ensemble, schmidt_pure
from nonclass.fano import fano_decompose
from nonclass.measure import d_given_u, ru_from_bloch


# --- werner states ----------------------------------------------------------------


def test_werner_params_validation():
    with pytest.raises(ValueError):
        WernerParams(1, 0.5)
    with pytest.raises(ValueError):
        WernerParams(3, 1.5)


@pytest.mark.parametrize("d", [2, 3, 4])
def test_werner_state_swap_symmetric(d):
    rho = werner_state(WernerParams(d, 0.3))
    u = random_haar_unitary(d, seed=d)
    w = kron(u.matrix, u.matrix)
    np.testing.assert_allclose(w @ rho.matrix @ w.conj().T, rho.matrix, atol=1e-12)


def test_werner_entanglement_threshold_d2():
    # positive partial transpose exactly when the symmetric weight reaches 1/2
    for p, entangled in ((0.2, True), (0.49, True), (0.5, False), (0.9, False)):
        rho = werner_state(WernerParams(2, p)).matrix.reshape(2, 2, 2, 2)
        pt = rho.transpose(0, 3, 2, 1).reshape(4, 4)
        assert (np.linalg.eigvalsh(pt).min() < -1e-12) == entangled, p


def test_werner_d_known_values():
    assert werner_d(WernerParams(2, 2 / 3)) == pytest.approx(1 / 9, abs=1e-15)
    assert werner_d(WernerParams(50, 2 / 3)) == pytest.approx(0.00627, abs=5e-5)


@pytest.mark.parametrize("d", [2, 3, 4, 5])
def test_werner_d_zero_point_is_exact(d):
    assert werner_d(WernerParams(d, (d + 1) / (2 * d))) == 0.0


def test_werner_d_not_monotone_in_p():
    values = [werner_d(WernerParams(2, p)) for p in (0.0, 0.75, 1.0)]
    assert values[0] > values[1] < values[2] and values[0] != values[2]


def test_werner_d_given_u_limits():
    params = WernerParams(3, 0.2)
    # a traceless unitary realizes the minimum, the identity gives zero
    traceless = np.diag(np.exp(2j * np.pi * np.arange(1, 4) / 3))
    assert werner_d_given_u(params, traceless) == pytest.approx(werner_d(params), abs=1e-12)
    assert werner_d_given_u(params, np.eye(3)) == pytest.approx(0.0, abs=1e-12)


def test_werner_d_given_u_matches_dense_evaluation():
    params = WernerParams(3, 0.35)
    rho = werner_state(params)
    u = random_haar_unitary(3, seed=17)
    assert werner_d_given_u(params, u.matrix) == pytest.approx(d_given_u(rho, u), abs=1e-12)


def test_werner_discord_known_values():
    assert werner_discord(WernerParams(2, 2 / 3)) == pytest.approx(0.01614, abs=5e-5)
    assert werner_discord(WernerParams(50, 2 / 3)) == pytest.approx(0.07111, abs=5e-5)
    assert abs(werner_discord(WernerParams(3, 2 / 3))) < 1e-9  # zero point of d = 3


# --- qubit-side closed form ---------------------------------------------------------


@pytest.mark.parametrize("n", [2, 3, 4])
def test_bound_chain_on_random_states(n):
    for seed in range(167):
        rho = random_density(2, n, 2 * n, seed=seed * 3 + n)
        lower, mid, upper = lower_bound_2xN(rho), d_closed_2xN(rho), upper_bound_2xN(rho)
        assert lower <= mid + 1e-9
        assert mid <= upper + 1e-9


def test_lower_bound_tight_for_maximally_mixed_marginal():
    rho = random_maximally_mixed_a(seed=3)
    assert lower_bound_2xN(rho) == pytest.approx(d_closed_2xN(rho), abs=1e-9)


def test_optimal_unitary_achieves_closed_form():
    for seed in range(20):
        rho = random_density(2, 3, 6, seed=seed)
        value, u = optimal_ru_unitary_2xN(rho)
        assert value == pytest.approx(d_closed_2xN(rho), abs=1e-12)
        assert d_given_u(rho, u) == pytest.approx(value, abs=1e-9)
        mat = u.matrix
        np.testing.assert_allclose(mat, mat.conj().T, atol=1e-12)  # Hermitian reflection
        assert abs(np.trace(mat)) < 1e-12


def test_geometric_discord_route_coincides():
    # independent derivation through the SVD of [r_A | T]; shares no code with
    # the eigenvalue route beyond the Fano coefficients themselves
    for seed in range(50):
        rho = random_density(2, 2, 4, seed=100 + seed)
        assert abs(geometric_discord_2x2(rho) - d_closed_2xN(rho)) < 1e-12


def test_geometric_discord_requires_two_qubits():
    with pytest.raises(ValueError):
        geometric_discord_2x2(random_density(2, 3, 6, seed=0))


def test_horodecki_bell_value():
    assert horodecki_m(bell()) == pytest.approx(2.0, abs=1e-12)


def test_horodecki_product_state_below_threshold():
    a = random_density(2, 1, 2, seed=1).matrix
    b = random_density(2, 1, 2, seed=2).matrix
    from nonclass.core import DensityOperator

    rho = DensityOperator(2, 2, np.kron(a, b))
    assert horodecki_m(rho) <= 1.0 + 1e-12


def test_normal_form_diagonalizes_correlations():
    rho = random_density(2, 2, 4, seed=7)
    moved, u_a, u_b = normal_form_2x2(rho)
    t = fano_decompose(moved).t
    off = t - np.diag(np.diag(t))
    assert np.max(np.abs(off)) < 1e-10
    # local rotations leave both the measure and the spectrum alone
    assert d_closed_2xN(moved) == pytest.approx(d_closed_2xN(rho), abs=1e-10)
    np.testing.assert_allclose(
        np.linalg.eigvalsh(moved.matrix), np.linalg.eigvalsh(rho.matrix), atol=1e-10
    )


# --- pure states --------------------------------------------------------------------


def test_pure_state_objective_matches_dense_route():
    rng = np.random.default_rng(0)
    for _ in range(20):
        alphas = rng.uniform(0.2, 1.0, size=3)
        alphas = alphas / np.linalg.norm(alphas)
        psi = np.zeros((3, 3), dtype=complex)
        np.fill_diagonal(psi, alphas)
        from nonclass.core import PureState

        state = PureState(3, 3, psi.reshape(-1))
        u = random_haar_unitary(3, rng)
        assert pure_state_objective(alphas, u) == pytest.approx(
            d_given_u(state.to_density(), u), abs=1e-10
        )


def test_maximal_entanglement_detection():
    assert is_maximally_entangled_by_d(schmidt_pure(1 / np.sqrt(2)))
    assert not is_maximally_entangled_by_d(schmidt_pure(0.6))


def test_maximal_entanglement_requires_a_not_larger():
    from nonclass.core import PureState

    amps = np.zeros(6)
    amps[0] = 1.0
    with pytest.raises(ValueError):
        is_maximally_entangled_by_d(PureState(3, 2, amps))


# --- separable ensembles -------------------------------------------------------------


def test_separable_ensemble_validation():
    good = np.array([1.0, 0.0])
    with pytest.raises(ValueError):
        SeparableEnsemble(terms=((1.2, good, good), (-0.2, good, good)))
    with pytest.raises(ValueError):
        SeparableEnsemble(terms=((1.0, np.array([1.0, 1.0]), good),))


def test_separable_gram_route_matches_dense():
    for seed in range(15):
        ens = random_separable_ensemble(2 + seed % 3, seed=seed)
        u = ru_from_bloch(0.3 * seed, 0.2 * seed)
        dense = d_given_u(ens.to_density(), u)
        assert separable_d_given_u(ens, u) == pytest.approx(dense, abs=1e-10)


def test_separable_upper_bound_holds():
    for seed in range(100):
        ens = random_separable_ensemble(2 + seed % 3, seed=500 + seed)
        assert d_closed_2xN(ens.to_density()) <= separable_upper_bound(ens) + 1e-9


def test_rank2_family_hits_one_half():
    ens = rank2_separable_ensemble(np.pi, np.pi / 2)
    assert d_closed_2xN(ens.to_density()) == pytest.approx(0.5, abs=1e-12)
    assert max_nonclassical_rank2_check(ens)


def test_rank2_family_off_maximum_detected():
    assert not max_nonclassical_rank2_check(rank2_separable_ensemble(np.pi, np.pi / 3))
    assert not max_nonclassical_rank2_check(rank2_separable_ensemble(2.0, np.pi / 2))


def test_rank2_delta_matches_gram_route():
    rng = np.random.default_rng(3)
    for _ in range(25):
        alpha, beta = rng.uniform(0.1, np.pi, size=2)
        theta, phi = rng.uniform(0.0, np.pi), rng.uniform(0.0, 2 * np.pi)
        ens = rank2_separable_ensemble(alpha, beta)
        via_gram = separable_d_given_u(ens, ru_from_bloch(theta, phi))
        assert np.sqrt(rank2_delta(alpha, beta, theta, phi)) / 2 == pytest.approx(
            via_gram, abs=1e-10
        )


@pytest.mark.parametrize("beta", [0.3, 1.0, 2.0])
def test_rank2_delta_axis_reduction(beta):
    # measuring along the z-axis collapses the expression to 1 - cos(beta)^2
    assert rank2_delta(1.1, beta, 0.0, 0.0) == pytest.approx(1 - np.cos(beta) ** 2, abs=1e-12)


def test_rank2_delta_equator_reduction():
    for alpha, theta in ((0.7, 0.4), (2.1, 1.0)):
        expected = 1 - np.cos(alpha / 2) ** 2 * np.sin(2 * theta)
        assert rank2_delta(alpha, np.pi / 2, theta, 0.0) == pytest.approx(expected, abs=1e-12)


def test_rank2_delta_at_maximum_parameters():
    for theta, phi in ((0.5, 1.0), (1.2, 2.5)):
        expected = 1 + np.sin(theta) ** 2 * np.sin(phi) ** 2
        assert rank2_delta(np.pi, np.pi / 2, theta, phi) == pytest.approx(expected, abs=1e-12)


def test_reduced_states_of_rank2_family():
    ens = rank2_separable_ensemble(np.pi, np.pi / 2)
    np.testing.assert_allclose(ens.probs(), [0.5, 0.5], atol=1e-15)
    rho_b = partial_trace(ens.to_density(), keep="B")
    np.testing.assert_allclose(rho_b, np.eye(2) / 2, atol=1e-12)  # orthogonal B sides
