import numpy as np
import pytest

from nonclass.closed_forms import WernerParams, werner_discord, werner_state
from nonclass.core import DensityOperator, kron, partial_trace, random_density, random_haar_unitary
from nonclass.discord import (
    ProjectiveMeasurement,
    classification_report,
    discord_numeric,
    entropy2,
    fano_offdiagonal_defect,
    find_classical_basis,
    generalized_discord_numeric,
    minimize_projective_defect,
    projective_invariance_defect,
)
from nonclass.families import bell, classical_quantum, discordant_mixture, random_schmidt_state, schmidt_pure
from nonclass.measure import MultiplicityVector, OptimizerConfig

FAST = OptimizerConfig(restarts=8)


def test_entropy_known_values():
    assert entropy2(np.eye(2) / 2) == pytest.approx(1.0, abs=1e-12)
    assert entropy2(np.diag([1.0, 0.0])) == pytest.approx(0.0, abs=1e-12)
    assert entropy2(np.eye(4) / 4) == pytest.approx(2.0, abs=1e-12)


def test_projective_measurement_validation():
    p0, p1 = np.diag([1.0, 0.0]).astype(complex), np.diag([0.0, 1.0]).astype(complex)
    meas = ProjectiveMeasurement((p0, p1), None)
    assert meas.dim == 2
    assert meas.multiplicities.v == (2, 0)
    with pytest.raises(ValueError):
        ProjectiveMeasurement((p0, p0), None)  # not complete
    skew = np.array([[0.5, 0.5], [0.5, 0.5]], dtype=complex)
    with pytest.raises(ValueError):
        ProjectiveMeasurement((skew, p1), None)  # not orthogonal to p1
    with pytest.raises(ValueError):
        ProjectiveMeasurement((p0, p1), MultiplicityVector((0, 1)))  # pattern mismatch


def test_rank1_and_block_constructors():
    u = random_haar_unitary(4, seed=0).matrix
    rank1 = ProjectiveMeasurement.rank1(u)
    assert len(rank1.projectors) == 4
    blocks = ProjectiveMeasurement.from_basis_blocks(u, (2, 1, 1))
    assert [int(round(np.trace(p).real)) for p in blocks.projectors] == [2, 1, 1]
    total = sum(blocks.projectors)
    np.testing.assert_allclose(total, np.eye(4), atol=1e-12)


def test_invariance_defect_zero_for_diagonal_state():
    rho = DensityOperator(2, 2, np.diag([0.4, 0.1, 0.3, 0.2]))
    meas = ProjectiveMeasurement.rank1(np.eye(2, dtype=complex))
    assert projective_invariance_defect(rho, meas) < 1e-14


def test_invariance_defect_positive_for_bell():
    meas = ProjectiveMeasurement.rank1(np.eye(2, dtype=complex))
    assert projective_invariance_defect(bell(), meas) == pytest.approx(1 / np.sqrt(2), abs=1e-12)


def test_fano_defect_zero_iff_block_diagonal():
    rho = DensityOperator(2, 2, np.diag([0.4, 0.1, 0.3, 0.2]))
    assert fano_offdiagonal_defect(rho) < 1e-14
    assert fano_offdiagonal_defect(bell()) > 0.1


def test_discord_zero_on_product_state():
    a = random_density(2, 1, 2, seed=1).matrix
    b = random_density(3, 1, 3, seed=2).matrix
    rho = DensityOperator(2, 3, np.kron(a, b))
    assert discord_numeric(rho) < 1e-9


def test_discord_zero_on_classical_quantum():
    rho = classical_quantum(seed=11)
    assert discord_numeric(rho) < 1e-7


def test_discord_positive_on_discordant_mixture():
    assert discord_numeric(discordant_mixture(seed=11)) > 1e-3


def test_discord_of_pure_state_is_entanglement_entropy():
    for a in (0.4, 0.7):
        rho = schmidt_pure(a).to_density()
        b2 = 1 - a * a
        expected = -(a * a) * np.log2(a * a) - b2 * np.log2(b2)
        assert discord_numeric(rho) == pytest.approx(expected, abs=1e-6)


def test_discord_matches_werner_formula():
    for p in (0.2, 2 / 3, 0.9):
        params = WernerParams(2, p)
        assert discord_numeric(werner_state(params)) == pytest.approx(
            werner_discord(params), abs=1e-7
        )


def test_discord_local_unitary_invariance():
    for seed in range(10):
        rho = random_density(2, 2, 4, seed=40 + seed)
        w = kron(random_haar_unitary(2, seed=80 + seed).matrix, random_haar_unitary(2, seed=120 + seed).matrix)
        moved = DensityOperator(2, 2, w @ rho.matrix @ w.conj().T)
        assert abs(discord_numeric(rho) - discord_numeric(moved)) < 1e-5


def test_find_classical_basis_on_classical_state():
    rho = classical_quantum(seed=4)
    basis = find_classical_basis(rho, FAST)
    assert basis is not None
    assert fano_offdiagonal_defect(rho, basis.matrix) < 1e-6


def test_find_classical_basis_absent_for_discordant_state():
    assert find_classical_basis(discordant_mixture(seed=4), FAST) is None


def test_find_classical_basis_trivial_dimension():
    rho = random_density(1, 2, 2, seed=0)
    assert find_classical_basis(rho, FAST) is not None


def test_generalized_discord_rank1_matches_grid_route():
    for seed in (0, 5):
        rho = random_density(2, 2, 4, seed=200 + seed)
        v = MultiplicityVector((2, 0))
        via_descent = generalized_discord_numeric(rho, v, FAST)
        assert via_descent == pytest.approx(discord_numeric(rho), abs=1e-4)


def test_generalized_discord_trivial_pattern_is_mutual_information():
    rho = random_density(2, 3, 6, seed=9)
    v = MultiplicityVector((0, 1))  # the identity measurement reveals nothing
    rho_a, rho_b = partial_trace(rho, "A"), partial_trace(rho, "B")
    mutual = entropy2(rho_a) + entropy2(rho_b) - entropy2(rho.matrix)
    assert generalized_discord_numeric(rho, v, FAST) == pytest.approx(mutual, abs=1e-9)


def test_generalized_discord_nonnegative_and_below_rank1():
    # coarser measurements extract less information, so the deficit can only grow
    rho = random_density(3, 3, 9, seed=13)
    fine = generalized_discord_numeric(rho, MultiplicityVector((3, 0, 0)), FAST)
    coarse = generalized_discord_numeric(rho, MultiplicityVector((1, 1, 0)), FAST)
    assert -1e-9 <= fine <= coarse + 1e-7


def test_projective_defect_detects_schmidt_rank():
    # a measurement with a doublet block leaves a rank-2 Schmidt state fixed
    rho = random_schmidt_state(3, 3, 2, seed=21).to_density()
    defect_doublet, meas = minimize_projective_defect(rho, MultiplicityVector((1, 1, 0)), FAST)
    defect_rank1, _ = minimize_projective_defect(rho, MultiplicityVector((3, 0, 0)), FAST)
    assert defect_doublet < 1e-6
    assert defect_rank1 > 1e-2
    assert projective_invariance_defect(rho, meas) == pytest.approx(defect_doublet, abs=1e-9)


def test_classification_report_fields():
    rep = classification_report(classical_quantum(seed=2), FAST)
    assert set(rep) == {"D", "discord", "classical_basis_found", "defect"}
    assert rep["classical_basis_found"] and rep["D"] < 1e-7
    rep2 = classification_report(discordant_mixture(seed=2), FAST)
    assert not rep2["classical_basis_found"]
    assert min(rep2["D"], rep2["discord"], rep2["defect"]) > 1e-3
