import numpy as np
import pytest

from nonclass import _descent_py
from nonclass.core import random_density, random_haar_unitary
from nonclass.kernels import _c_writable, _compiled, backend, interaction_kernel, quadform_objective
from nonclass.measure import d_given_u, roots_of_unity
from nonclass.optim import (
    ACCEPT_TOL,
    F_FLOOR,
    SHRINK,
    STEP0,
    STEP_FLOOR,
    apply_coordinate,
    coordinate_directions,
    unitary_coordinate_descent,
)

DESCENT_ARGS = dict(
    step0=STEP0, shrink=SHRINK, step_floor=STEP_FLOOR, max_sweeps=2000, accept_tol=ACCEPT_TOL, f_floor=F_FLOOR
)


@pytest.mark.parametrize("m,n", [(2, 2), (3, 2), (3, 4)])
def test_interaction_kernel_hermitian_psd(m, n):
    rho = random_density(m, n, m * n, seed=m + n)
    c = interaction_kernel(rho.matrix, m, n)
    assert c.shape == (m * m, m * m)
    np.testing.assert_allclose(c, c.conj().T, atol=1e-12)
    assert np.linalg.eigvalsh(c).min() > -1e-12


def test_quadform_matches_dense_disturbance():
    rho = random_density(3, 4, 12, seed=1)
    c = interaction_kernel(rho.matrix, 3, 4)
    purity = rho.purity()
    for seed in range(5):
        u = random_haar_unitary(3, seed=seed)
        val = quadform_objective(c, purity, u.matrix)
        assert val == pytest.approx(d_given_u(rho, u) ** 2, abs=1e-12)


def test_coordinate_directions_count():
    dirs = coordinate_directions(3)
    assert len(dirs) == 3 + 2 * 3  # diagonal phases plus re/im per pair


def test_apply_coordinate_preserves_unitarity():
    v = random_haar_unitary(4, seed=3).matrix.copy()
    for direction in coordinate_directions(4):
        for step in (0.3, -0.3):
            w = apply_coordinate(v, direction, step)
            np.testing.assert_allclose(w @ w.conj().T, np.eye(4), atol=1e-12)


def test_descent_never_increases_objective():
    rho = random_density(3, 3, 9, seed=4)
    c = interaction_kernel(rho.matrix, 3, 3)
    purity = rho.purity()
    lam = roots_of_unity(3)

    def objective(v):
        return _descent_py.kernel_objective(c, purity, lam, v)

    v0 = random_haar_unitary(3, seed=5).matrix
    f, v, sweeps = unitary_coordinate_descent(objective, v0.copy(), **DESCENT_ARGS)
    assert f <= objective(v0) + 1e-15
    assert f == pytest.approx(objective(v), abs=1e-12)
    assert sweeps >= 1


def test_coords_restriction_limits_moves():
    # restricting to diagonal phases cannot change a kernel objective at all:
    # V diag(e^{i a}) applied to V lam V^dag cancels the phases
    rho = random_density(3, 3, 9, seed=6)
    c = interaction_kernel(rho.matrix, 3, 3)
    lam = roots_of_unity(3)

    def objective(v):
        return _descent_py.kernel_objective(c, rho.purity(), lam, v)

    v0 = random_haar_unitary(3, seed=7).matrix
    coords = [d for d in coordinate_directions(3) if d[0] == "diag"]
    f, _, _ = unitary_coordinate_descent(objective, v0.copy(), coords=coords, **DESCENT_ARGS)
    assert f == pytest.approx(objective(v0), abs=1e-12)


def test_c_writable_copies_locked_arrays():
    arr = np.arange(4, dtype=complex)
    arr.flags.writeable = False
    out = _c_writable(arr)
    assert out.flags.writeable
    out2 = _c_writable(np.arange(4, dtype=complex))
    assert out2.flags.writeable


@pytest.mark.skipif(_compiled is None, reason="compiled extension not built")
@pytest.mark.parametrize("m,n", [(2, 2), (3, 3), (2, 4), (4, 4)])
def test_backends_agree(m, n):
    rho = random_density(m, n, m * n, seed=10 * m + n)
    c = interaction_kernel(rho.matrix, m, n)
    purity = rho.purity()
    lam = roots_of_unity(m)
    for seed in range(6):
        v0 = random_haar_unitary(m, seed=100 + seed).matrix
        f_py, _, _ = _descent_py.ru_descent(c, purity, v0.copy(), lam, **DESCENT_ARGS)
        f_cy, _, _ = _compiled.ru_descent(
            _c_writable(c),
            float(purity),
            _c_writable(v0),
            _c_writable(lam),
            DESCENT_ARGS["step0"],
            DESCENT_ARGS["shrink"],
            DESCENT_ARGS["step_floor"],
            DESCENT_ARGS["max_sweeps"],
            DESCENT_ARGS["accept_tol"],
            DESCENT_ARGS["f_floor"],
        )
        assert f_cy == pytest.approx(f_py, abs=1e-9)


def test_backend_reports_a_known_name():
    assert backend() in ("python", "cython")
