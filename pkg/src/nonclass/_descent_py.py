"""Pure-python reference implementation of the eigenbasis descent loop.

Semantics match the compiled extension ``nonclass._descent`` exactly:
same coordinate order, same acceptance rule, same termination.  Kept in
plain numpy so the package works without a C toolchain.
"""

from __future__ import annotations

import numpy as np

from . import optim


def kernel_objective(c_kernel: np.ndarray, purity: float, lam: np.ndarray, v: np.ndarray) -> float:
    """Squared disturbance purity - Re(u^T C conj(u)) for U = V diag(lam) V^dagger."""
    u = (v * lam) @ v.conj().T
    w = u.conj().reshape(-1)
    return purity - float(np.vdot(w, c_kernel @ w).real)


def ru_descent(
    c_kernel: np.ndarray,
    purity: float,
    v0: np.ndarray,
    lam: np.ndarray,
    step0: float = optim.STEP0,
    shrink: float = optim.SHRINK,
    step_floor: float = optim.STEP_FLOOR,
    max_sweeps: int = 2000,
    accept_tol: float = optim.ACCEPT_TOL,
    f_floor: float = optim.F_FLOOR,
):
    lam = np.asarray(lam, dtype=complex)

    def objective(v):
        return kernel_objective(c_kernel, purity, lam, v)

    return optim.unitary_coordinate_descent(
        objective,
        v0,
        step0=step0,
        shrink=shrink,
        step_floor=step_floor,
        max_sweeps=max_sweeps,
        accept_tol=accept_tol,
        f_floor=f_floor,
    )
