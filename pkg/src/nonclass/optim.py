"""Derivative-free minimization over the unitary group.

The search variable is an M x M unitary V, moved by right-multiplication
with exp(i t E_k) for Hermitian coordinate directions E_k: the M diagonal
elements |p><p|, then for each pair p < q (lexicographic) the real
element |p><q| + |q><p| and the imaginary element i|p><q| - i|q><p|.
That is M^2 real parameters, matching the dimension of the unitary group.
Each exp(i t E_k) is a closed-form Givens-type update touching at most
two columns of V, so no matrix exponential is ever formed.

Coordinate descent with a shrinking step: sweep all coordinates trying
+/-step, accept the first strict improvement per coordinate; a sweep with
no improvement shrinks the step by ``shrink`` until ``step_floor``.
"""

from __future__ import annotations

import numpy as np

# Defaults shared by every descent-based minimizer in the package.
STEP0 = 0.35
SHRINK = 0.4
STEP_FLOOR = 1e-8
# Accept only improvements above rounding noise, else phase-only moves
# (exact null directions of the objective) would be chased forever.
ACCEPT_TOL = 1e-15
# Squared objectives cannot go below zero; stop once numerically there.
F_FLOOR = 1e-18


def coordinate_directions(m: int):
    """The fixed coordinate order: ("diag", p), then ("re"|"im", p, q)."""
    coords = [("diag", p) for p in range(m)]
    for p in range(m):
        for q in range(p + 1, m):
            coords.append(("re", p, q))
            coords.append(("im", p, q))
    return coords


def apply_coordinate(v: np.ndarray, coord, t: float) -> np.ndarray:
    """Return V * exp(i t E_coord) without forming the exponential."""
    out = v.copy()
    kind = coord[0]
    if kind == "diag":
        out[:, coord[1]] *= complex(np.cos(t), np.sin(t))
        return out
    p, q = coord[1], coord[2]
    c, s = np.cos(t), np.sin(t)
    vp, vq = v[:, p], v[:, q]
    if kind == "re":
        out[:, p] = c * vp + 1j * s * vq
        out[:, q] = 1j * s * vp + c * vq
    else:
        out[:, p] = c * vp + s * vq
        out[:, q] = -s * vp + c * vq
    return out


def unitary_coordinate_descent(
    objective,
    v0: np.ndarray,
    *,
    step0: float = STEP0,
    shrink: float = SHRINK,
    step_floor: float = STEP_FLOOR,
    max_sweeps: int = 2000,
    accept_tol: float = ACCEPT_TOL,
    f_floor: float = F_FLOOR,
    coords=None,
):
    """Minimize ``objective(V)`` from unitary start ``v0``.

    Returns (f_best, v_best, sweeps).  Deterministic given (objective, v0).
    ``coords`` restricts the search to a subset of coordinate directions
    (objectives invariant under some directions should exclude them).
    """
    v = np.array(v0, dtype=complex)
    f = float(objective(v))
    if coords is None:
        coords = coordinate_directions(v.shape[0])
    step = step0
    sweeps = 0
    while sweeps < max_sweeps and step >= step_floor and f > f_floor:
        improved = False
        for coord in coords:
            for t in (step, -step):
                v_try = apply_coordinate(v, coord, t)
                f_try = float(objective(v_try))
                if f_try < f - accept_tol:
                    v, f = v_try, f_try
                    improved = True
                    break
        sweeps += 1
        if not improved:
            step *= shrink
    return f, v, sweeps
