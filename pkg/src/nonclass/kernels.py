"""Hot-path kernels for the unitary minimization, with backend selection.

The disturbance objective tr(rho^2) - tr(rho (U (x) I) rho (U^dag (x) I))
is evaluated thousands of times per minimization.  Precomputing the
quartic interaction kernel C collapses each evaluation to a quadratic
form in the M^2 entries of U:

    tr(rho (U (x) I) rho (U^dag (x) I)) = Re(u^T C conj(u)),  u = vec(U),

so the per-evaluation cost is O(M^4) independent of N.  The descent loop
itself runs either in the compiled extension ``nonclass._descent`` (built
from _descent.pyx) or in the numpy fallback ``_descent_py``; set
NONCLASS_PURE_PYTHON=1 to force the fallback.
"""

from __future__ import annotations

import os

import numpy as np

from . import _descent_py

try:
    from . import _descent as _compiled
except ImportError:  # extension not built; numpy fallback is fully equivalent
    _compiled = None

_FORCE_PY = bool(os.environ.get("NONCLASS_PURE_PYTHON"))


def _c_writable(x) -> np.ndarray:
    # typed memoryviews reject the read-only views handed out by the operator classes
    arr = np.ascontiguousarray(x, dtype=complex)
    if not arr.flags.writeable:
        arr = arr.copy()
    return arr


def backend() -> str:
    """Name of the descent backend in use: "cython" or "python"."""
    return "python" if (_compiled is None or _FORCE_PY) else "cython"


def interaction_kernel(rho_mat: np.ndarray, m: int, n: int) -> np.ndarray:
    """The M^2 x M^2 Hermitian PSD kernel C with row index vec((c,e)).

    C[(c,e),(a,g)] = sum_{b,d} rho[(a,b),(c,d)] rho[(e,d),(g,b)], which
    contracts the B-subsystem indices once and for all.
    """
    r = np.asarray(rho_mat, dtype=complex).reshape(m, n, m, n)
    c = np.einsum("abcd,edgb->ceag", r, r).reshape(m * m, m * m)
    return np.ascontiguousarray(c)


def quadform_objective(c_kernel: np.ndarray, purity: float, u: np.ndarray) -> float:
    """Squared disturbance of the unitary with matrix ``u`` (any M x M unitary)."""
    w = np.asarray(u, dtype=complex).conj().reshape(-1)
    return purity - float(np.vdot(w, c_kernel @ w).real)


def ru_descent(c_kernel, purity, v0, lam, **kwargs):
    """Descend the squared disturbance over eigenbases V (eigenvalues fixed).

    Returns (f_best, v_best, sweeps); see optim.unitary_coordinate_descent
    for the step-control parameters accepted via kwargs.
    """
    if backend() == "cython":
        args = {
            "step0": _descent_py.optim.STEP0,
            "shrink": _descent_py.optim.SHRINK,
            "step_floor": _descent_py.optim.STEP_FLOOR,
            "max_sweeps": 2000,
            "accept_tol": _descent_py.optim.ACCEPT_TOL,
            "f_floor": _descent_py.optim.F_FLOOR,
        }
        args.update(kwargs)
        return _compiled.ru_descent(
            _c_writable(c_kernel),
            float(purity),
            _c_writable(v0),
            _c_writable(lam),
            args["step0"],
            args["shrink"],
            args["step_floor"],
            int(args["max_sweeps"]),
            args["accept_tol"],
            args["f_floor"],
        )
    return _descent_py.ru_descent(c_kernel, purity, v0, lam, **kwargs)
