"""Closed-form disturbance values, bounds, and special state families.

Everything here is an exact formula or a finite construction: the 2xN
closed form and its two companion bounds, the Werner family (value,
any-unitary value, discord), pure-state expressions, and separable
ensembles with the rank-2 characterization of maximal non-classicality.
The numerical minimizer in :mod:`nonclass.measure` is validated against
these routes, never the other way around.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.spatial.transform import Rotation
from scipy.special import xlogy

from .core import DensityOperator, PureState, UnitaryOperator, kron
from .fano import fano_decompose

_LN2 = np.log(2.0)

_PAULI = np.array(
    [
        [[0, 1], [1, 0]],
        [[0, -1j], [1j, 0]],
        [[1, 0], [0, -1]],
    ],
    dtype=complex,
)


def _unitary_matrix(u) -> np.ndarray:
    """Accept UnitaryOperator, RUUnitary, or a raw array."""
    return np.asarray(getattr(u, "matrix", u), dtype=complex)


def _require_qubit_a(rho: DensityOperator) -> None:
    if rho.dim_a != 2:
        raise ValueError(f"closed form requires dim_a = 2, got {rho.dim_a}")


# --- 2xN closed form and bounds ----------------------------------------------


def upper_bound_2xN(rho: DensityOperator) -> float:
    """Upper bound 2 sqrt(lambda_min(tr_B(rho^2))) for dim_a = 2."""
    _require_qubit_a(rho)
    m, n = rho.dim_a, rho.dim_b
    sq = (rho.matrix @ rho.matrix).reshape(m, n, m, n)
    reduced = np.einsum("ibjb->ij", sq)
    lam_min = np.linalg.eigvalsh(reduced)[0]
    return 2.0 * np.sqrt(max(float(lam_min), 0.0))


def _closed_2xN_parts(rho: DensityOperator):
    """(value, optimal Bloch axis, fano form) of the 2xN closed form.

    D^2 = (1/N) (|r_A|^2 + (2/N) sum T_ij^2 - lambda_max(K)) with
    K = r_A r_A^T + (2/N) T T^T; the top eigenvector of K is the Bloch
    axis n of the optimal RU unitary n . sigma.
    """
    _require_qubit_a(rho)
    f = fano_decompose(rho)
    n = rho.dim_b
    k = np.outer(f.r_a, f.r_a) + (2.0 / n) * (f.t @ f.t.T)
    w, v = np.linalg.eigh(k)
    total = float(f.r_a @ f.r_a) + (2.0 / n) * float(np.sum(f.t * f.t))
    value = np.sqrt(max(total - float(w[-1]), 0.0)) / np.sqrt(n)
    return float(value), v[:, -1], f


def d_closed_2xN(rho: DensityOperator) -> float:
    """Exact minimal disturbance for a 2xN state."""
    return _closed_2xN_parts(rho)[0]


def optimal_ru_unitary_2xN(rho: DensityOperator):
    """(D value, optimal RU unitary) for a 2xN state.

    The optimizer is n . sigma for n the top eigenvector of the closed
    form's 3x3 matrix: Hermitian, traceless, eigenvalues {+1, -1}.
    """
    value, axis, _ = _closed_2xN_parts(rho)
    u = np.einsum("i,iab->ab", axis, _PAULI)
    return value, UnitaryOperator(u)


def lower_bound_2xN(rho: DensityOperator) -> float:
    """Correlation-only lower bound; tight exactly when r_A = 0."""
    _require_qubit_a(rho)
    f = fano_decompose(rho)
    n = rho.dim_b
    tt = f.t @ f.t.T
    slack = float(np.sum(f.t * f.t)) - float(np.linalg.eigvalsh(tt)[-1])
    return np.sqrt(2.0) / n * np.sqrt(max(slack, 0.0))


def geometric_discord_2x2(rho: DensityOperator) -> float:
    """Two-qubit geometric discord, reported on the disturbance scale.

    Independently coded N=2 specialization: with B = [r_A | T] (3x4),
    D^2 = (1/2)(|B|_F^2 - s_1(B)^2), using the largest singular value in
    place of an eigensolve on B B^T.  Coincides with d_closed_2xN.
    """
    _require_qubit_a(rho)
    if rho.dim_b != 2:
        raise ValueError(f"geometric discord route requires dim_b = 2, got {rho.dim_b}")
    f = fano_decompose(rho)
    stacked = np.hstack([f.r_a[:, None], f.t])
    s_max = np.linalg.svd(stacked, compute_uv=False)[0]
    return float(np.sqrt(max(np.sum(stacked * stacked) - s_max * s_max, 0.0) / 2.0))


def horodecki_m(rho: DensityOperator) -> float:
    """CHSH criterion M(rho): sum of the two largest eigenvalues of T^T T.

    The state violates the CHSH inequality iff M(rho) > 1.
    """
    if (rho.dim_a, rho.dim_b) != (2, 2):
        raise ValueError("the CHSH criterion is for two-qubit states")
    t = fano_decompose(rho).t
    w = np.linalg.eigvalsh(t.T @ t)
    return float(w[-1] + w[-2])


def normal_form_2x2(rho: DensityOperator):
    """Local-unitary normal form with diagonal correlation matrix.

    Returns (rho', u_a, u_b) where rho' = (u_a (x) u_b) rho (...)^dag has
    T' diagonal (entries may be negative: the SVD factors are flipped to
    proper rotations and the signs ride on the diagonal).  Never applied
    implicitly anywhere else; Fano coefficients always refer to the state
    as given.
    """
    if (rho.dim_a, rho.dim_b) != (2, 2):
        raise ValueError("normal form is for two-qubit states")
    f = fano_decompose(rho)
    left, _sing, right_t = np.linalg.svd(f.t)
    right = right_t.T
    if np.linalg.det(left) < 0:
        left = left.copy()
        left[:, -1] *= -1
    if np.linalg.det(right) < 0:
        right = right.copy()
        right[:, -1] *= -1
    u_a = _su2_from_rotation(left.T)
    u_b = _su2_from_rotation(right.T)
    w = kron(u_a, u_b)
    return DensityOperator(2, 2, w @ rho.matrix @ w.conj().T), UnitaryOperator(u_a), UnitaryOperator(u_b)


def _su2_from_rotation(r: np.ndarray) -> np.ndarray:
    """A qubit unitary u with (1/2) tr(sigma_i u sigma_j u^dag) = r_ij."""
    x, y, z, w = Rotation.from_matrix(r).as_quat()
    return w * np.eye(2) - 1j * (x * _PAULI[0] + y * _PAULI[1] + z * _PAULI[2])


# --- Werner family ------------------------------------------------------------


@dataclass(frozen=True)
class WernerParams:
    d: int
    p: float

    def __post_init__(self):
        if int(self.d) != self.d or self.d < 2:
            raise ValueError(f"d must be an integer >= 2, got {self.d}")
        if not 0.0 <= self.p <= 1.0:
            raise ValueError(f"p must lie in [0, 1], got {self.p}")
        object.__setattr__(self, "d", int(self.d))
        object.__setattr__(self, "p", float(self.p))


def _swap_matrix(d: int) -> np.ndarray:
    p = np.zeros((d * d, d * d))
    idx = np.arange(d * d)
    i, j = divmod(idx, d)
    p[idx, j * d + i] = 1.0
    return p


def werner_state(params: WernerParams) -> DensityOperator:
    """U (x) U invariant mixture of the symmetric/antisymmetric projectors."""
    d, p = params.d, params.p
    swap = _swap_matrix(d)
    eye = np.eye(d * d)
    sym = (eye + swap) / 2.0
    asym = (eye - swap) / 2.0
    mat = (2.0 * p / (d * d + d)) * sym + (2.0 * (1.0 - p) / (d * d - d)) * asym
    return DensityOperator(d, d, mat)


def werner_d(params: WernerParams) -> float:
    """D of a Werner state: |2pd - d - 1| / (d^2 - 1)."""
    d, p = params.d, params.p
    return abs(2.0 * p * d - d - 1.0) / (d * d - 1.0)


def werner_d_given_u(params: WernerParams, u) -> float:
    """Disturbance of a Werner state under an arbitrary unitary on A.

    Depends on u only through beta = |tr u|^2; RU unitaries have beta = 0,
    which recovers werner_d, and u = I gives beta = d^2, hence 0.
    """
    d, p = params.d, params.p
    mat = _unitary_matrix(u)
    if mat.shape[0] != d:
        raise ValueError(f"unitary dimension {mat.shape[0]} does not match d = {d}")
    beta = abs(np.trace(mat)) ** 2
    return abs(2.0 * p * d - d - 1.0) * np.sqrt(max(d * d - beta, 0.0)) / (d * (d * d - 1.0))


def werner_discord(params: WernerParams) -> float:
    """Discord of a Werner state (base-2 logs; x log x -> 0 at p in {0, 1})."""
    d, p = params.d, float(params.p)
    value = (
        np.log2(d + 1.0)
        + xlogy(1.0 - p, (1.0 - p) / (d - 1.0)) / _LN2
        + xlogy(p, p / (d + 1.0)) / _LN2
        - (2.0 / (d + 1.0)) * xlogy(p, p) / _LN2
        - (1.0 - 2.0 * p / (d + 1.0)) * np.log2((d + 1.0 - 2.0 * p) / (2.0 * (d - 1.0)))
    )
    return float(value)


# --- Pure states ----------------------------------------------------------------


def pure_state_objective(alphas, u) -> float:
    """Disturbance of the Schmidt-form pure state sum_k alpha_k |kk>.

    Evaluates sqrt(1 - |sum_k alpha_k^2 <k|u|k>|^2); the Schmidt bases are
    taken to be computational, so u is expressed in the A-side Schmidt basis.
    """
    a = np.asarray(alphas, dtype=float).reshape(-1)
    if np.any(a < -1e-12):
        raise ValueError("Schmidt coefficients must be nonnegative")
    if abs(np.sum(a * a) - 1.0) > 1e-10:
        raise ValueError(f"Schmidt coefficients must have sum alpha^2 = 1, got {np.sum(a * a)!r}")
    mat = _unitary_matrix(u)
    if mat.shape[0] != a.shape[0]:
        raise ValueError(f"unitary dimension {mat.shape[0]} != number of coefficients {a.shape[0]}")
    overlap = np.sum(a * a * np.diagonal(mat))
    return float(np.sqrt(max(1.0 - abs(overlap) ** 2, 0.0)))


def is_maximally_entangled_by_d(psi: PureState, eps: float = 1e-6) -> bool:
    """True iff the minimized disturbance of |psi><psi| reaches 1 - eps.

    Equivalent to the Schmidt test alpha_k = 1/sqrt(M) for all k; this
    route decides via the measure itself.
    """
    if psi.dim_a > psi.dim_b:
        raise ValueError("the Schmidt side must satisfy dim_a <= dim_b")
    from .measure import minimize_d  # deferred: measure imports this module

    return minimize_d(psi.to_density()).value >= 1.0 - eps


# --- Separable ensembles ---------------------------------------------------------


@dataclass(frozen=True)
class SeparableEnsemble:
    """A separable state presented as sum_i p_i |a_i><a_i| (x) |b_i><b_i|."""

    terms: tuple  # of (p_i, a_i, b_i)

    def __post_init__(self):
        if not self.terms:
            raise ValueError("ensemble needs at least one term")
        cooked = []
        for idx, (p, a, b) in enumerate(self.terms):
            a = np.asarray(a, dtype=complex).reshape(-1)
            b = np.asarray(b, dtype=complex).reshape(-1)
            if p < -1e-12:
                raise ValueError(f"term {idx}: negative probability {p}")
            for name, vec in (("a", a), ("b", b)):
                if abs(np.linalg.norm(vec) - 1.0) > 1e-12:
                    raise ValueError(f"term {idx}: |{name}> is not unit norm")
            a.flags.writeable = False
            b.flags.writeable = False
            cooked.append((float(p), a, b))
        dims_a = {a.shape[0] for _, a, _ in cooked}
        dims_b = {b.shape[0] for _, _, b in cooked}
        if len(dims_a) != 1 or len(dims_b) != 1:
            raise ValueError("all terms must share the same local dimensions")
        total = sum(p for p, _, _ in cooked)
        if abs(total - 1.0) > 1e-12:
            raise ValueError(f"probabilities sum to {total!r}, expected 1 within 1e-12")
        object.__setattr__(self, "terms", tuple(cooked))

    @property
    def n(self) -> int:
        return len(self.terms)

    @property
    def dim_a(self) -> int:
        return self.terms[0][1].shape[0]

    @property
    def dim_b(self) -> int:
        return self.terms[0][2].shape[0]

    def probs(self) -> np.ndarray:
        return np.array([p for p, _, _ in self.terms])

    def to_density(self) -> DensityOperator:
        dim = self.dim_a * self.dim_b
        mat = np.zeros((dim, dim), dtype=complex)
        for p, a, b in self.terms:
            ab = np.kron(a, b)
            mat += p * np.outer(ab, ab.conj())
        return DensityOperator(self.dim_a, self.dim_b, mat)


def separable_d_given_u(e: SeparableEnsemble, u) -> float:
    """Ensemble form of the disturbance:

    sqrt( sum_ij p_i p_j |<b_i|b_j>|^2 (|<a_i|a_j>|^2 - |<a_i|u|a_j>|^2) ).

    Exact for any unitary u on A, not only RU ones; cross-checked against
    the dense-matrix evaluation in tests.
    """
    mat = _unitary_matrix(u)
    if mat.shape[0] != e.dim_a:
        raise ValueError(f"unitary dimension {mat.shape[0]} does not match dim_a = {e.dim_a}")
    a = np.array([vec for _, vec, _ in e.terms])
    b = np.array([vec for _, _, vec in e.terms])
    p = e.probs()
    gram_a = np.abs(a.conj() @ a.T) ** 2
    gram_b = np.abs(b.conj() @ b.T) ** 2
    moved_a = np.abs(a.conj() @ mat @ a.T) ** 2
    total = p @ (gram_b * (gram_a - moved_a)) @ p
    return float(np.sqrt(max(total, 0.0)))


def separable_upper_bound(e: SeparableEnsemble) -> float:
    """D(rho) <= 1 - max_i p_i (<= 1 - 1/n) for an n-term separable state."""
    return 1.0 - float(np.max(e.probs()))


def rank2_separable_ensemble(alpha: float, beta: float) -> SeparableEnsemble:
    """The two-term family behind the maximal-non-classicality analysis.

    |a1> = |0>, |a2> = cos(beta/2)|0> + sin(beta/2)|1> on A;
    |b1> = |0>, |b2> = cos(alpha/2)|0> + sin(alpha/2)|1> on B; p = (1/2, 1/2).
    """
    a2 = np.array([np.cos(beta / 2.0), np.sin(beta / 2.0)])
    b2 = np.array([np.cos(alpha / 2.0), np.sin(alpha / 2.0)])
    e0 = np.array([1.0, 0.0])
    return SeparableEnsemble(((0.5, e0, e0), (0.5, a2, b2)))


def rank2_delta(alpha: float, beta: float, theta: float, phi: float) -> float:
    """The quartic angle polynomial whose square root halved is D(rho, U).

    (alpha, beta) fix the rank-2 ensemble above; (theta, phi) fix the RU
    unitary 2|u><u| - I via Bloch angles of |u>.
    """
    ca2 = np.cos(alpha / 2.0) ** 2
    return float(
        ca2 * (2.0 * np.cos(beta) * np.sin(theta) ** 2 - np.sin(beta) * np.sin(2.0 * theta) * np.cos(phi))
        + 1.0
        + np.sin(theta) ** 2
        - (np.cos(beta) * np.cos(theta) + np.sin(beta) * np.sin(theta) * np.cos(phi)) ** 2
    )


def max_nonclassical_rank2_check(e: SeparableEnsemble, eps: float = 1e-9) -> bool:
    """Whether a two-term ensemble attains the separable maximum D = 1/2.

    Holds iff p1 = p2 = 1/2, |<a1|a2>| = 1/sqrt(2), and <b1|b2> = 0,
    each within eps.
    """
    if e.n != 2:
        raise ValueError(f"check applies to two-term ensembles, got n = {e.n}")
    (p1, a1, b1), (p2, a2, b2) = e.terms
    overlap_a = abs(np.vdot(a1, a2))
    overlap_b = abs(np.vdot(b1, b2))
    return (
        abs(p1 - 0.5) <= eps
        and abs(p2 - 0.5) <= eps
        and abs(overlap_a - 1.0 / np.sqrt(2.0)) <= eps
        and overlap_b < eps
    )
