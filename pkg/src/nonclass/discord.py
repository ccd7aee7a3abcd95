"""Discord-side characterizations: measurements, entropies, and defects.

Three independent certificates of classicality live here, all of which
must agree on the zero set:

* the entropic discord (numeric minimization over measurements on A),
* invariance of the state under a complete projective measurement,
* vanishing of the off-diagonal Fano coefficients over some A-basis.

Their agreement with the disturbance measure's zero set is what the
faithfulness tests check.  Entropies are base 2 throughout, with the
x log x -> 0 convention at zero eigenvalues.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg
import scipy.optimize
from scipy.special import xlogy

from . import optim
from .core import (
    DensityOperator,
    UnitaryOperator,
    partial_trace,
    random_haar_unitary,
)
from .fano import fano_decompose, generator_basis
from .measure import MultiplicityVector, OptimizerConfig, minimize_d

_LN2 = np.log(2.0)

IDEMPOTENT_TOL = 1e-9
COMPLETENESS_TOL = 1e-10


def entropy2(mat) -> float:
    """Von Neumann entropy, base 2, of a Hermitian PSD matrix."""
    w = np.clip(np.linalg.eigvalsh(np.asarray(mat)), 0.0, None)
    return float(-np.sum(xlogy(w, w)) / _LN2)


@dataclass(frozen=True)
class ProjectiveMeasurement:
    """A complete projective measurement on C^M with a fixed rank pattern.

    ``multiplicities`` records the rank pattern: multiplicities.v[j-1]
    projectors of rank j.  Rank-1 patterns are the ordinary (discord)
    measurements; coarser patterns drive the generalized machinery.
    """

    projectors: tuple
    multiplicities: MultiplicityVector

    def __post_init__(self):
        projs = tuple(np.asarray(p, dtype=complex) for p in self.projectors)
        if not projs:
            raise ValueError("measurement needs at least one projector")
        m = projs[0].shape[0]
        ranks = []
        for idx, p in enumerate(projs):
            if p.shape != (m, m):
                raise ValueError(f"projector {idx} has shape {p.shape}, expected ({m}, {m})")
            if np.max(np.abs(p - p.conj().T)) > IDEMPOTENT_TOL:
                raise ValueError(f"projector {idx} is not Hermitian")
            if np.max(np.abs(p @ p - p)) > IDEMPOTENT_TOL:
                raise ValueError(f"projector {idx} is not idempotent")
            ranks.append(int(round(np.trace(p).real)))
        total = sum(projs)
        if np.max(np.abs(total - np.eye(m))) > COMPLETENESS_TOL:
            raise ValueError("projectors do not sum to the identity")
        for i in range(len(projs)):
            for j in range(i + 1, len(projs)):
                if np.max(np.abs(projs[i] @ projs[j])) > IDEMPOTENT_TOL:
                    raise ValueError(f"projectors {i} and {j} are not orthogonal")
        v = [0] * m
        for r in ranks:
            if not 1 <= r <= m:
                raise ValueError(f"projector rank {r} out of range")
            v[r - 1] += 1
        mv = MultiplicityVector(tuple(v))
        if self.multiplicities is not None and mv != self.multiplicities:
            raise ValueError(
                f"declared multiplicities {self.multiplicities.v} do not match ranks {mv.v}"
            )
        for p in projs:
            p.flags.writeable = False
        object.__setattr__(self, "projectors", projs)
        object.__setattr__(self, "multiplicities", mv)

    @property
    def dim(self) -> int:
        return self.projectors[0].shape[0]

    @classmethod
    def from_basis_blocks(cls, basis_vectors, block_sizes) -> "ProjectiveMeasurement":
        """Projectors onto consecutive column blocks of a unitary."""
        basis = np.asarray(basis_vectors, dtype=complex)
        projs = []
        start = 0
        for size in block_sizes:
            cols = basis[:, start : start + size]
            projs.append(cols @ cols.conj().T)
            start += size
        if start != basis.shape[0]:
            raise ValueError(f"block sizes {tuple(block_sizes)} do not partition dimension {basis.shape[0]}")
        return cls(tuple(projs), None)

    @classmethod
    def rank1(cls, basis_vectors) -> "ProjectiveMeasurement":
        basis = np.asarray(basis_vectors, dtype=complex)
        return cls.from_basis_blocks(basis, (1,) * basis.shape[0])


def _measured_state(rho_mat: np.ndarray, m: int, n: int, projectors) -> np.ndarray:
    r4 = rho_mat.reshape(m, n, m, n)
    out = np.zeros_like(r4)
    for p in projectors:
        out += np.einsum("ab,bndm,dc->ancm", p, r4, p)
    return out.reshape(m * n, m * n)


def projective_invariance_defect(rho: DensityOperator, meas: ProjectiveMeasurement) -> float:
    """Frobenius distance between rho and its post-measurement average.

    Zero exactly when the measurement leaves the state untouched, i.e.
    when rho is block-classical over the measurement's eigenspaces.
    """
    if meas.dim != rho.dim_a:
        raise ValueError(f"measurement dimension {meas.dim} does not match dim_a={rho.dim_a}")
    measured = _measured_state(rho.matrix, rho.dim_a, rho.dim_b, meas.projectors)
    return float(np.linalg.norm(rho.matrix - measured))


def fano_offdiagonal_defect(rho: DensityOperator, basis_vectors=None) -> float:
    """Size of the off-diagonal Fano block of rho over a basis of A.

    Root-sum-square of every r_A entry and every T row attached to the
    off-diagonal (U/V) generators built over ``basis_vectors``.  A basis
    with zero defect diagonalizes the A side classically: it certifies
    both zero discord and zero disturbance.
    """
    ga = generator_basis(rho.dim_a, basis_vectors)
    f = fano_decompose(rho, basis_a=ga)
    mask = ga.uv_mask()
    return float(np.sqrt(np.sum(f.r_a[mask] ** 2) + np.sum(f.t[mask, :] ** 2)))


def find_classical_basis(rho: DensityOperator, config: OptimizerConfig | None = None):
    """The certifying basis for a zero-disturbance state, else None.

    When the minimized disturbance falls below ``config.zero_tol``, the
    optimizing unitary's eigenbasis must render the off-diagonal Fano
    block zero; that basis (as a UnitaryOperator) is returned.  A basis
    failing the cross-check signals an internal inconsistency and raises.
    """
    config = config or OptimizerConfig()
    if rho.dim_a == 1:
        return UnitaryOperator(np.eye(1))
    result = minimize_d(rho, config)
    if result.value >= config.zero_tol:
        return None
    _, z = scipy.linalg.schur(result.optimizer_u.matrix, output="complex")
    defect = fano_offdiagonal_defect(rho, z)
    if defect >= 10.0 * config.zero_tol:
        raise RuntimeError(
            f"disturbance {result.value} is below zero_tol but the eigenbasis "
            f"defect is {defect}; certificates disagree"
        )
    return UnitaryOperator(z)


# --- entropic discord -----------------------------------------------------------


def _conditional_entropy_terms(sigmas: np.ndarray) -> float:
    """sum_j p_j S(sigma_j / p_j) from unnormalized conditional states."""
    w = np.clip(np.linalg.eigvalsh(sigmas), 0.0, None)
    probs = w.sum(axis=-1)
    return float((-np.sum(xlogy(w, w), axis=-1) + xlogy(probs, probs)).sum() / _LN2)


def discord_numeric(rho: DensityOperator, grid: int = 64) -> float:
    """Entropic discord of a 2xN state, minimizing over rank-1 measurements on A.

    S(A) - S(A,B) + min_Pi S(B|Pi), where the measurement on A is swept
    over a Bloch-angle grid and then refined with Nelder-Mead.  The
    returned value is a certified upper bound that is tight in practice
    for qubit A (the landscape has period-pi structure and no narrow
    basins at this scale).
    """
    if rho.dim_a != 2:
        raise ValueError(f"rank-1 numeric discord requires dim_a = 2, got {rho.dim_a}")
    n = rho.dim_b
    r4 = rho.matrix.reshape(2, n, 2, n)
    rho_b = partial_trace(rho, "B")
    paulis = generator_basis(2).elements
    f_ops = np.einsum("iab,bnam->inm", paulis, r4)

    def conditional(directions):
        # unnormalized conditional B states for both outcomes of each direction
        contracted = np.einsum("ki,inm->knm", directions, f_ops)
        plus = (rho_b[None, :, :] + contracted) / 2.0
        minus = (rho_b[None, :, :] - contracted) / 2.0
        return plus, minus

    thetas = np.linspace(0.0, np.pi, grid)
    phis = np.linspace(0.0, 2.0 * np.pi, grid, endpoint=False)
    tt, pp = np.meshgrid(thetas, phis, indexing="ij")
    dirs = np.stack(
        [np.sin(tt) * np.cos(pp), np.sin(tt) * np.sin(pp), np.cos(tt)], axis=-1
    ).reshape(-1, 3)
    plus, minus = conditional(dirs)
    w_p = np.clip(np.linalg.eigvalsh(plus), 0.0, None)
    w_m = np.clip(np.linalg.eigvalsh(minus), 0.0, None)

    def branch(w):
        probs = w.sum(axis=1)
        return (-np.sum(xlogy(w, w), axis=1) + xlogy(probs, probs)) / _LN2

    values = branch(w_p) + branch(w_m)
    best_idx = int(np.argmin(values))
    best_grid = float(values[best_idx])

    def scalar(angles):
        theta, phi = angles
        d = np.array([[np.sin(theta) * np.cos(phi), np.sin(theta) * np.sin(phi), np.cos(theta)]])
        p, m_ = conditional(d)
        return _conditional_entropy_terms(np.concatenate([p, m_]))

    x0 = np.array([tt.reshape(-1)[best_idx], pp.reshape(-1)[best_idx]])
    refined = scipy.optimize.minimize(
        scalar, x0, method="Nelder-Mead", options={"xatol": 1e-9, "fatol": 1e-12, "maxiter": 400}
    )
    cond_min = min(best_grid, float(refined.fun))
    return entropy2(partial_trace(rho, "A")) - entropy2(rho.matrix) + cond_min


def _cross_block_coords(block_sizes):
    """Coordinate directions that move block subspaces (skip the rest).

    Diagonal phases and within-block rotations leave every projector
    fixed, so the measurement objectives are exactly flat along them.
    """
    labels = []
    for b, size in enumerate(block_sizes):
        labels.extend([b] * size)
    coords = []
    for p in range(len(labels)):
        for q in range(p + 1, len(labels)):
            if labels[p] != labels[q]:
                coords.append(("re", p, q))
                coords.append(("im", p, q))
    return coords


def _block_slices(block_sizes):
    out = []
    start = 0
    for size in block_sizes:
        out.append((start, start + size))
        start += size
    return out


def _descend_measurement(rho, block_sizes, objective_of_sigmas, config):
    """Minimize a functional of the conditional B states over measurements.

    The measurement is parametrized by a unitary V whose consecutive
    column blocks (sizes fixed) span the projector ranges; restarts draw
    Haar-random starting points.  Returns (best value, best V).
    """
    m, n = rho.dim_a, rho.dim_b
    r4 = rho.matrix.reshape(m, n, m, n)
    slices = _block_slices(block_sizes)
    coords = _cross_block_coords(block_sizes)

    def objective(v):
        sigmas = np.empty((len(slices), n, n), dtype=complex)
        for j, (lo, hi) in enumerate(slices):
            cols = v[:, lo:hi]
            pi = cols @ cols.conj().T
            sigmas[j] = np.einsum("ab,bnam->nm", pi, r4)
        return objective_of_sigmas(sigmas)

    best_f, best_v = np.inf, None
    for i in range(config.restarts):
        v0 = random_haar_unitary(m, config.seed + i).matrix
        f, v, _ = optim.unitary_coordinate_descent(
            objective,
            v0,
            max_sweeps=config.max_iters,
            f_floor=-np.inf,
            coords=coords,
        )
        if f < best_f:
            best_f, best_v = f, v
    return best_f, best_v


def generalized_discord_numeric(
    rho: DensityOperator, v, config: OptimizerConfig | None = None
) -> float:
    """Discord with the measurement class restricted to rank pattern v.

    S(A) - S(A,B) + min over pattern-v measurements of S(B|Pi).  The
    single-block pattern needs no optimization (the measurement is {I}
    and the value is the mutual information); rank-1 v at M=2 agrees
    with discord_numeric.
    """
    config = config or OptimizerConfig()
    mv = v if isinstance(v, MultiplicityVector) else MultiplicityVector(tuple(v))
    m = rho.dim_a
    if mv.dim != m:
        raise ValueError(f"multiplicity vector is for dimension {mv.dim}, state has dim_a={m}")
    if m > 4:
        raise ValueError("generalized discord is implemented for dim_a <= 4")
    const = entropy2(partial_trace(rho, "A")) - entropy2(rho.matrix)
    if mv.num_distinct == 1:
        return const + entropy2(partial_trace(rho, "B"))
    best_f, _ = _descend_measurement(
        rho, mv.multiplicities(), _conditional_entropy_terms, config
    )
    return const + best_f


def minimize_projective_defect(
    rho: DensityOperator, v=None, config: OptimizerConfig | None = None
):
    """Smallest invariance defect over measurements with rank pattern v.

    Returns (defect, ProjectiveMeasurement).  Defaults to the rank-1
    pattern.  A defect at zero exhibits a measurement under which rho is
    invariant; by the measurement/unitary correspondence this must agree
    with minimize_d_multiplicity reaching zero for the same v.
    """
    config = config or OptimizerConfig()
    m = rho.dim_a
    if v is None:
        v = (m,) + (0,) * (m - 1)
    mv = v if isinstance(v, MultiplicityVector) else MultiplicityVector(tuple(v))
    if mv.dim != m:
        raise ValueError(f"multiplicity vector is for dimension {mv.dim}, state has dim_a={m}")
    block_sizes = mv.multiplicities()
    if mv.num_distinct == 1:
        meas = ProjectiveMeasurement((np.eye(m, dtype=complex),), None)
        return 0.0, meas

    n = rho.dim_b
    r4 = rho.matrix.reshape(m, n, m, n)
    slices = _block_slices(block_sizes)
    coords = _cross_block_coords(block_sizes)
    rho_mat = rho.matrix

    def objective(u):
        measured = np.zeros((m, n, m, n), dtype=complex)
        for lo, hi in slices:
            cols = u[:, lo:hi]
            pi = cols @ cols.conj().T
            measured += np.einsum("ab,bndm,dc->ancm", pi, r4, pi)
        diff = rho_mat - measured.reshape(m * n, m * n)
        return float(np.linalg.norm(diff) ** 2)

    best_f, best_v = np.inf, None
    for i in range(config.restarts):
        v0 = random_haar_unitary(m, config.seed + i).matrix
        f, vec, _ = optim.unitary_coordinate_descent(
            objective, v0, max_sweeps=config.max_iters, coords=coords
        )
        if f < best_f:
            best_f, best_v = f, vec
    meas = ProjectiveMeasurement.from_basis_blocks(best_v, block_sizes)
    return float(np.sqrt(max(best_f, 0.0))), meas


def classification_report(rho: DensityOperator, config: OptimizerConfig | None = None) -> dict:
    """The four-indicator classicality summary used by the CLI.

    Keys: "D" (minimized disturbance), "discord" (entropic, rank-1
    measurements), "classical_basis_found", and "defect" (off-diagonal
    Fano size over the optimizer's eigenbasis).
    """
    config = config or OptimizerConfig()
    result = minimize_d(rho, config)
    m = rho.dim_a
    if m == 1:
        defect = 0.0
    else:
        _, z = scipy.linalg.schur(result.optimizer_u.matrix, output="complex")
        defect = fano_offdiagonal_defect(rho, z)
    if m == 2:
        disc = discord_numeric(rho)
    else:
        disc = generalized_discord_numeric(rho, (m,) + (0,) * (m - 1), config)
    return {
        "D": float(result.value),
        "discord": float(disc),
        "classical_basis_found": bool(result.value < config.zero_tol and defect < 10.0 * config.zero_tol),
        "defect": float(defect),
    }
