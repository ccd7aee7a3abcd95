"""The local-unitary disturbance measure and its minimizers.

D(rho, U) = (1/sqrt(2)) ||rho - (U (x) I) rho (U^dag (x) I)||_F is driven
to its minimum over the root-of-unity (RU) class: unitaries whose spectrum
is a permutation of the M-th roots of unity.  Since conjugation by V maps
one RU unitary to another, the eigenvalue permutation can be absorbed into
the eigenbasis, and the search runs over eigenbases V alone with the
eigenvalue vector held fixed.  A generalization fixes an eigenvalue
multiplicity pattern v (v_j eigenvalues of multiplicity j) and uses the
K-th roots of unity for the K = sum(v) distinct eigenvalues.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import permutations

import numpy as np

from . import closed_forms, kernels
from .core import (
    DensityOperator,
    UnitaryOperator,
    frobenius_distance,
    kron,
    random_haar_unitary,
)

# Values of D below this are classified as zero (state invariant under
# some admissible unitary); entropy-based classifiers use looser cuts.
ZERO_TOL = 1e-7


def roots_of_unity(m: int) -> np.ndarray:
    """v_k = exp(2 pi i k / m) for k = 1..m (so the last entry is 1)."""
    return np.exp(2j * np.pi * np.arange(1, m + 1) / m)


@dataclass(frozen=True)
class OptimizerConfig:
    restarts: int = 32
    max_iters: int = 2000
    tol: float = 1e-10
    seed: int = 0
    zero_tol: float = ZERO_TOL

    def __post_init__(self):
        if self.restarts < 1 or self.max_iters < 1:
            raise ValueError("restarts and max_iters must be positive")
        if self.tol <= 0 or self.zero_tol <= 0:
            raise ValueError("tolerances must be positive")


@dataclass(frozen=True)
class MultiplicityVector:
    """Eigenvalue multiplicity pattern: v[j-1] eigenvalues of multiplicity j.

    Constraint: sum_j v_j * j = M with M = len(v).  (M, 0, ..., 0) is the
    RU pattern; (0, ..., 0, 1) is the identity (a single M-fold eigenvalue).
    """

    v: tuple

    def __post_init__(self):
        v = tuple(int(x) for x in self.v)
        object.__setattr__(self, "v", v)
        if not v or any(x < 0 for x in v):
            raise ValueError("multiplicity vector entries must be nonnegative")
        if sum(c * (j + 1) for j, c in enumerate(v)) != len(v):
            raise ValueError(f"multiplicity pattern {v} does not partition dimension {len(v)}")

    @property
    def dim(self) -> int:
        return len(self.v)

    @property
    def num_distinct(self) -> int:
        return sum(self.v)

    def multiplicities(self) -> tuple:
        """The block sizes, one per distinct eigenvalue, descending."""
        out = []
        for j, count in enumerate(self.v):
            out.extend([j + 1] * count)
        return tuple(sorted(out, reverse=True))


@dataclass(frozen=True)
class RUUnitary:
    """An RU unitary stored as (eigenbasis, eigenvalue permutation).

    The realized matrix is V diag(v_perm(1), ..., v_perm(M)) V^dag with
    v_k = exp(2 pi i k / M); permutations are 1-based like the roots.
    """

    dim: int
    eigenbasis: np.ndarray
    permutation: tuple
    matrix: np.ndarray

    def to_unitary(self) -> UnitaryOperator:
        return UnitaryOperator(self.matrix)


@dataclass(frozen=True)
class MeasureResult:
    value: float
    optimizer_u: UnitaryOperator
    method: str  # closed_form_2xN | werner_formula | pure_formula | optimizer
    restarts_used: int
    residual: float  # best-vs-next-best gap across restarts, squared-objective units
    converged: bool = True

    def __post_init__(self):
        if not -1e-9 <= self.value <= 1 + 1e-9:
            raise ValueError(f"measure value {self.value} outside [0, 1]")


def _as_unitary(u) -> UnitaryOperator:
    if isinstance(u, UnitaryOperator):
        return u
    if isinstance(u, RUUnitary):
        return u.to_unitary()
    return UnitaryOperator(u)


def d_given_u(rho: DensityOperator, u) -> float:
    """Disturbance of rho under a specific unitary on A.

    Evaluates both the scaled Frobenius-distance form and the overlap form
    sqrt(tr(rho^2) - tr(rho rho_f)) and insists they agree to 1e-10; the
    check costs little and catches state/unitary corruption early.
    """
    u_op = _as_unitary(u)
    if u_op.dim != rho.dim_a:
        raise ValueError(f"unitary dimension {u_op.dim} does not match dim_a={rho.dim_a}")
    w = kron(u_op.matrix, np.eye(rho.dim_b))
    rho_f = w @ rho.matrix @ w.conj().T
    d_dist = frobenius_distance(rho.matrix, rho_f) / np.sqrt(2.0)
    overlap = rho.purity() - float(np.vdot(rho_f, rho.matrix).real)
    d_overlap = np.sqrt(max(overlap, 0.0))
    if abs(d_dist - d_overlap) > 1e-10:
        raise RuntimeError(
            f"distance and overlap forms disagree: {d_dist!r} vs {d_overlap!r}"
        )
    return d_overlap


def is_invariant_under(rho: DensityOperator, u, eps: float = ZERO_TOL) -> bool:
    return d_given_u(rho, u) < eps


def make_ru_unitary(m: int, eigenbasis=None, permutation=None) -> RUUnitary:
    """RU unitary with the given eigenbasis columns and eigenvalue order."""
    basis = np.eye(m, dtype=complex) if eigenbasis is None else _as_unitary(eigenbasis).matrix
    if basis.shape[0] != m:
        raise ValueError(f"eigenbasis is {basis.shape[0]}x{basis.shape[0]}, expected {m}x{m}")
    perm = tuple(range(1, m + 1)) if permutation is None else tuple(int(k) for k in permutation)
    if sorted(perm) != list(range(1, m + 1)):
        raise ValueError(f"{perm} is not a permutation of 1..{m}")
    lam = np.exp(2j * np.pi * np.asarray(perm) / m)
    matrix = (basis * lam) @ basis.conj().T
    return RUUnitary(dim=m, eigenbasis=basis, permutation=perm, matrix=matrix)


def ru_from_bloch(theta: float, phi: float) -> UnitaryOperator:
    """The qubit RU unitary 2|u><u| - I for |u> at Bloch angles (theta, phi)."""
    c, s = np.cos(theta / 2.0), np.sin(theta / 2.0)
    u = np.array([c, np.exp(1j * phi) * s])
    return UnitaryOperator(2.0 * np.outer(u, u.conj()) - np.eye(2))


def make_multiplicity_unitary(v, eigenbasis=None, assignment=None) -> UnitaryOperator:
    """Unitary with multiplicity pattern v over the given eigenbasis.

    ``assignment`` lists the multiplicity given to each of the K distinct
    eigenvalues (the K-th roots of unity, in root order); consecutive
    eigenbasis columns form the blocks.  Defaults to descending block sizes.
    """
    mv = v if isinstance(v, MultiplicityVector) else MultiplicityVector(tuple(v))
    m = mv.dim
    basis = np.eye(m, dtype=complex) if eigenbasis is None else _as_unitary(eigenbasis).matrix
    if basis.shape[0] != m:
        raise ValueError(f"eigenbasis is {basis.shape[0]}x{basis.shape[0]}, expected {m}x{m}")
    blocks = mv.multiplicities() if assignment is None else tuple(int(b) for b in assignment)
    if tuple(sorted(blocks, reverse=True)) != mv.multiplicities():
        raise ValueError(f"block sizes {blocks} do not realize multiplicity pattern {mv.v}")
    k = len(blocks)
    lam = np.repeat(np.exp(2j * np.pi * np.arange(1, k + 1) / k), blocks)
    return UnitaryOperator((basis * lam) @ basis.conj().T)


def _polish_unitary(v: np.ndarray) -> np.ndarray:
    # re-orthonormalize if Givens round-off has accumulated past tolerance
    defect = np.max(np.abs(v.conj().T @ v - np.eye(v.shape[0])))
    if defect <= 1e-12:
        return v
    q, r = np.linalg.qr(v)
    d = np.diag(r)
    return q * (d / np.abs(d))


def _restart_residual(values) -> float:
    if len(values) < 2:
        return 0.0
    s = sorted(values)
    return s[1] - s[0]


def _check_2xn_upper_bound(rho: DensityOperator, value: float) -> None:
    bound = closed_forms.upper_bound_2xN(rho)
    if value > bound + 1e-8:
        raise RuntimeError(
            f"minimized value {value} exceeds the 2xN upper bound {bound}; internal error"
        )


def _descend_restarts(rho, lam_by_class, config):
    """Run config.restarts descents per eigenvalue class; return best + all f."""
    m = rho.dim_a
    c_kernel = kernels.interaction_kernel(rho.matrix, m, rho.dim_b)
    purity = rho.purity()
    best = None
    all_f = []
    seed = config.seed
    for lam in lam_by_class:
        for _ in range(config.restarts):
            v0 = random_haar_unitary(m, seed).matrix
            seed += 1
            f, v, _sweeps = kernels.ru_descent(
                c_kernel, purity, v0, lam, max_sweeps=config.max_iters
            )
            all_f.append(f)
            if best is None or f < best[0]:
                best = (f, v, lam)
    f_best, v_best, lam_best = best
    v_best = _polish_unitary(v_best)
    u = UnitaryOperator((v_best * lam_best) @ v_best.conj().T)
    value = float(np.sqrt(max(f_best, 0.0)))
    return value, u, _restart_residual(all_f), seed - config.seed


def minimize_d(
    rho: DensityOperator, config: OptimizerConfig | None = None, force_generic: bool = False
) -> MeasureResult:
    """D(rho): the minimal disturbance over RU unitaries on A.

    For dim_a = 2 this dispatches to the exact 2xN closed form (and reports
    the optimizing unitary from its eigenvector); ``force_generic`` runs the
    restarted descent instead, which is how the closed form gets validated.
    Non-convergence (restart values not replicated within config.tol) flags
    the result; the value is still a valid upper bound on D.
    """
    config = config or OptimizerConfig()
    m = rho.dim_a
    if m == 1:
        # only one RU "unitary" (the scalar 1): nothing can be disturbed
        return MeasureResult(0.0, UnitaryOperator(np.eye(1)), "optimizer", 0, 0.0, True)
    if m == 2 and not force_generic:
        value, u = closed_forms.optimal_ru_unitary_2xN(rho)
        _check_2xn_upper_bound(rho, value)
        return MeasureResult(value, u, "closed_form_2xN", 0, 0.0, True)

    lam = roots_of_unity(m)
    value, u, residual, used = _descend_restarts(rho, [lam], config)
    if m == 2:
        _check_2xn_upper_bound(rho, value)
    return MeasureResult(value, u, "optimizer", used, residual, residual <= config.tol)


def _assignment_classes(mults: tuple):
    """Distinct root assignments up to rotation and reflection of the circle.

    Rotating the root circle multiplies U by a global phase and reflecting
    it conjugates U; neither changes the disturbance, so only necklace
    classes of the multiplicity multiset need separate minimization.
    """
    classes = set()
    for perm in set(permutations(mults)):
        variants = [perm[i:] + perm[:i] for i in range(len(perm))]
        rev = perm[::-1]
        variants += [rev[i:] + rev[:i] for i in range(len(rev))]
        classes.add(min(variants))
    return sorted(classes)


def minimize_d_multiplicity(
    rho: DensityOperator, v, config: OptimizerConfig | None = None
) -> MeasureResult:
    """Minimal disturbance over unitaries with eigenvalue multiplicities v."""
    config = config or OptimizerConfig()
    mv = v if isinstance(v, MultiplicityVector) else MultiplicityVector(tuple(v))
    m = rho.dim_a
    if mv.dim != m:
        raise ValueError(f"multiplicity vector is for dimension {mv.dim}, state has dim_a={m}")
    if mv.num_distinct == 1:
        # single M-fold eigenvalue: U is the identity up to phase
        return MeasureResult(0.0, UnitaryOperator(np.eye(m)), "optimizer", 0, 0.0, True)
    k = mv.num_distinct
    roots = np.exp(2j * np.pi * np.arange(1, k + 1) / k)
    lam_by_class = [np.repeat(roots, cls) for cls in _assignment_classes(mv.multiplicities())]
    value, u, residual, used = _descend_restarts(rho, lam_by_class, config)
    return MeasureResult(value, u, "optimizer", used, residual, residual <= config.tol)
