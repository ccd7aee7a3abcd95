"""Dense linear-algebra substrate for bipartite density operators.

Conventions used throughout the package:

* The composite space is A (x) B with A the leading tensor factor, so a
  matrix acting on the composite has row index ``a*N + b`` for subsystem
  indices ``a`` in A and ``b`` in B.
* All matrices are dense complex128 numpy arrays.
* Validation tolerances are module constants and are not configurable at
  call sites; code that needs looser comparisons should do so explicitly.
"""

from __future__ import annotations

import json

import numpy as np

# Validation tolerances (read-only; see class docstrings for semantics).
HERMITICITY_TOL = 1e-10
HERMITICITY_REPAIR_MAX = 1e-8
TRACE_TOL = 1e-10
PSD_TOL = 1e-10
UNITARITY_TOL = 1e-10
PURE_NORM_TOL = 1e-12


class InvalidStateError(ValueError):
    """Raised when a matrix fails the invariants of its claimed type."""


def _as_complex_matrix(matrix, name="matrix"):
    arr = np.asarray(matrix, dtype=complex)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise InvalidStateError(f"{name} must be square, got shape {arr.shape}")
    return arr


class DensityOperator:
    """A validated bipartite density operator on C^M (x) C^N.

    Construction validates, in order: shape (M*N square), Hermiticity,
    unit trace, and positive semidefiniteness.  Asymmetry up to
    ``HERMITICITY_REPAIR_MAX`` is repaired by symmetrization
    rho <- (rho + rho^dagger)/2; anything larger is rejected rather than
    silently patched, since it indicates corrupt input.
    """

    __slots__ = ("dim_a", "dim_b", "_matrix")

    def __init__(self, dim_a: int, dim_b: int, matrix):
        if dim_a < 1 or dim_b < 1:
            raise InvalidStateError("subsystem dimensions must be positive")
        arr = _as_complex_matrix(matrix, "density matrix")
        if arr.shape[0] != dim_a * dim_b:
            raise InvalidStateError(
                f"matrix is {arr.shape[0]}x{arr.shape[0]} but dim_a*dim_b = {dim_a * dim_b}"
            )
        asym = np.max(np.abs(arr - arr.conj().T)) if arr.size else 0.0
        if asym > HERMITICITY_REPAIR_MAX:
            raise InvalidStateError(f"matrix is not Hermitian: max|rho - rho^dagger| = {asym:.3e}")
        arr = 0.5 * (arr + arr.conj().T)
        tr = np.trace(arr).real
        if abs(tr - 1.0) > TRACE_TOL:
            raise InvalidStateError(f"trace(rho) = {tr!r}, expected 1 within {TRACE_TOL}")
        evals = np.linalg.eigvalsh(arr)
        if evals[0] < -PSD_TOL:
            raise InvalidStateError(f"matrix has negative eigenvalue {evals[0]:.3e}")
        arr.flags.writeable = False
        self.dim_a = int(dim_a)
        self.dim_b = int(dim_b)
        self._matrix = arr

    @property
    def matrix(self) -> np.ndarray:
        """The (M*N)x(M*N) matrix; read-only view."""
        return self._matrix

    @property
    def dim(self) -> int:
        return self.dim_a * self.dim_b

    def purity(self) -> float:
        return float(np.vdot(self._matrix, self._matrix).real)

    def __repr__(self):
        return f"DensityOperator(dim_a={self.dim_a}, dim_b={self.dim_b})"


class UnitaryOperator:
    """A validated dim x dim unitary (U^dagger U = I within UNITARITY_TOL)."""

    __slots__ = ("dim", "_matrix")

    def __init__(self, matrix):
        arr = _as_complex_matrix(matrix, "unitary matrix")
        defect = np.max(np.abs(arr.conj().T @ arr - np.eye(arr.shape[0])))
        if defect > UNITARITY_TOL:
            raise InvalidStateError(f"matrix is not unitary: max|U^dagger U - I| = {defect:.3e}")
        arr.flags.writeable = False
        self.dim = arr.shape[0]
        self._matrix = arr

    @property
    def matrix(self) -> np.ndarray:
        return self._matrix

    def __repr__(self):
        return f"UnitaryOperator(dim={self.dim})"


class PureState:
    """A unit vector in C^M (x) C^N, stored as amplitudes of length M*N."""

    __slots__ = ("dim_a", "dim_b", "_amplitudes")

    def __init__(self, dim_a: int, dim_b: int, amplitudes):
        vec = np.asarray(amplitudes, dtype=complex).reshape(-1)
        if vec.shape[0] != dim_a * dim_b:
            raise InvalidStateError(
                f"amplitude vector has length {vec.shape[0]}, expected {dim_a * dim_b}"
            )
        norm = np.linalg.norm(vec)
        if abs(norm - 1.0) > PURE_NORM_TOL:
            raise InvalidStateError(f"state norm is {norm!r}, expected 1 within {PURE_NORM_TOL}")
        vec.flags.writeable = False
        self.dim_a = int(dim_a)
        self.dim_b = int(dim_b)
        self._amplitudes = vec

    @property
    def amplitudes(self) -> np.ndarray:
        return self._amplitudes

    def to_density(self) -> DensityOperator:
        v = self._amplitudes
        return DensityOperator(self.dim_a, self.dim_b, np.outer(v, v.conj()))

    def schmidt_coefficients(self) -> np.ndarray:
        """Singular values of the M x N coefficient matrix, descending."""
        return np.linalg.svd(
            self._amplitudes.reshape(self.dim_a, self.dim_b), compute_uv=False
        )

    def __repr__(self):
        return f"PureState(dim_a={self.dim_a}, dim_b={self.dim_b})"


def kron(a, b) -> np.ndarray:
    """Kronecker product; realizes U (x) I acting on the composite space."""
    return np.kron(np.asarray(a, dtype=complex), np.asarray(b, dtype=complex))


def _ptrace_mat(mat: np.ndarray, m: int, n: int, keep: str) -> np.ndarray:
    r = mat.reshape(m, n, m, n)
    if keep == "A":
        return np.einsum("ibjb->ij", r)
    if keep == "B":
        return np.einsum("aiaj->ij", r)
    raise ValueError(f"keep must be 'A' or 'B', got {keep!r}")


def partial_trace(rho: DensityOperator, keep: str) -> np.ndarray:
    """Trace out one subsystem; returns rho_A (keep='A') or rho_B (keep='B')."""
    return _ptrace_mat(rho.matrix, rho.dim_a, rho.dim_b, keep)


def eig_hermitian(h):
    """Eigendecomposition of a Hermitian matrix.

    Returns (eigenvalues ascending, eigenvector matrix V) with
    h = V diag(w) V^dagger.  Rejects input whose asymmetry exceeds
    HERMITICITY_TOL instead of silently using one triangle.
    """
    arr = _as_complex_matrix(h, "hermitian matrix")
    asym = np.max(np.abs(arr - arr.conj().T))
    if asym > HERMITICITY_TOL:
        raise ValueError(f"matrix is not Hermitian: max|H - H^dagger| = {asym:.3e}")
    w, v = np.linalg.eigh(arr)
    return w, v


def random_density(m: int, n: int, rank: int, seed: int) -> DensityOperator:
    """Random density operator rho = G G^dagger / tr(G G^dagger).

    G is (m*n) x rank with i.i.d. standard complex Gaussian entries drawn
    from ``numpy.random.default_rng(seed)``, so output is bit-reproducible
    per seed.
    """
    dim = m * n
    if not 1 <= rank <= dim:
        raise ValueError(f"rank must be in [1, {dim}], got {rank}")
    rng = np.random.default_rng(seed)
    g = rng.standard_normal((dim, rank)) + 1j * rng.standard_normal((dim, rank))
    rho = g @ g.conj().T
    rho /= np.trace(rho).real
    return DensityOperator(m, n, rho)


def random_haar_unitary(m: int, seed: int) -> UnitaryOperator:
    """Haar-distributed unitary from the QR of a complex Ginibre matrix.

    The R-diagonal phase fix (Mezzadri's recipe) makes the QR factorization
    unique and the resulting Q exactly Haar, not merely unitary.
    """
    if m < 1:
        raise ValueError("dimension must be >= 1")
    rng = np.random.default_rng(seed)
    g = rng.standard_normal((m, m)) + 1j * rng.standard_normal((m, m))
    q, r = np.linalg.qr(g)
    d = np.diag(r)
    q = q * (d / np.abs(d))
    return UnitaryOperator(q)


def frobenius_distance(a, b) -> float:
    """sqrt(tr((a-b)^dagger (a-b))) for equal-shape matrices."""
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    if a.shape != b.shape:
        raise ValueError(f"shape mismatch: {a.shape} vs {b.shape}")
    return float(np.linalg.norm(a - b))


# --- JSON interchange -------------------------------------------------------
#
# Format: {"dim_a": M, "dim_b": N, "matrix": [[re, im], ...]} with the matrix
# flattened row-major; readers reject wrong lengths.


def density_to_json(rho: DensityOperator) -> dict:
    flat = rho.matrix.reshape(-1)
    return {
        "dim_a": rho.dim_a,
        "dim_b": rho.dim_b,
        "matrix": [[float(z.real), float(z.imag)] for z in flat],
    }


def density_from_json(obj) -> DensityOperator:
    if not isinstance(obj, dict):
        raise ValueError("expected a JSON object with dim_a/dim_b/matrix")
    try:
        m = int(obj["dim_a"])
        n = int(obj["dim_b"])
        entries = obj["matrix"]
    except (KeyError, TypeError) as exc:
        raise ValueError(f"missing or malformed field: {exc}") from exc
    dim = m * n
    if not isinstance(entries, list) or len(entries) != dim * dim:
        raise ValueError(
            f"matrix must be a flat list of {dim * dim} [re, im] pairs, got {len(entries) if isinstance(entries, list) else type(entries).__name__}"
        )
    try:
        flat = np.array([complex(re, im) for re, im in entries], dtype=complex)
    except (TypeError, ValueError) as exc:
        raise ValueError(f"matrix entries must be [re, im] pairs: {exc}") from exc
    return DensityOperator(m, n, flat.reshape(dim, dim))


def save_density(rho: DensityOperator, path) -> None:
    with open(path, "w") as fh:
        json.dump(density_to_json(rho), fh)


def load_density(path) -> DensityOperator:
    with open(path) as fh:
        obj = json.load(fh)
    return density_from_json(obj)
