"""Generator bases and the Fano (Bloch) decomposition of bipartite states.

The generator set for dimension M is the generalized Gell-Mann family
built over an orthonormal basis {|k>}: symmetric elements
U_pq = |p><q| + |q><p|, antisymmetric V_pq = -i|p><q| + i|q><p|, and
diagonal W_r = sqrt(2/(r(r+1))) (sum_{k<r} |k><k| - r|r><r|).  All are
traceless Hermitian with tr(s_i s_j) = 2 delta_ij.  Element order is
fixed: U-block in lexicographic (p, q), then V-block likewise, then
W_1..W_{M-1}; the U/V-vs-W split is what the zero-discord tests key on.

A state decomposes as
    rho = (1/MN) (I + sum_i ra_i s_i (x) I + sum_j rb_j I (x) s_j
                  + sum_ij T_ij s_i (x) s_j)
with ra_i = (M/2) tr(rho_A s_i) and T_ij = (MN/4) tr((s_i (x) s_j) rho).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import (
    UNITARITY_TOL,
    DensityOperator,
    _as_complex_matrix,
    partial_trace,
)

# Extracted Fano coefficients are real for Hermitian input; residual
# imaginary parts above this are treated as evidence of a corrupt state.
IMAG_TOL = 1e-9


@dataclass(frozen=True)
class GeneratorBasis:
    """Ordered traceless Hermitian generators over a chosen basis of C^dim.

    ``elements`` is a (dim^2 - 1, dim, dim) array; ``index_map[i]`` tags
    element i as ("U", p, q), ("V", p, q) or ("W", r) with 0-based p < q
    and 1-based r (the W_r scaling index).
    """

    dim: int
    elements: np.ndarray
    index_map: tuple

    def __len__(self):
        return self.elements.shape[0]

    def uv_mask(self) -> np.ndarray:
        """Boolean mask selecting the off-diagonal (U- and V-block) elements."""
        return np.array([tag[0] in ("U", "V") for tag in self.index_map])


def generator_basis(m: int, basis_vectors=None) -> GeneratorBasis:
    """Build the M^2-1 generators over columns of ``basis_vectors``.

    ``basis_vectors`` defaults to the computational basis (identity); when
    given it must be unitary, and generators are built over its columns.
    For m=2 over the computational basis this yields the Paulis (X, Y, Z).
    """
    if m < 2:
        raise ValueError(f"generator basis needs dimension >= 2, got {m}")
    if basis_vectors is None:
        cols = np.eye(m, dtype=complex)
    else:
        cols = _as_complex_matrix(basis_vectors, "basis_vectors")
        if cols.shape[0] != m:
            raise ValueError(f"basis_vectors is {cols.shape[0]}x{cols.shape[0]}, expected {m}x{m}")
        if np.max(np.abs(cols.conj().T @ cols - np.eye(m))) > UNITARITY_TOL:
            raise ValueError("basis_vectors must be unitary (orthonormal columns)")

    elements = []
    index_map = []
    pairs = [(p, q) for p in range(m) for q in range(p + 1, m)]
    outer = np.einsum("ap,bq->pqab", cols, cols.conj())  # outer[p,q] = |p><q|
    for p, q in pairs:
        elements.append(outer[p, q] + outer[q, p])
        index_map.append(("U", p, q))
    for p, q in pairs:
        elements.append(-1j * outer[p, q] + 1j * outer[q, p])
        index_map.append(("V", p, q))
    for r in range(1, m):
        w = sum(outer[k, k] for k in range(r)) - r * outer[r, r]
        elements.append(np.sqrt(2.0 / (r * (r + 1))) * w)
        index_map.append(("W", r))

    stack = np.array(elements)
    stack.flags.writeable = False
    return GeneratorBasis(dim=m, elements=stack, index_map=tuple(index_map))


@dataclass(frozen=True)
class FanoForm:
    dim_a: int
    dim_b: int
    r_a: np.ndarray
    r_b: np.ndarray
    t: np.ndarray
    basis_a: GeneratorBasis
    basis_b: GeneratorBasis

    def to_json(self) -> dict:
        return {
            "dim_a": self.dim_a,
            "dim_b": self.dim_b,
            "r_a": self.r_a.tolist(),
            "r_b": self.r_b.tolist(),
            "t": self.t.tolist(),
            "index_map_a": [list(tag) for tag in self.basis_a.index_map],
            "index_map_b": [list(tag) for tag in self.basis_b.index_map],
        }


def _real_part(arr: np.ndarray, what: str) -> np.ndarray:
    worst = np.max(np.abs(arr.imag)) if arr.size else 0.0
    if worst > IMAG_TOL:
        raise ValueError(f"{what} has imaginary part {worst:.3e}; input is not Hermitian enough")
    return np.ascontiguousarray(arr.real)


def fano_decompose(rho: DensityOperator, basis_a=None, basis_b=None) -> FanoForm:
    """Coefficients (r_a, r_b, T) of rho over generator bases for A and B.

    ``basis_a``/``basis_b`` are GeneratorBasis instances (default:
    computational-basis generators), so the Fano form can be taken over a
    rotated basis without moving the state.
    """
    m, n = rho.dim_a, rho.dim_b
    ga = basis_a if basis_a is not None else generator_basis(m)
    gb = basis_b if basis_b is not None else generator_basis(n)
    if ga.dim != m or gb.dim != n:
        raise ValueError("generator basis dimensions do not match the state")

    rho_a = partial_trace(rho, "A")
    rho_b = partial_trace(rho, "B")
    r_a = _real_part((m / 2.0) * np.einsum("iab,ba->i", ga.elements, rho_a), "r_a")
    r_b = _real_part((n / 2.0) * np.einsum("iab,ba->i", gb.elements, rho_b), "r_b")
    r4 = rho.matrix.reshape(m, n, m, n)
    t = _real_part(
        (m * n / 4.0) * np.einsum("iab,jcd,bdac->ij", ga.elements, gb.elements, r4), "T"
    )
    if m == 2 and np.linalg.norm(r_a) > 1.0 + 1e-9:
        raise ValueError(f"Bloch vector norm {np.linalg.norm(r_a)} exceeds 1 for a qubit marginal")
    return FanoForm(dim_a=m, dim_b=n, r_a=r_a, r_b=r_b, t=t, basis_a=ga, basis_b=gb)


def fano_reconstruct(f: FanoForm) -> DensityOperator:
    """Rebuild the density operator from its Fano coefficients.

    Raises InvalidStateError if the coefficients do not describe a valid
    state (never happens for forms produced by fano_decompose).
    """
    m, n = f.dim_a, f.dim_b
    if len(f.r_a) != m * m - 1 or len(f.r_b) != n * n - 1 or f.t.shape != (m * m - 1, n * n - 1):
        raise ValueError("coefficient shapes are inconsistent with (dim_a, dim_b)")
    a_part = np.einsum("i,iab->ab", f.r_a, f.basis_a.elements)
    b_part = np.einsum("j,jab->ab", f.r_b, f.basis_b.elements)
    corr = np.einsum("ij,iab,jcd->acbd", f.t, f.basis_a.elements, f.basis_b.elements)
    mat = (
        np.eye(m * n, dtype=complex)
        + np.kron(a_part, np.eye(n))
        + np.kron(np.eye(m), b_part)
        + corr.reshape(m * n, m * n)
    ) / (m * n)
    return DensityOperator(m, n, mat)
