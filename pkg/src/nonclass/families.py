"""Named state families for tests, sweeps, and the CLI registry.

Every constructor is deterministic in its arguments (seeded where
random).  The discordant/classical constructions are tuned so that the
classicality indicators are separated by comfortable margins: classical
families sit numerically at zero, discordant ones are bounded away from
it across the seed range the test suites use.
"""

from __future__ import annotations

import numpy as np

from .closed_forms import (
    SeparableEnsemble,
    WernerParams,
    rank2_separable_ensemble,
    werner_state,
)
from .core import (
    DensityOperator,
    PureState,
    kron,
    random_density,
    random_haar_unitary,
)
from .fano import FanoForm, fano_reconstruct, generator_basis

__all__ = [
    "bell",
    "schmidt_pure",
    "schmidt_state",
    "random_schmidt_state",
    "classical_quantum",
    "discordant_mixture",
    "random_maximally_mixed_a",
    "random_separable_ensemble",
    "SeparableEnsemble",
    "WernerParams",
    "rank2_separable_ensemble",
    "werner_state",
]


def bell() -> DensityOperator:
    """The maximally entangled two-qubit state (|00> + |11>)/sqrt(2)."""
    return schmidt_pure(1.0 / np.sqrt(2.0)).to_density()


def schmidt_pure(a: float) -> PureState:
    """a|00> + sqrt(1 - a^2)|11> for a in [0, 1]."""
    if not 0.0 <= a <= 1.0:
        raise ValueError(f"Schmidt coefficient must lie in [0, 1], got {a}")
    b = np.sqrt(max(1.0 - a * a, 0.0))
    return PureState(2, 2, np.array([a, 0.0, 0.0, b]))


def schmidt_state(alphas, dim_b: int | None = None) -> PureState:
    """sum_k alpha_k |kk> on C^M (x) C^N with M = len(alphas), N >= M."""
    a = np.asarray(alphas, dtype=float).reshape(-1)
    m = a.shape[0]
    n = m if dim_b is None else int(dim_b)
    if n < m:
        raise ValueError(f"dim_b = {n} cannot hold {m} Schmidt terms")
    amp = np.zeros(m * n, dtype=complex)
    for k in range(m):
        amp[k * n + k] = a[k]
    return PureState(m, n, amp / np.linalg.norm(amp))


def random_schmidt_state(m: int, n: int, rank: int, seed: int) -> PureState:
    """Haar-rotated pure state with exactly ``rank`` Schmidt terms.

    Coefficients are drawn from [0.35, 1] before normalization, keeping
    the numerical Schmidt rank unambiguous.
    """
    if not 1 <= rank <= min(m, n):
        raise ValueError(f"rank must be in [1, {min(m, n)}], got {rank}")
    rng = np.random.default_rng(seed)
    coeff = rng.uniform(0.35, 1.0, size=rank)
    coeff /= np.linalg.norm(coeff)
    u_a = random_haar_unitary(m, rng).matrix
    u_b = random_haar_unitary(n, rng).matrix
    amp = np.zeros(m * n, dtype=complex)
    for k in range(rank):
        amp += coeff[k] * np.kron(u_a[:, k], u_b[:, k])
    return PureState(m, n, amp)


def classical_quantum(seed: int, m: int = 2, n: int = 2) -> DensityOperator:
    """sum_i p_i |v_i><v_i| (x) tau_i over a Haar-random orthonormal A-basis.

    Zero discord by construction; the defining basis is random so that
    classical-basis searches cannot succeed by defaulting to the
    computational basis.
    """
    rng = np.random.default_rng(seed)
    probs = rng.dirichlet(np.ones(m))
    basis = random_haar_unitary(m, rng).matrix
    mat = np.zeros((m * n, m * n), dtype=complex)
    for i in range(m):
        tau = random_density(1, n, n, rng).matrix
        vi = basis[:, i]
        mat += probs[i] * np.kron(np.outer(vi, vi.conj()), tau)
    return DensityOperator(m, n, mat)


def discordant_mixture(seed: int) -> DensityOperator:
    """A two-qubit separable state with strictly positive discord.

    An equal mixture of two product terms whose A-components do not
    commute (overlap bounded away from 0 and 1) and whose B-components
    are nearly orthogonal, conjugated by random local unitaries.  The
    angle windows keep D, the entropic discord, and the Fano defect all
    bounded away from zero across seeds.
    """
    rng = np.random.default_rng(seed)
    beta = rng.uniform(0.4, 1.2)
    alpha = rng.uniform(2.0, np.pi)
    rho = rank2_separable_ensemble(alpha, beta).to_density()
    w = kron(random_haar_unitary(2, rng).matrix, random_haar_unitary(2, rng).matrix)
    return DensityOperator(2, 2, w @ rho.matrix @ w.conj().T)


def random_maximally_mixed_a(seed: int, m: int = 2, n: int = 2) -> DensityOperator:
    """Random state with r_A exactly zero (A-marginal maximally mixed).

    Built in Fano form with the A-Bloch block zeroed and the remaining
    coefficients scaled so the correction term has spectral norm 0.9,
    which guarantees positivity outright.
    """
    rng = np.random.default_rng(seed)
    ga, gb = generator_basis(m), generator_basis(n)
    r_b = rng.standard_normal(n * n - 1)
    t = rng.standard_normal((m * m - 1, n * n - 1))
    correction = np.kron(np.eye(m), np.einsum("j,jab->ab", r_b, gb.elements)) + np.einsum(
        "ij,iab,jcd->acbd", t, ga.elements, gb.elements
    ).reshape(m * n, m * n)
    scale = 0.9 / max(np.abs(np.linalg.eigvalsh(correction)))
    form = FanoForm(
        dim_a=m,
        dim_b=n,
        r_a=np.zeros(m * m - 1),
        r_b=scale * r_b,
        t=scale * t,
        basis_a=ga,
        basis_b=gb,
    )
    return fano_reconstruct(form)


def random_separable_ensemble(n_terms: int, seed: int) -> SeparableEnsemble:
    """Random two-qubit separable ensemble: flat-simplex weights, Haar states."""
    if n_terms < 1:
        raise ValueError("need at least one term")
    rng = np.random.default_rng(seed)
    probs = rng.dirichlet(np.ones(n_terms))
    terms = []
    for i in range(n_terms):
        a = rng.standard_normal(2) + 1j * rng.standard_normal(2)
        b = rng.standard_normal(2) + 1j * rng.standard_normal(2)
        terms.append((probs[i], a / np.linalg.norm(a), b / np.linalg.norm(b)))
    return SeparableEnsemble(tuple(terms))
