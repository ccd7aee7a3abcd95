"""Local-unitary disturbance measures for bipartite quantum states.

The central quantity is D(rho): the minimal normalized Frobenius distance
between rho and its image under a one-sided root-of-unity unitary, minimized
over all such unitaries.  The package provides exact formulas where they
exist (qubit-side states, Werner states, pure states, separable ensembles),
a seeded numerical minimizer for everything else, entropic discord routines,
and the equivalence tests connecting D = 0, zero discord, and the existence
of an invariant local measurement.
"""

from .closed_forms import (
    SeparableEnsemble,
    WernerParams,
    d_closed_2xN,
    geometric_discord_2x2,
    horodecki_m,
    is_maximally_entangled_by_d,
    lower_bound_2xN,
    max_nonclassical_rank2_check,
    normal_form_2x2,
    optimal_ru_unitary_2xN,
    pure_state_objective,
    rank2_delta,
    rank2_separable_ensemble,
    separable_d_given_u,
    separable_upper_bound,
    upper_bound_2xN,
    werner_d,
    werner_d_given_u,
    werner_discord,
    werner_state,
)
from .core import (
    DensityOperator,
    InvalidStateError,
    PureState,
    UnitaryOperator,
    density_from_json,
    density_to_json,
    frobenius_distance,
    kron,
    load_density,
    partial_trace,
    random_density,
    random_haar_unitary,
    save_density,
)
from .discord import (
    ProjectiveMeasurement,
    classification_report,
    discord_numeric,
    entropy2,
    fano_offdiagonal_defect,
    find_classical_basis,
    generalized_discord_numeric,
    minimize_projective_defect,
    projective_invariance_defect,
)
from .fano import FanoForm, GeneratorBasis, fano_decompose, fano_reconstruct, generator_basis
from .kernels import backend, interaction_kernel
from .measure import (
    MeasureResult,
    MultiplicityVector,
    OptimizerConfig,
    RUUnitary,
    d_given_u,
    is_invariant_under,
    make_multiplicity_unitary,
    make_ru_unitary,
    minimize_d,
    minimize_d_multiplicity,
    roots_of_unity,
    ru_from_bloch,
)

__version__ = "0.1.0"

__all__ = [
    "DensityOperator",
    "FanoForm",
    "GeneratorBasis",
    "InvalidStateError",
    "MeasureResult",
    "MultiplicityVector",
    "OptimizerConfig",
    "ProjectiveMeasurement",
    "PureState",
    "RUUnitary",
    "SeparableEnsemble",
    "UnitaryOperator",
    "WernerParams",
    "backend",
    "classification_report",
    "d_closed_2xN",
    "d_given_u",
    "density_from_json",
    "density_to_json",
    "discord_numeric",
    "entropy2",
    "fano_decompose",
    "fano_offdiagonal_defect",
    "fano_reconstruct",
    "find_classical_basis",
    "frobenius_distance",
    "generalized_discord_numeric",
    "generator_basis",
    "geometric_discord_2x2",
    "horodecki_m",
    "interaction_kernel",
    "is_invariant_under",
    "is_maximally_entangled_by_d",
    "kron",
    "load_density",
    "lower_bound_2xN",
    "make_multiplicity_unitary",
    "make_ru_unitary",
    "max_nonclassical_rank2_check",
    "minimize_d",
    "minimize_d_multiplicity",
    "minimize_projective_defect",
    "normal_form_2x2",
    "optimal_ru_unitary_2xN",
    "partial_trace",
    "projective_invariance_defect",
    "pure_state_objective",
    "random_density",
    "random_haar_unitary",
    "rank2_delta",
    "rank2_separable_ensemble",
    "roots_of_unity",
    "ru_from_bloch",
    "save_density",
    "separable_d_given_u",
    "separable_upper_bound",
    "upper_bound_2xN",
    "werner_d",
    "werner_d_given_u",
    "werner_discord",
    "werner_state",
]
