"""Necessary fermion N-representability conditions for 2-particle density operators."""

__version__ = "0.1.0"

from .basis import SlaterBasis, enumerate_basis, insert_orbital, rank_of, unrank
from .canonical import CanonicalForm, canonical_decompose, to_antisymmetric_matrix, xi_min_sq
from .conditions import (
    Condition,
    ConditionReport,
    b_condition,
    b_operator,
    c_condition,
    c_operator,
    dual_p_condition,
    eigen_bound_check,
    lambda_min_b,
    one_particle_bound,
    p_condition,
    run_all,
    strengthened_b_condition,
)
from .errors import ConsistencyError, DomainError, NumericError, ResourceError
from .operators import (
    DensityOperator,
    HermitianOperator,
    WaveFunction,
    antisymmetrizer_oracle,
    contract,
    expectation,
    hermitian_eig,
    lift_operator,
    lift_two_body,
    projector,
    wedge_with_orbital,
)
from .sampling import (
    SampleSpec,
    extreme_geminal,
    interpolated_family,
    random_pure_state,
    representable_d2,
    witness_search,
)
from .spectral3 import Spectrum3, analytic_spectrum3, lambda_max3, lambda_max_numeric
