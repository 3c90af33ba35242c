"""Conservative-irreversible 4-tensors on R^n.

Construction and validation of the order-4 tensor symmetry class and its
PSD cone, explicit bases, decomposition into weighted squares of skew
matrices, pointwise bracket evaluations, and a fixed-step simulator for
irreversible Hamiltonian systems whose trajectories conserve energy and
produce entropy at the vector-field level.

All values are immutable after construction and all operations are pure
functions of their inputs; concurrent use needs no locking.
"""

from .basis import (
    BasisElement,
    ConeEvidence,
    RankDeficientBasisError,
    cone_membership,
    coordinates,
    enumerate_basis,
    make_basis_element,
    make_cone_element,
    psd_basis,
    symmetry_class_dim,
)
from .brackets import (
    Metriplectic4Bracket,
    check_polarization,
    check_sqps_identities,
    ci_eval,
    e_eval,
    jacobi_residual,
    make_probes,
    mp4_cyclic_residual,
    mp4_eval,
    poisson_eval,
    polarize_sqps,
    sqps_eval,
    symmetrize_mp4,
)
from .dynamics import (
    IntegrationError,
    IntegratorConfig,
    NoninteractionError,
    SystemSpec,
    Trajectory,
    be_bracket,
    ci_field,
    diagnostics,
    entropy_rate,
    integrate,
    irr_ham_field,
    metriplectic_bracket,
    validate_system,
)
from .fields import (
    FieldValidationError,
    GradientMismatchError,
    Polynomial,
    ScalarField,
    SkewField,
    TensorField,
    fd_gradient,
    validate_gradient,
)
from .simple import (
    Decomposition,
    NotSkewError,
    SimpleComponent,
    SimplicityResult,
    SkewMatrix,
    decompose,
    generator_matrix,
    is_simple,
    simple_tensor,
)
from .systems import SpecFormatError, load_system, system_from_obj
from .tensor import (
    DEFAULT_TOL,
    MAX_DIM,
    DimensionMismatchError,
    NotInSymmetryClassError,
    SymmetryReport,
    Tensor4,
    check_symmetries,
    compose_perms,
    constraint_matrix,
    eval_tensor,
    permute,
    project_symmetry_class,
    psd_directions,
    symmetry_class_nullity,
)

__version__ = "0.1.0"
