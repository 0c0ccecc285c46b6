"""Exact tools for classifying polynomial self-maps of the plane."""

from .errors import (
    AlgebraicallyDependentError,
    ContextMismatchError,
    DegreeCapExceeded,
    ExactDivisionError,
    InternalInconsistencyError,
    KellerError,
    MembershipFailedError,
    MissingAssignmentError,
    NotShapePositionError,
    ParseError,
    RecipeError,
    ResourceCapExceeded,
    UnknownVariableError,
    ZeroKernelError,
)
from .factor import (
    Factorization,
    PreservationReport,
    ProbeResult,
    UnitsVerdict,
    UnitWitness,
    absolute_irreducibility,
    factor_bivariate,
    factorially_closed_probe,
    image_under,
    localization_units_check,
    squarefree_decomposition,
    stays_irreducible,
)
from .funcfield import (
    FFPolynomial,
    RationalFunction,
    UVDecomposition,
    shape_basis,
    uv_decomposition,
)
from .groebner import (
    GREVLEX,
    LEX,
    Ideal,
    KernelGenerator,
    MonomialOrder,
    RunStats,
    birationality_degree,
    block_order,
    buchberger,
    eliminate,
    kernel_generator,
    normal_form,
    subring_membership,
)
from .parsing import parse_expression, parse_poly
from .pipeline import (
    ClassificationReport,
    PipelineConfig,
    TfaeReport,
    Verdict,
    classify,
    cross_check_tfae,
    invert,
    verify_inverse,
)
from .poly import (
    U12,
    U123,
    XY,
    Endomorphism,
    JacobianInfo,
    Polynomial,
    VarContext,
    compose,
    gcd_and_content,
    identity_map,
    jacobian_det,
    partial_derivative,
    poly_gcd,
    poly_lcm,
    substitute,
)
from .tame import (
    Affine,
    ElementaryX,
    ElementaryY,
    TameRecipe,
    generate_tame,
    random_tame,
)

__version__ = "0.1.0"
