"""
Bergman, Szego and Poisson-Szego kernels on model domains in one and two
complex variables: closed forms, orthonormal-series assembly, transport
by biholomorphic maps, quadrature projections and the Bergman geometry of
the unit ball in C^2.
"""

from .core import (
    ANNULUS,
    BALL2,
    DISC,
    HALFPLANE,
    QUARTERPLANE,
    Domain,
    DomainError,
    Point,
    PoleError,
    QuadratureRule,
    as_point,
    boundary_distance,
    integrate,
    make_area_quadrature,
    make_boundary_quadrature,
)
from .basis import (
    NumericalDependenceError,
    OrthonormalSystem,
    SeriesKernel,
    annulus_bergman_basis,
    assemble_series_kernel,
    disc_bergman_basis,
    disc_hardy_basis,
    gram_schmidt,
)
from .catalog import (
    CATALOG,
    AnnulusTerms,
    BlowupReport,
    InvariantViolation,
    Kernel,
    annulus_error_terms,
    annulus_kernel_approx,
    annulus_series,
    blowup_probe,
    eval_closed_form,
    extremal_value,
    kernel,
    poisson_szego_from,
)
from .transport import (
    ConformalMap,
    JacobianPair,
    cayley,
    compose,
    inversion,
    mobius,
    pullback_kernel,
    real_jacobian_det,
    square,
    unitary2,
    unitary_invariance_check,
)
from .projections import (
    BoundaryFunction,
    ProjectionResult,
    bergman_project,
    idempotence_check,
    poisson_szego_extend,
    self_adjointness_gap,
    szego_project,
)
from .ballgeom import (
    DefiningFunction,
    HermitianMetric2,
    TangencyError,
    annihilation_check,
    ball2_defining_function,
    bergman_metric,
    bergman_metric_fd,
    divergence_residual,
    inverse_metric,
    invariant_laplacian,
    levi_form,
    metric_det,
)

__version__ = "0.1.0"
