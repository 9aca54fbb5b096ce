"""Nodal, segmental and combined polynomial interpolation on [-1, 1],
Lebesgue constants, and Fekete (Vandermonde-determinant-maximizing) supports."""

from .arcmap import (
    SpectralK,
    apply_K_inverse,
    apply_K_pointwise,
    apply_K_poly,
    fejer_functional,
    spectral_eigenvalues,
)
from .families import ALL_FAMILIES, family_nodes, family_result, support_family
from .fekete import (
    FeketeError,
    FeketeResult,
    det_rho_sweep,
    fekete_arc,
    fekete_concat_nonnormalized,
    fekete_concat_normalized,
    fekete_nodes_bruteforce,
    lgl_nodes,
)
from .interpolation import (
    QuadratureError,
    average,
    get_test_function,
    idempotence_check,
    interpolate,
    segment_integral,
)
from .lebesgue import (
    LebesgueEstimate,
    fejer_sum_sq,
    growth_profile,
    lebesgue_constant,
    lower_bound_floor,
    rows_to_csv,
)
from .polybasis import BasisKind, Polynomial, basis_matrix, eval_basis, integrate_basis, legendre_deriv
from .supports import (
    EPS_LEN,
    ArcFamily,
    Support,
    SupportSet,
    arc_to_supports,
    check_regular,
    concat_from_nodes,
)
from .vandermonde import (
    LagrangeBasis,
    Mode,
    ProductForm,
    VandermondeSystem,
    build,
    lagrange_basis,
    product_formula_det,
    sign_log_det,
)

__version__ = "0.1.0"
