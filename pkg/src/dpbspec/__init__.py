"""Spectral decomposition toolkit for doubly power-bounded matrices.

The package decides whether an invertible complex matrix has uniformly
bounded integer powers, constructs the idempotent resolution of identity
that certifies a positive verdict (by interpolation products and,
independently, by resolvent contour integrals), splits spaces along
coprime polynomial factors, and ships two small commutative algebra models
for context.
"""

from .dpb import (
    CommutatorDemo,
    DpbVerdict,
    EigenIdempotent,
    GelfandReport,
    InclusionChainReport,
    PeriodicDecomposition,
    TriangularReport,
    UnitaryLikeReport,
    commutator_counterexample,
    dpb_decide,
    gelfand_check,
    inclusion_chain_probe,
    koehler_rosenthal,
    periodic_decompose,
    power_growth_fit,
    triangular_pb_classify,
    unitary_like_check,
)
from .idempotents import (
    IdempotentSystem,
    IsometryProbe,
    SystemResiduals,
    VerificationReport,
    isometry_probe,
    lagrange_idempotents,
    left_regular,
    riesz_projection,
    verify_system,
)
from .linalg import (
    NORM_INF,
    NORM_ONE,
    NORM_TWO,
    Norm,
    PowerNormProfile,
    as_cmatrix,
    conjugated_norm,
    det,
    identity,
    inf_norm,
    inverse,
    matmul,
    matrix_from_json,
    matrix_power,
    matrix_to_json,
    norm_from_json,
    norm_to_json,
    one_norm,
    operator_norm,
    power_norm_profile,
)
from .polynomials import (
    KernelDecomposition,
    Poly,
    coprime,
    eval_at_matrix,
    extended_gcd,
    kernel_decomposition,
    kernel_dim,
    poly_arith,
    scaled_kernel_dim,
)
from .seqalg import (
    CyclicFourierElement,
    CyclicProbeReport,
    MobiusTruncation,
    WienerElement,
    cyclic_character,
    cyclic_dpb_probe,
    mobius_truncation,
    wiener_mul,
)
from .spectrum import (
    SpectrumCluster,
    cluster,
    default_cluster_tol,
    eigenvalues,
    on_unit_circle,
)

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
