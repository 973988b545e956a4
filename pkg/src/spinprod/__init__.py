"""Exact gamma-matrix representations of Clifford algebras of product spaces."""

from .clifford import (
    GammaRep,
    Signature,
    build_gamma,
    chirality,
    grading_split,
    verify_clifford,
)
from .exact import (
    ExactMatrix,
    GaussianRational,
    ShapeError,
    commutant_basis,
    direct_sum,
    exact_rank,
    kron,
    mat_mul,
    solve_intertwiner,
)
from .frames import PointFrame, assemble_metric, eguchi_sample, product_frame
from .graded import (
    GradedFactor,
    ProductModule,
    SpinorSubspace,
    build_parity,
    build_product,
    build_subspace,
    delta_sign,
    make_factor,
    split_gammas,
    verify_product_clifford,
)

__all__ = [
    "ExactMatrix",
    "GammaRep",
    "GaussianRational",
    "GradedFactor",
    "PointFrame",
    "ProductModule",
    "ShapeError",
    "Signature",
    "SpinorSubspace",
    "assemble_metric",
    "build_gamma",
    "build_parity",
    "build_product",
    "build_subspace",
    "chirality",
    "commutant_basis",
    "delta_sign",
    "direct_sum",
    "eguchi_sample",
    "exact_rank",
    "grading_split",
    "kron",
    "make_factor",
    "mat_mul",
    "product_frame",
    "solve_intertwiner",
    "split_gammas",
    "verify_clifford",
    "verify_product_clifford",
]

__version__ = "0.1.0"
