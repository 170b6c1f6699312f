"""Exact Cech cohomology and K_0 splitting for twisting sheaves on the
projective line over a strongly Z-graded ring."""

from .errors import (
    DimensionMismatch,
    ModelMismatch,
    NonIntegralMultiplicity,
    NotChainMap,
    NotStronglyGraded,
    NotVect0,
    P1KError,
    RangeViolation,
    SchemaError,
    ShapeMismatch,
    TruncationUnstable,
    WindowTooSmall,
)
from .exactla import GF, QQ, Mat, parse_field
from .graded_ring import (
    checkerboard,
    crossed_product_witness,
    is_strongly_graded,
    laurent,
    load_ring,
    model_from_spec,
    partition_of_unity,
    polynomial,
    twisted_laurent,
)
from .sheaf import O, ChainMap, SheafComplex, SheafMorphism, TwistSum, cone, psi, random_complex
from .cohomology import coh_object, euler, gamma, hypercoh, k0_class, twist_theorem_check
from .splitting import is_acyclic, is_q_equiv, split_k0, verify_splitting

__version__ = "0.1.0"

__all__ = [
    "DimensionMismatch",
    "ModelMismatch",
    "NonIntegralMultiplicity",
    "NotChainMap",
    "NotStronglyGraded",
    "NotVect0",
    "P1KError",
    "RangeViolation",
    "SchemaError",
    "ShapeMismatch",
    "TruncationUnstable",
    "WindowTooSmall",
    "GF",
    "QQ",
    "Mat",
    "parse_field",
    "checkerboard",
    "crossed_product_witness",
    "is_strongly_graded",
    "laurent",
    "load_ring",
    "model_from_spec",
    "partition_of_unity",
    "polynomial",
    "twisted_laurent",
    "O",
    "ChainMap",
    "SheafComplex",
    "SheafMorphism",
    "TwistSum",
    "cone",
    "psi",
    "random_complex",
    "coh_object",
    "euler",
    "gamma",
    "hypercoh",
    "k0_class",
    "twist_theorem_check",
    "is_acyclic",
    "is_q_equiv",
    "split_k0",
    "verify_splitting",
]
