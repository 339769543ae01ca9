"""Matrix and tensor decompositions induced by sparsifying costs on group orbits.

A decomposition is recovered by minimizing a sparsifying entrywise cost over
the orbit of the input under a product of unit matrix groups. The minimizer's
group elements become the factors and the optimally sparse orbit point becomes
the core. The same machinery normalizes point clouds under the special linear
group and checks the norm inequalities that justify the costs.
"""

from .costs import (
    CappedPow,
    Combined,
    Entropy,
    EntrywisePow,
    EntrywisePowNeg,
    InfNorm,
    Log1p,
    MaskedPow,
    Nnz,
    SparsifyReport,
    check_sparsifying,
    parse_cost,
)
from .decompose import (
    DecompositionResult,
    GooSolution,
    GroupOrbitDecomposition,
    InequalityReport,
    canonicalize_pseudo_diagonal,
    goo_solve,
    recover,
    verify_inequalities,
)
from .groups import (
    GroupSpec,
    LeftOnly,
    Similarity,
    TensorModes,
    TwoSided,
    apply_action,
    embed,
    embed_inverse,
    is_member,
    lie_dim,
    parse_action,
    parse_group,
)
from .linalg import fold, mat_exp, mode_product, multi_mode_product, unfold, unvec, vec
from .optimize import NmOptions, OptResult, multi_start, nelder_mead
from .oracles import oracle_chol, oracle_lu, oracle_qr, oracle_svd
from .pointcloud import (
    OrthogonalNormalizer,
    PCANormalizer,
    SpecialLinearNormalizer,
    canonical_orientation_2d,
    hausdorff,
    normalize_sl,
    pca_normalize,
    so_normalize,
)
from .tensor import (
    TuckerOrbitDecomposition,
    TuckerResult,
    lifting_gap,
    nnz_count,
    sparse_core_scan,
    subgroup_gap,
    tucker_goo,
)

__version__ = "0.1.0"

__all__ = [
    "CappedPow",
    "Combined",
    "DecompositionResult",
    "Entropy",
    "EntrywisePow",
    "EntrywisePowNeg",
    "GooSolution",
    "GroupOrbitDecomposition",
    "GroupSpec",
    "InequalityReport",
    "InfNorm",
    "LeftOnly",
    "Log1p",
    "MaskedPow",
    "NmOptions",
    "Nnz",
    "OptResult",
    "OrthogonalNormalizer",
    "PCANormalizer",
    "Similarity",
    "SparsifyReport",
    "SpecialLinearNormalizer",
    "TensorModes",
    "TuckerOrbitDecomposition",
    "TuckerResult",
    "TwoSided",
    "apply_action",
    "canonical_orientation_2d",
    "canonicalize_pseudo_diagonal",
    "check_sparsifying",
    "embed",
    "embed_inverse",
    "fold",
    "goo_solve",
    "hausdorff",
    "is_member",
    "lie_dim",
    "lifting_gap",
    "mat_exp",
    "mode_product",
    "multi_mode_product",
    "multi_start",
    "nelder_mead",
    "nnz_count",
    "normalize_sl",
    "oracle_chol",
    "oracle_lu",
    "oracle_qr",
    "oracle_svd",
    "parse_action",
    "parse_cost",
    "parse_group",
    "pca_normalize",
    "recover",
    "so_normalize",
    "sparse_core_scan",
    "subgroup_gap",
    "tucker_goo",
    "unfold",
    "unvec",
    "vec",
    "verify_inequalities",
]
