"""Norton algebras of distance regular graphs, in exact rational arithmetic.

The layers, bottom to top: binary trees and Catalan bookkeeping (trees),
the generic parenthesization engine (binop), four graph families with their
ranked lattices (graphs), exact spectral decomposition (spectral), the
Norton product on the second eigenspace (norton), the three-way
classification of its parenthesization counts (classify), and a cacheable
build pipeline with a command line front end (instances, cache, cli).
"""

from .binop import (
    DEFAULT_FINGERPRINT_BUDGET,
    BilinearOperation,
    EquivalenceReport,
    a000975_value,
    count_classes_exact,
    direct_product,
    double_minus_classes,
    double_minus_operation,
    evaluate_parenthesization,
    tensor_fingerprint,
)
from .classify import (
    BRANCH_A000975,
    BRANCH_ASSOCIATIVE,
    BRANCH_TOTALLY,
    ClassificationVerdict,
    CoefficientTable,
    DistinctnessCertificate,
    EquivalenceClaim,
    certify_distinct,
    coefficient_table,
    count_norton_classes,
    d22_hamming_aligned_operation,
    expected_class_count,
    pattern_coefficients,
    predicted_branch,
    verify_classification,
    verify_pattern_lemma,
)
from .cache import CODE_TAG, default_cache_dir, load_cache, write_cache
from .errors import (
    BudgetExceededError,
    ConstructionError,
    EnumerationLimitError,
    FormulaMismatchError,
    NortonError,
    NotDistanceRegularError,
    SpectralIntegralityError,
)
from .graphs import (
    DEFAULT_VERTEX_BUDGET,
    DualPolarFamily,
    GrassmannFamily,
    GraphInstance,
    HammingFamily,
    IntersectionArray,
    JohnsonFamily,
    RankedLattice,
    build_dual_polar,
    build_grassmann,
    build_hamming,
    build_johnson,
    check_distance_regular,
    graph_from_distance_matrix,
)
from .instances import (
    InstanceBundle,
    build_instance,
    parse_instance_spec,
)
from .norton import (
    NortonAlgebra,
    family_constants,
    formula_product,
    norton_oracle,
    spanning_vectors,
    structure_constants,
    verify_formula_vs_oracle,
)
from .spectral import (
    RationalMatrix,
    SpectralData,
    closed_form_eigenvalue,
    closed_form_multiplicity,
    eigenvalues,
    spectral_data,
)
from .trees import (
    BinaryTree,
    DepthSequence,
    catalan,
    depth_sequence,
    depth_set,
    enumerate_trees,
    left_comb,
    parse_tree,
    to_string,
    tree_from_depth_sequence,
)

__version__ = "0.1.0"

__all__ = [
    "BilinearOperation",
    "BinaryTree",
    "BRANCH_A000975",
    "BRANCH_ASSOCIATIVE",
    "BRANCH_TOTALLY",
    "BudgetExceededError",
    "CODE_TAG",
    "ClassificationVerdict",
    "CoefficientTable",
    "ConstructionError",
    "DEFAULT_FINGERPRINT_BUDGET",
    "DEFAULT_VERTEX_BUDGET",
    "DepthSequence",
    "DistinctnessCertificate",
    "DualPolarFamily",
    "EnumerationLimitError",
    "EquivalenceClaim",
    "EquivalenceReport",
    "FormulaMismatchError",
    "GrassmannFamily",
    "GraphInstance",
    "HammingFamily",
    "InstanceBundle",
    "IntersectionArray",
    "JohnsonFamily",
    "NortonAlgebra",
    "NortonError",
    "NotDistanceRegularError",
    "RankedLattice",
    "RationalMatrix",
    "SpectralData",
    "SpectralIntegralityError",
    "a000975_value",
    "build_dual_polar",
    "build_grassmann",
    "build_hamming",
    "build_instance",
    "build_johnson",
    "catalan",
    "certify_distinct",
    "check_distance_regular",
    "closed_form_eigenvalue",
    "closed_form_multiplicity",
    "coefficient_table",
    "count_classes_exact",
    "count_norton_classes",
    "d22_hamming_aligned_operation",
    "default_cache_dir",
    "depth_sequence",
    "depth_set",
    "direct_product",
    "double_minus_classes",
    "double_minus_operation",
    "eigenvalues",
    "enumerate_trees",
    "evaluate_parenthesization",
    "expected_class_count",
    "family_constants",
    "formula_product",
    "graph_from_distance_matrix",
    "left_comb",
    "load_cache",
    "norton_oracle",
    "parse_instance_spec",
    "parse_tree",
    "pattern_coefficients",
    "predicted_branch",
    "spanning_vectors",
    "spectral_data",
    "structure_constants",
    "tensor_fingerprint",
    "to_string",
    "tree_from_depth_sequence",
    "verify_classification",
    "verify_formula_vs_oracle",
    "verify_pattern_lemma",
    "write_cache",
]
