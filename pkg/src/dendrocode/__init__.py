"""dendrocode: dendrograms and the codes that carry them.

Builds ranked dendrograms from data, converts them to and from p-adic
coefficient codes, Baire digit strings, packed permutations and Haar
wavelet coefficients, and verifies the symmetry invariants tying those
representations together (ultrametricity, child-swap invariance, exact
reconstruction).
"""

from .baire import (
    BaireString,
    PrefixHierarchy,
    baire_cluster,
    baire_distance,
    digitize_reals,
    encode_dna,
    lcp_radius,
    parse_digits,
)
from .errors import (
    AlignmentError,
    DegenerateInputError,
    DendrocodeError,
    DomainError,
    InputShapeError,
    MalformedEncodingError,
    NotUltrametricError,
    ParseError,
    RankRangeError,
    ResourceGuardError,
    UnrealizablePermutationError,
)
from .haar import HaarTransform, haar_forward, haar_inverse, haar_threshold
from .hierarchy import (
    Dendrogram,
    DissimilarityMatrix,
    LINKAGES,
    MergeNode,
    UltrametricMatrix,
    agglomerate,
    canonicalize,
    member_sets,
    pairwise_distances,
    swap_children,
    swap_orbit,
)
from .lattice import (
    BooleanTable,
    Semilattice,
    build_semilattice,
    clusters_at_level,
    semilattice_text,
    set_dissimilarity,
)
from .padic import (
    PadicCode,
    PadicEncoding,
    cluster_sets,
    code_classes,
    code_cluster_sets,
    decode,
    encode_dendrogram,
    evaluate_code,
    padic_distance,
    padic_similarity,
    padic_valuation,
    scale_operator,
    valuation_distance,
)
from .permutations import (
    OrdinalPattern,
    PackedPermutation,
    enumerate_nlr,
    is_down_up,
    is_up_down,
    ordinal_pattern,
    ordinal_sequence,
    packed_representation,
    rank_permutation,
    unpack,
)
from .render import render_tree
from .ultrametric import (
    EQUILATERAL,
    ISOSCELES_SMALL_BASE,
    METRIC_ONLY,
    UltrametricityReport,
    canonical_form,
    check_canonical_form,
    classify_triangle,
    cophenetic_matrix,
    generate_cloud,
    ultrametricity_coefficient,
    verify_ultrametric,
)

__version__ = "0.1.0"
