"""Generic graph container and verifiers."""
from .charpoly import (
    DEFAULT_PRIMES,
    CharPolyFingerprint,
    PrimeTooSmall,
    charpoly_fingerprint,
    charpoly_mod,
    cospectral,
    random_primes,
)
from .cliques import NotAnEdge, clique_census, is_maximal_clique, maximal_cliques, maximal_cliques_through_edge
from .export import FormatOverflow, export, from_edgelist, from_graph6, json_report, to_edgelist, to_graph6
from .graph import (
    DenseGraph,
    GraphError,
    bits_of,
    complete_graph,
    cycle_graph,
    ids_of,
    path_graph,
    petersen_graph,
    rook_graph,
    star_graph,
)
from .spectral import (
    NotIntegral,
    SpectrumCertificate,
    annihilates,
    drg_eigenvalues,
    multiplicities,
    spectrum_certificate,
)
from .switching import (
    InvalidPartition,
    NotAPartition,
    SwitchingPartition,
    ValidationReport,
    Violation,
    gm_switch,
    gm_validate,
)
from .verify import (
    CounterexampleReport,
    Disconnected,
    FourVertexResult,
    IntersectionArray,
    NotSRG,
    SrgParams,
    bfs_distances,
    check_drg,
    check_srg,
    common_counts,
    common_neighbors,
    distance2_degree,
    edges_within,
    four_vertex_condition,
    fvc_counts,
    fvc_neighbor_counts,
)
