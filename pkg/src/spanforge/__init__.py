"""spanforge: low-round graph spanner constructions with verification oracles."""

from .graph import (
    DomainError,
    EdgeListError,
    WeightedGraph,
    build_graph,
    component_labels,
    gen_complete,
    gen_cycle,
    gen_gnp,
    gen_grid,
    gen_path,
    gen_star,
    load_edge_list,
    parse_generator_spec,
    write_edge_list,
)
from .clustering import (
    Clustering,
    Merge,
    QuotientGraph,
    RadiusCertificate,
    check_radius,
    compose,
    contract,
    grow_clusters,
    identity_quotient,
    sample_clusters,
    singleton_clustering,
)
from .spanner import (
    Params,
    SpannerBuild,
    baswana_sen,
    cluster_merge_spanner,
    epoch_count,
    epoch_schedule,
    general_spanner,
    stretch_exponent,
    two_phase_spanner,
)
from .oracles import (
    RepetitionResult,
    SizeStats,
    StretchAudit,
    audit_stretch,
    bellman_ford,
    bruteforce_equivalence_suite,
    dijkstra,
    parallel_repetition,
    size_study,
    worker_count,
)
from .apsp import (
    ApspReport,
    apsp_experiment,
    apsp_matrix,
    apsp_on_spanner,
    coordinator_budget,
    write_distance_csv,
)
from .cli import CostModel, cost_model

__version__ = "0.1.0"
