"""Site-percolation laboratory for d-regular pseudo-random graphs.

Build a graph, certify its spectral expansion, percolate vertices with
a seeded coin stream, census the resulting components, and compare the
measurements against closed-form predictions.
"""

from .census import (
    ComponentCensus,
    count_acyclic_connected_ksets,
    count_trees_bruteforce,
    longest_cycle_lower_bound,
    take_census,
    validate_cycle,
)
from .generators import GenSpec, GenSpecError, GenerationError, generate
from .graph_core import (
    GraphFormatError,
    RegularGraph,
    RegularityError,
    VertexSet,
    degree_into,
    edge_count_between,
    external_neighborhood,
    read_graph,
    write_graph,
)
from .harness import ExperimentConfig, TrialRecord, compare, run_sweep
from .percolation import (
    CoinStream,
    DfsTrace,
    PercolationSample,
    components_oracle,
    run_dfs,
    sample_vertices,
)
from .spectral import SpectralConvergenceError, SpectrumReport, certify, compute_spectrum, delta_of_alpha
from .theory import (
    TheoryPrediction,
    predict,
    series_tree_edge_mass,
    series_tree_mass,
    solve_x,
    solve_y,
)
from .verify import (
    ViolationReport,
    check_blowup_pairs,
    check_corollary_2_3,
    check_giant_expansion,
    check_lemma_2_4,
    check_mixing,
    check_stream_properties,
    clique_expansion_demo,
)

__version__ = "0.1.0"

__all__ = [
    "CoinStream",
    "ComponentCensus",
    "DfsTrace",
    "ExperimentConfig",
    "GenSpec",
    "GenSpecError",
    "GenerationError",
    "GraphFormatError",
    "PercolationSample",
    "RegularGraph",
    "RegularityError",
    "SpectralConvergenceError",
    "SpectrumReport",
    "TheoryPrediction",
    "TrialRecord",
    "VertexSet",
    "ViolationReport",
    "certify",
    "check_blowup_pairs",
    "check_corollary_2_3",
    "check_giant_expansion",
    "check_lemma_2_4",
    "check_mixing",
    "check_stream_properties",
    "clique_expansion_demo",
    "compare",
    "components_oracle",
    "compute_spectrum",
    "count_acyclic_connected_ksets",
    "count_trees_bruteforce",
    "degree_into",
    "delta_of_alpha",
    "edge_count_between",
    "external_neighborhood",
    "generate",
    "longest_cycle_lower_bound",
    "predict",
    "read_graph",
    "run_dfs",
    "run_sweep",
    "sample_vertices",
    "series_tree_edge_mass",
    "series_tree_mass",
    "solve_x",
    "solve_y",
    "take_census",
    "validate_cycle",
    "write_graph",
]
