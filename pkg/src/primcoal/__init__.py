"""primcoal: coalescent simulation through the Prim (invasion) order.

Percolation systems, Prim-order linearisation, walk encodings of cluster
structure, the combinatorial additive and multiplicative coalescents in
their critical windows, Brownian limit objects, and statistical oracles
for comparing all of the above.
"""

from .graphs import (
    ComponentFiltration,
    DisconnectedGraphError,
    DuplicateWeightError,
    GraphError,
    MergeEvent,
    PrimOrdering,
    ProperlyWeightedGraph,
    component_filtration,
    level_components,
    mst_weight_kruskal,
    prim_order,
    prim_order_rescan,
    random_complete_graph,
    read_edge_list,
    write_edge_list,
)
from .states import AugmentedState, MassVector, d_U
from .walks import (
    DEFAULT_CONVENTION,
    WEAK_MIN_CONVENTION,
    ExcursionConvention,
    ExcursionSet,
    LatticePath,
    excursions_above_min,
    excursions_above_zero,
    explore,
    export_trace,
    psi,
    sorted_lengths,
    walk_component_sizes,
)
from .additive import (
    ConditionedWalk,
    ForestProcess,
    ParkingConfiguration,
    ThinnedWalkFamily,
    bfs_outdegrees,
    gamma_plus,
    park,
    percolate_cayley,
    pitman_forest,
    prim_thinned_outdegrees,
    prufer_decode,
    rejection_sample_conditioned_walk,
    retention_level,
    sample_conditioned_walk,
    thin,
    time_change_W,
    uniform_cayley_tree,
    weighted_cayley_tree,
    y_plus,
)
from .multiplicative import (
    CriticalWindowParams,
    UniformField,
    augmented_state,
    component_surpluses,
    gamma_times,
    graph_route,
    p_lambda,
    reorder_field_from_graph,
    sample_graph_outcomes,
    sample_walk_outcomes,
    sparse_z_trace,
    surplus_field,
    walk_route,
    y_times,
    z_walk,
)
from .limits import (
    GridPath,
    MLTrajectory,
    grid_excursions,
    limit_gamma,
    limit_surplus,
    marcus_lushnikov,
    ml_additive_sizes,
    ml_multiplicative_sizes,
    sample_planar_poisson,
    simulate_excursion,
    simulate_parabolic,
)
from .oracles import (
    TestVerdict,
    cayley_outdegree_law,
    conditioned_walk_law,
    empirical_counts,
    enumerate_weight_orders,
    ks_statistic,
    ks_threshold,
    ks_two_sample,
    tv_distance,
    tv_two_sample,
)

__version__ = "0.1.0"
