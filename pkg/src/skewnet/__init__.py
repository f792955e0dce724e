"""Load balancing on bipartite compatibility graphs.

Simulation, exact stationary analysis, and monotone-coupling tools for
studying how joining-the-shortest-queue behaves when dispatchers see
skewed slices of a heterogeneous server pool.
"""

from .errors import (
    CouplingIntegrityError,
    InvariantBreachError,
    NumericError,
    SizeCapError,
    SkewnetError,
    UnsupportedStructureError,
    ValidationError,
)
from .graph import (
    CompatGraph,
    ErgodicityResult,
    SimpleGraph,
    SkewParams,
    check_ergodicity,
    check_ergodicity_simple,
    find_skewed_core,
    from_json_dict,
    greedy_disjoint_subset,
    joint_skewed_neighborhood,
    load_graph,
    neighborhood_of_dispatcher,
    neighborhood_of_server,
    save_graph,
    skewed_neighborhood,
    to_json_dict,
)
from .generators import (
    CdnSpec,
    DandelionSpec,
    cdn_network,
    dandelion,
    er_network,
    pod_expand,
    random_bipartite,
    remove_central,
    to_bipartite,
)
from .sim import (
    GroupStats,
    Jsq,
    OccupancyMetrics,
    Policy,
    PowerOfD,
    SimConfig,
    SweepRow,
    TimeSeries,
    batch_interval,
    simulate,
    source_streams,
    sweep,
)
from .exact import (
    ConvergenceRow,
    MinRateCheck,
    StationaryDist,
    TruncatedChain,
    basic_graph,
    basic_jsq_stationary,
    boundary_convergence_table,
    build_generator,
    check_min_rate_inequality,
    check_zero_mean_drift,
    drift,
    m_count_expectation,
    marginal,
    minimizer_probability,
    stationary,
    tv_distance,
)
from .coupling import (
    AddServer,
    DandelionComponent,
    DecreaseArrival,
    DominanceReport,
    EdgeSimplify,
    IncreaseService,
    ServerMap,
    TransformOp,
    apply_pipeline,
    apply_transform,
    coupled_simulate,
    dandelion_reduction,
    joint_dispatch,
    ops_from_json,
    ops_to_json,
)

__version__ = "0.1.0"
