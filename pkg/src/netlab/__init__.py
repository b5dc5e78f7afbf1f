"""Statistical network modeling: generating models, sampling mechanisms,
network statistics, sampling-aware estimators, and link prediction."""

from .errors import (
    CapacityError,
    ConditioningError,
    DegenerateDesignError,
    FitError,
    NetlabError,
    RangeError,
    ResourceError,
    ValidationError,
)
from .generators import (
    ER,
    ERGM,
    PA,
    SBM,
    Beta,
    Covariate,
    EdgeExch,
    Graphon,
    LatentUniforms,
    RelExch,
    Superstar,
    covariate_kernel,
    exact_law,
    gen_beta,
    gen_covariate,
    gen_edge_exch,
    gen_er,
    gen_ergm_exact,
    gen_graphon,
    gen_pa,
    gen_rel_exch,
    gen_sbm,
    gen_superstar,
    generate,
    law_relabel,
    law_restrict,
    pair_kernel_law,
    sbm_kernel,
    total_variation,
)
from .graphs import (
    DegreeProfile,
    Multigraph,
    Partition,
    SimpleGraph,
    all_partitions,
    complete_graph,
    degree_profile,
    empty_graph,
    enumerate_graphs,
    path_graph,
    project,
    relabel,
    relabel_edges,
    restrict,
    star_graph,
)
from .inference import (
    EstimateReport,
    IdentifiabilityReport,
    NAMED_BIJECTIONS,
    estimate_reparam,
    identifiability_check,
    mle_sbm_rates,
    mle_thinned_er,
)
from .predict import MCEstimate, PredictiveQuery, predict_exact, predict_mc
from .sampling import (
    Observation,
    PathObservation,
    canonical,
    chain_traversed_edges,
    edge_sample,
    labeled_edge_sequence,
    path_sample,
    paths_to_observation,
    snowball_chain,
    snowball_full,
    thin,
    universal_embed,
    vertex_sample,
)
from .stats import (
    MartingaleReport,
    PowerLawFit,
    SparsityTrace,
    density_martingale_check,
    edge_density,
    fit_power_law,
    sparsity_trace,
)

__version__ = "0.1.0"
