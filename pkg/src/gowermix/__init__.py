"""Gower dissimilarities for mixed data, donor matching and hotdeck imputation."""

from .dataset import (
    Column,
    ColumnSchema,
    DataError,
    Dataset,
    Kind,
    Schema,
    SchemaError,
    VariableKind,
    dummy_encode,
    load_dataset,
    ordinal_to_midrank,
    ordinal_to_ratio,
    save_dataset,
)
from .colstats import (
    ColumnStats,
    compute_stats,
    default_k,
    knn_threshold,
    silverman_bandwidth,
)
from .pervar import (
    Contribution,
    NumericMethod,
    OrdinalPolicy,
    OrdinalScale,
    Scaling,
    Variant,
    dist_binary_asymmetric,
    dist_binary_symmetric,
    dist_nominal,
    dist_numeric,
    dist_ordinal,
    numeric_kernel,
)
from .aggregate import (
    DistanceConfig,
    DummyEquivalenceReport,
    MatchResult,
    PairwiseGower,
    distance_matrix,
    dummy_equivalence_report,
    gower_distance,
    top_n_matches,
)
from .hotdeck import ImputationResult, nn_hotdeck
from .simulate import (
    CORRELATION,
    MU,
    PROB_LEVELS,
    SIGMA,
    Categorization,
    Mechanism,
    MethodMetrics,
    MethodSpec,
    SimReport,
    SimScenario,
    all_method_specs,
    categorize_equal_width,
    delete_values,
    generate_mvn_sample,
    inject_outliers,
    metric_mean_reproduction,
    metric_quantile_reproduction,
    parse_methods,
    reference_quantiles_empirical,
    reference_quantiles_theoretical,
    run_study,
    run_user_study,
    simulate_replication,
)

__version__ = "0.1.0"
