"""Symbolic time-series compression via adaptive polygonal chains and
sorting-based greedy aggregation, with baselines and a benchmark harness."""

from .aggregation import (
    SORT_STRATEGIES,
    AggregationResult,
    aggregate,
    group_variances,
    sort_points,
    wcss_from,
)
from .baselines import (
    KMeansResult,
    SaxConfig,
    abba_digitize,
    gaussian_breakpoints,
    kmeans_digitize,
    kmeans_pp,
    onedsax_inverse,
    onedsax_transform,
    sax_inverse,
    sax_transform,
    split_symbol_budget,
)
from .bench import (
    METHODS,
    BenchRow,
    ComparisonResult,
    ProfileTable,
    SweepRow,
    build_profile_table,
    escalate_tolerance,
    load_corpus,
    make_demo_corpus,
    parameter_sweep,
    performance_profile,
    run_comparison,
)
from .compression import CompressionConfig, compress, inverse_compress, piece_residual, residual_check
from .core import (
    Codebook,
    Piece,
    ScaledPoint,
    ScalingMeta,
    SymbolicSeries,
    TimeSeries,
    scale_pieces,
    std_dev,
    symbol_name,
    znormalize,
)
from .image import ImageTensor, flatten_image, read_ppm, unflatten_image, write_ppm
from .metrics import ReconstructionReport, adjusted_rand, difference, dtw, euclid, mse, rates
from .pipeline import (
    FabbaConfig,
    FabbaModel,
    display_symbols,
    fabba_inverse,
    fabba_transform,
    inverse_digitize,
    load_model,
    model_from_json,
    model_to_json,
    quantize_lengths,
    save_model,
)

__version__ = "0.1.0"
