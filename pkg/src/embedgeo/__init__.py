"""Geometry toolkit for language-model input-embedding matrices.

Measures what the token-embedding layer encodes: per-token Unicode
categories, cross-model vocabulary overlap, exact cosine neighborhood
statistics, linear-separability probes, canonical-angle subspace
similarity, and frequency banding.
"""

__version__ = "0.1.0"

from .errors import (
    ArgumentError,
    DataError,
    DegenerateLabels,
    DegenerateQuery,
    EmbedGeoError,
    EmptyAlignment,
    EmptyCorpus,
    EmptyToken,
    FormatError,
    ParseError,
    RankError,
    SchemaError,
    ShapeError,
    SkippedCategory,
    UnsupportedLayout,
)
from .unicode_catalog import (
    BOUNDARY_MARKER,
    UCD_VERSION,
    CharCategory,
    categorize_token,
    categorize_tokens,
    char_category,
    known_categories,
)
from .vocab_io import (
    SharedAlignment,
    Vocabulary,
    align,
    load_matrix,
    load_vocab,
    normalize_token,
    overlap_stats,
    save_matrix,
    submatrix,
)
from .neighbors import (
    CategoryBreakdown,
    DiversityStat,
    NeighborSet,
    OverlapStat,
    export_neighbor_graph,
    knn,
    neighbor_breakdown,
    neighbor_diversity,
    neighbor_overlap,
)
from .probe import (
    ProbeResult,
    ProbeTask,
    build_task,
    cross_validate,
    probe_categories,
    train_logreg,
)
from .subspace import AngleSpectrum, canonical_angles, random_baseline
from .corpus_stats import (
    BandedSample,
    FrequencyTable,
    count_frequencies,
    frequency_diversity,
)
from .manifest import RunManifest
from .rng import stream_rng

__all__ = [
    "__version__",
    "ArgumentError",
    "DataError",
    "DegenerateLabels",
    "DegenerateQuery",
    "EmbedGeoError",
    "EmptyAlignment",
    "EmptyCorpus",
    "EmptyToken",
    "FormatError",
    "ParseError",
    "RankError",
    "SchemaError",
    "ShapeError",
    "SkippedCategory",
    "UnsupportedLayout",
    "BOUNDARY_MARKER",
    "UCD_VERSION",
    "CharCategory",
    "categorize_token",
    "categorize_tokens",
    "char_category",
    "known_categories",
    "SharedAlignment",
    "Vocabulary",
    "align",
    "load_matrix",
    "load_vocab",
    "normalize_token",
    "overlap_stats",
    "save_matrix",
    "submatrix",
    "CategoryBreakdown",
    "DiversityStat",
    "NeighborSet",
    "OverlapStat",
    "export_neighbor_graph",
    "knn",
    "neighbor_breakdown",
    "neighbor_diversity",
    "neighbor_overlap",
    "ProbeResult",
    "ProbeTask",
    "build_task",
    "cross_validate",
    "probe_categories",
    "train_logreg",
    "AngleSpectrum",
    "canonical_angles",
    "random_baseline",
    "BandedSample",
    "FrequencyTable",
    "count_frequencies",
    "frequency_diversity",
    "RunManifest",
    "stream_rng",
]
