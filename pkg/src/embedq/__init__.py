"""Quality metrics for low-dimensional embeddings.

Evaluates how well a reduction preserves the informational, geometric and
rank structure of local neighbourhoods: spectral-entropy change,
conformal local Procrustes residuals and mean relative rank errors, plus
the supporting machinery (Takens delay embedding, classic reducers and a
reproducible sweep harness).
"""

__version__ = "0.1.0"

from .data_io import (
    CsvFormatError,
    DatasetSpec,
    load_matrix_csv,
    load_series_csv,
    s_curve,
    swiss_roll,
    write_matrix_csv,
)
from .harness import (
    CorrelationMatrix,
    SweepCell,
    SweepConfig,
    SweepResult,
    correlation_report,
    joint_export,
    load_config,
    run_sweep,
    run_sweep_to_dir,
)
from .metrics import (
    LocalMetricRecord,
    MetricReport,
    coranking_matrix,
    delta_entropy,
    evaluate,
    mean_delta_entropy,
    mrre,
    procrustes_local,
)
from .neighborhoods import NeighborhoodIndex, center_columns, knn_index, neighborhood_matrix, rank_table
from .reducers import (
    DisconnectedGraphError,
    ReducerSpec,
    classical_mds,
    hlle,
    info_lle,
    isomap,
    kpca,
    lle,
    make_embedding,
    pca,
)
from .spectral import (
    DegenerateSpectrumError,
    EntropyDecomposition,
    SingularSpectrum,
    singular_values,
    spectral_entropy,
    stable_rank,
)
from .takens import (
    CaoResult,
    EmbeddingParameters,
    FirstMinimum,
    TimeSeries,
    auto_mutual_information,
    cao_dimension,
    delay_embed,
    first_minimum,
    select_parameters,
)

__all__ = [
    "__version__",
    "CsvFormatError",
    "DatasetSpec",
    "load_matrix_csv",
    "load_series_csv",
    "s_curve",
    "swiss_roll",
    "write_matrix_csv",
    "CorrelationMatrix",
    "SweepCell",
    "SweepConfig",
    "SweepResult",
    "correlation_report",
    "joint_export",
    "load_config",
    "run_sweep",
    "run_sweep_to_dir",
    "LocalMetricRecord",
    "MetricReport",
    "coranking_matrix",
    "delta_entropy",
    "evaluate",
    "mean_delta_entropy",
    "mrre",
    "procrustes_local",
    "NeighborhoodIndex",
    "center_columns",
    "knn_index",
    "neighborhood_matrix",
    "rank_table",
    "DisconnectedGraphError",
    "ReducerSpec",
    "classical_mds",
    "hlle",
    "info_lle",
    "isomap",
    "kpca",
    "lle",
    "make_embedding",
    "pca",
    "DegenerateSpectrumError",
    "EntropyDecomposition",
    "SingularSpectrum",
    "singular_values",
    "spectral_entropy",
    "stable_rank",
    "CaoResult",
    "EmbeddingParameters",
    "FirstMinimum",
    "TimeSeries",
    "auto_mutual_information",
    "cao_dimension",
    "delay_embed",
    "first_minimum",
    "select_parameters",
]
