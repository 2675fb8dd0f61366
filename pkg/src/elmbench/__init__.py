"""Pseudoinverse training of single-hidden-layer networks.

Six interchangeable direct solvers for the output weights, confusion-matrix
metrics under session-structured folds, a synthetic ERP-style data generator,
and a benchmark CLI.
"""

from .elm import (
    ActivationKind,
    ElmConfig,
    ElmModel,
    Normalizer,
    TrainResult,
    apply_normalizer,
    fit_normalizer,
    hat_diagnostic,
    hidden_output,
    init_random_layer,
    predict,
    solve_output_weights,
    train,
)
from .data import Dataset, EpochSet, load_csv, synth_epochs, write_csv
from .linalg import (
    LuFactors,
    QrFactors,
    SimilarityFactors,
    SolverKind,
    SvdFactors,
    backward_substitute,
    flop_estimate,
    forward_substitute,
    hessenberg_reduce,
    householder_qr,
    lu_decompose,
    mgs_qr,
    schur_decompose,
    svd,
    triangular_inverse,
    tridiagonal_solve,
)
from .metrics import (
    ConfusionCounts,
    FoldPlan,
    MetricReport,
    confusion,
    grand_average,
    metric_report,
    session_kfold,
)

__all__ = [
    "ActivationKind",
    "ConfusionCounts",
    "Dataset",
    "ElmConfig",
    "ElmModel",
    "EpochSet",
    "FoldPlan",
    "LuFactors",
    "MetricReport",
    "Normalizer",
    "QrFactors",
    "SimilarityFactors",
    "SolverKind",
    "SvdFactors",
    "TrainResult",
    "apply_normalizer",
    "backward_substitute",
    "confusion",
    "fit_normalizer",
    "flop_estimate",
    "forward_substitute",
    "grand_average",
    "hat_diagnostic",
    "hessenberg_reduce",
    "hidden_output",
    "householder_qr",
    "init_random_layer",
    "load_csv",
    "lu_decompose",
    "metric_report",
    "mgs_qr",
    "predict",
    "schur_decompose",
    "session_kfold",
    "solve_output_weights",
    "svd",
    "synth_epochs",
    "train",
    "triangular_inverse",
    "tridiagonal_solve",
    "write_csv",
]
