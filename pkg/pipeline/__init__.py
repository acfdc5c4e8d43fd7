from pipeline.benchmark import arms, run_synthetic_benchmark, run_trial, train_test_split
from pipeline.config import BenchmarkConfig, default_kernels, load_config
from pipeline.decomposition import PCA, pca_fit, pca_transform
from pipeline.localization import scale_localization, write_localization
from pipeline.metrics import METRICS, metrics
from pipeline.regression import OLS, REGRESSORS, Lasso, LinearModel, Regressor, kkt_violation, lambda_max, lasso_fit, lasso_path, ols_fit
from pipeline.report import NO_WAVELET, RegressionReport
from pipeline.selection import correlation_scores, select_k_best
from pipeline.validation import (
    CVKind,
    CVResult,
    CVScheme,
    FittedPipeline,
    PipelineSpec,
    cross_validate,
    fmri_style_evaluation,
    pseudo_subject_groups,
)

__all__ = [
    "BenchmarkConfig",
    "default_kernels",
    "load_config",
    "PCA",
    "pca_fit",
    "pca_transform",
    "METRICS",
    "metrics",
    "LinearModel",
    "Regressor",
    "OLS",
    "Lasso",
    "REGRESSORS",
    "ols_fit",
    "lasso_fit",
    "lasso_path",
    "lambda_max",
    "kkt_violation",
    "correlation_scores",
    "select_k_best",
    "CVKind",
    "CVScheme",
    "CVResult",
    "PipelineSpec",
    "FittedPipeline",
    "cross_validate",
    "pseudo_subject_groups",
    "fmri_style_evaluation",
    "scale_localization",
    "write_localization",
    "RegressionReport",
    "NO_WAVELET",
    "arms",
    "train_test_split",
    "run_trial",
    "run_synthetic_benchmark",
]
