import logging
from concurrent.futures import ProcessPoolExecutor
from itertools import repeat

import numpy as np

from common.errors import GraphletError
from common.rng import derive_seed
from graphs.core import LaplacianKind, build_laplacian, eigendecompose
from pipeline.config import MIN_TRAIN, BenchmarkConfig
from pipeline.metrics import metrics
from pipeline.report import NO_WAVELET, RegressionReport, summarize_trials
from pipeline.validation import PipelineSpec
from synth import generate_dataset
from wavelets import build_frame, extract_features, make_bank

__all__ = ["arms", "train_test_split", "run_trial", "run_synthetic_benchmark"]

logger = logging.getLogger(__name__)


def arms(config: BenchmarkConfig) -> list:
    """(etiqueta, familia) de cada brazo, en el orden de la configuración y al final el sin wavelets."""
    labels = [spec.family.label for spec in config.kernels]
    out = []
    for i, spec in enumerate(config.kernels):
        label = labels[i] if labels.count(labels[i]) == 1 else f"{labels[i]} (J={spec.n_bands}, #{i})"
        out.append((label, spec.family.value))
    out.append((NO_WAVELET, "none"))
    return out


def train_test_split(n_samples: int, ratio: float, rng: np.random.Generator) -> tuple:
    """
    Permutación al azar; los primeros round(ratio·n) índices entrenan.
    Entrenan al menos MIN_TRAIN muestras y quedan al menos 2 para test.
    """
    order = rng.permutation(n_samples)
    n_train = min(max(int(round(ratio * n_samples)), MIN_TRAIN), n_samples - 2)
    return np.sort(order[:n_train]), np.sort(order[n_train:])


def _score(features: np.ndarray, y: np.ndarray, train, test, k_best: int) -> dict:
    spec = PipelineSpec(k_best=min(k_best, features.shape[1]), regressor="ols")
    fitted = spec.fit(features[train], y[train])
    return metrics(y[test], fitted.predict(features[test]))


def run_trial(config: BenchmarkConfig, index: int) -> dict:
    """
    Un ensayo: genera el dataset, descompone el laplaciano y evalúa cada brazo
    con la misma partición train/test. Los errores de la librería no se
    propagan: el ensayo vuelve marcado con el mensaje.
    """
    seed = derive_seed(config.seed, index)
    labels = arms(config)
    try:
        data = generate_dataset(config.nodes, config.samples, config.edge_prob, config.noise_sigma, seed,
                                config.halved_diffusion, config.diffusion_steps)
        spectrum = eigendecompose(build_laplacian(data.graph, LaplacianKind(config.laplacian)))
        train, test = train_test_split(data.n_samples, config.split_ratio, data.split_generator())
        scores = {}
        for (label, _), spec in zip(labels, config.kernels):
            frame = build_frame(spectrum, make_bank(spec, spectrum.eigenvalues))
            features = extract_features(frame, data.X, augment=config.augment)
            scores[label] = _score(features, data.y, train, test, config.k_best)
        scores[NO_WAVELET] = _score(data.X, data.y, train, test, config.k_best)
    except (GraphletError, np.linalg.LinAlgError) as exc:
        logger.warning("Ensayo %d (semilla %d) excluido: %s", index, seed, exc)
        return {"trial": index, "seed": seed, "error": f"{exc.__class__.__name__}: {exc}"}
    logger.info("Ensayo %d: R² %s", index,
                ", ".join(f"{label}={s['r2']:.4f}" for label, s in scores.items()))
    return {"trial": index, "seed": seed, "scores": scores}


def run_synthetic_benchmark(config: BenchmarkConfig, jobs: int = 1) -> RegressionReport:
    """
    Corre config.trials ensayos independientes y agrega sus puntajes.

    Con jobs > 1 los ensayos se reparten en procesos; el orden de los
    resultados es el de los índices, así que el reporte no depende de jobs.
    """
    if jobs < 1:
        raise ValueError(f"jobs debe ser al menos 1, se recibió {jobs}.")
    indices = range(config.trials)
    if jobs == 1:
        results = [run_trial(config, i) for i in indices]
    else:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(run_trial, repeat(config), indices, chunksize=max(1, config.trials // (4 * jobs))))
    trials = [r for r in results if "error" not in r]
    excluded = [r for r in results if "error" in r]
    if excluded:
        logger.warning("%d de %d ensayos excluidos", len(excluded), config.trials)
    rows = summarize_trials(arms(config), trials)
    return RegressionReport(config.to_dict(), rows, trials, excluded)
