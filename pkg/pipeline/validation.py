import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import Optional, Sequence

import numpy as np

from common.errors import DimensionMismatch, FoldTooSmall, InvalidInput
from common.rng import generator
from pipeline.decomposition import PCA, pca_fit
from pipeline.metrics import METRICS, metrics
from pipeline.regression import REGRESSORS, OLS, Lasso, LinearModel, Regressor, lasso_path
from pipeline.selection import select_k_best

__all__ = [
    "CVKind",
    "CVScheme",
    "PipelineSpec",
    "FittedPipeline",
    "CVResult",
    "cross_validate",
    "pseudo_subject_groups",
    "fmri_style_evaluation",
    "MIN_FOLD_SIZE",
]

logger = logging.getLogger(__name__)

# R² y Pearson necesitan al menos dos valores por fold
MIN_FOLD_SIZE = 2


class CVKind(Enum):
    KFOLD = "kfold"
    LEAVE_ONE_GROUP_OUT = "leave_one_group_out"


@dataclass(frozen=True)
class CVScheme:
    """
    Esquema de validación cruzada.

    KFOLD parte los índices (mezclados con shuffle_seed si se da) en n_splits
    folds contiguos de tamaño lo más parejo posible. LEAVE_ONE_GROUP_OUT deja
    afuera un grupo por fold, en el orden de los grupos.
    """
    kind: CVKind = CVKind.KFOLD
    n_splits: int = 5
    groups: Optional[tuple] = None
    shuffle_seed: Optional[int] = None

    @classmethod
    def kfold(cls, n_splits: int = 5, shuffle_seed: Optional[int] = None) -> "CVScheme":
        return cls(CVKind.KFOLD, n_splits, None, shuffle_seed)

    @classmethod
    def leave_one_group_out(cls, groups) -> "CVScheme":
        return cls(CVKind.LEAVE_ONE_GROUP_OUT, 0, tuple(np.asarray(groups).tolist()), None)

    def splits(self, n_samples: int) -> list:
        """Lista de (train, test) cuyos test forman una partición de range(n_samples)."""
        if self.kind is CVKind.LEAVE_ONE_GROUP_OUT:
            groups = np.asarray(self.groups)
            if groups.shape != (n_samples,):
                raise InvalidInput(f"Hay {groups.size} etiquetas de grupo para {n_samples} muestras.")
            labels = np.unique(groups)
            if labels.size < 2:
                raise FoldTooSmall("Leave-one-group-out necesita al menos 2 grupos.")
            folds = [np.flatnonzero(groups == label) for label in labels]
        else:
            if self.n_splits < 2 or self.n_splits > n_samples:
                raise FoldTooSmall(f"No se pueden armar {self.n_splits} folds con {n_samples} muestras.")
            order = np.arange(n_samples)
            if self.shuffle_seed is not None:
                order = generator(self.shuffle_seed).permutation(n_samples)
            folds = [np.sort(fold) for fold in np.array_split(order, self.n_splits)]

        everything = np.arange(n_samples)
        result = []
        for i, test in enumerate(folds):
            train = np.setdiff1d(everything, test, assume_unique=True)
            if test.size < MIN_FOLD_SIZE or train.size < MIN_FOLD_SIZE:
                raise FoldTooSmall(
                    f"El fold {i} tiene {test.size} muestras de test y {train.size} de entrenamiento "
                    f"(mínimo {MIN_FOLD_SIZE})."
                )
            result.append((train, test))
        return result


def _reduce_with(X, selected: Optional[np.ndarray], pca: Optional[PCA]) -> np.ndarray:
    X = np.asarray(X, dtype=float)
    if selected is not None:
        X = X[:, selected]
    if pca is not None:
        X = pca.transform(X)
    return X


@dataclass(frozen=True)
class FittedPipeline:
    selected: Optional[np.ndarray]
    pca: Optional[PCA]
    model: LinearModel
    n_features: Optional[int] = None

    def transform(self, X) -> np.ndarray:
        return _reduce_with(X, self.selected, self.pca)

    def predict(self, X) -> np.ndarray:
        return self.model.predict(self.transform(X))

    def feature_weights(self) -> np.ndarray:
        """
        Pesos del modelo sobre las columnas originales: el PCA se deshace con
        componentesᵀ·w y las columnas que k-best descartó quedan en 0.

        predict(X) y X·feature_weights() difieren solo en una constante.
        """
        weights = self.model.weights
        if self.pca is not None:
            weights = self.pca.components.T @ weights
        if self.selected is None:
            return weights
        full = np.zeros(self.n_features)
        full[self.selected] = weights
        return full


@dataclass(frozen=True)
class PipelineSpec:
    """
    Selección k-best opcional, PCA opcional y un regresor ("ols" o "lasso").

    Con lasso y más de un λ en `lambdas`, el λ se elige por validación cruzada
    interna de `inner_folds` folds sobre los datos de entrenamiento recibidos.
    """
    k_best: Optional[int] = None
    n_components: Optional[int] = None
    regressor: str = "ols"
    lambdas: tuple = (0.01,)
    inner_folds: int = 3
    seed: int = 0

    def __post_init__(self):
        if self.regressor not in REGRESSORS:
            raise InvalidInput(f"Regresor desconocido '{self.regressor}' ({', '.join(REGRESSORS)}).")
        if self.regressor == Lasso.name and not self.lambdas:
            raise InvalidInput("Lasso necesita al menos un λ.")

    def _reduce(self, X, y):
        selected = pca = None
        if self.k_best is not None:
            selected = select_k_best(X, y, min(self.k_best, X.shape[1]))
            X = X[:, selected]
        if self.n_components is not None:
            pca = pca_fit(X, self.n_components)
            X = pca.transform(X)
        return X, selected, pca

    def choose_lambda(self, X, y) -> float:
        """λ con menor MSE promedio en la validación interna (a igual MSE, el mayor)."""
        grid = sorted((float(lam) for lam in self.lambdas), reverse=True)
        if len(grid) == 1:
            return grid[0]
        inner = CVScheme.kfold(self.inner_folds, self.seed)
        errors = np.zeros(len(grid))
        for train, test in inner.splits(X.shape[0]):
            Xr, selected, pca = self._reduce(X[train], y[train])
            held_out = _reduce_with(X[test], selected, pca)
            for i, model in enumerate(lasso_path(Xr, y[train], grid)):
                errors[i] += np.mean((y[test] - model.predict(held_out)) ** 2)
        best = int(np.argmin(errors))
        logger.debug("λ elegido %.4g entre %d candidatos", grid[best], len(grid))
        return grid[best]

    def make_regressor(self, X, y) -> Regressor:
        """El regresor sin ajustar; para Lasso, con el λ elegido sobre (X, y)."""
        if self.regressor == Lasso.name:
            return Lasso(self.choose_lambda(X, y))
        return OLS()

    def fit(self, X, y) -> FittedPipeline:
        X = np.asarray(X, dtype=float)
        y = np.asarray(y, dtype=float)
        regressor = self.make_regressor(X, y)
        Xr, selected, pca = self._reduce(X, y)
        return FittedPipeline(selected, pca, regressor.fit(Xr, y).model, X.shape[1])


@dataclass
class CVResult:
    """
    Puntajes por fold (solo sobre los datos de test) con media y error estándar.

    fitted y holdout los completa fmri_style_evaluation: el pipeline ajustado
    con todos los datos de entrenamiento y sus puntajes sobre el conjunto
    separado, si se dio uno.
    """
    fold_scores: list
    mean: dict
    se: dict
    lambdas: list = field(default_factory=list)
    fitted: Optional[FittedPipeline] = None
    holdout: Optional[dict] = None

    @property
    def n_folds(self) -> int:
        return len(self.fold_scores)


def _summarize(scores: list, names: Sequence[str]) -> tuple:
    mean, se = {}, {}
    for name in names:
        values = np.array([s[name] for s in scores], dtype=float)
        mean[name] = float(values.mean())
        se[name] = float(values.std(ddof=1) / np.sqrt(values.size)) if values.size > 1 else float("nan")
    return mean, se


def cross_validate(features, y, spec: PipelineSpec, cv: CVScheme, metric_names: Sequence[str] = METRICS) -> CVResult:
    """
    Ajusta el pipeline completo en cada fold de entrenamiento y lo evalúa en el de test.

    La selección, el PCA, la estandarización y la elección de λ ven solo el
    fold de entrenamiento. SE = desvío estándar entre folds / √(cantidad de folds).
    """
    features = np.asarray(features, dtype=float)
    y = np.asarray(y, dtype=float)
    unknown = set(metric_names) - set(METRICS)
    if unknown:
        raise InvalidInput(f"Métricas desconocidas: {sorted(unknown)}.")
    scores, lambdas = [], []
    for train, test in cv.splits(features.shape[0]):
        fitted = spec.fit(features[train], y[train])
        fold = metrics(y[test], fitted.predict(features[test]))
        scores.append({name: fold[name] for name in metric_names})
        lambdas.append(fitted.model.lam)
    mean, se = _summarize(scores, metric_names)
    return CVResult(scores, mean, se, lambdas)


def pseudo_subject_groups(n_samples: int, n_subjects: int) -> np.ndarray:
    """Etiqueta de sujeto de cada muestra, repartidas en bloques contiguos."""
    if not 2 <= n_subjects <= n_samples:
        raise InvalidInput(f"n_subjects={n_subjects} debe estar entre 2 y {n_samples}.")
    return np.repeat(np.arange(n_subjects), np.diff(np.linspace(0, n_samples, n_subjects + 1).astype(int)))


def fmri_style_evaluation(features, y, groups, n_components: int = 121, lambdas: Sequence[float] = None,
                          inner_folds: int = 3, seed: int = 0, holdout: Optional[tuple] = None) -> CVResult:
    """
    Protocolo por sujetos: PCA + Lasso con λ elegido por CV interna, evaluado
    dejando afuera un sujeto por vez. Informa RMSE y Pearson.

    Después de la CV el pipeline se reajusta con todos los sujetos; si se da
    holdout = (features_test, y_test), ese modelo se evalúa ahí.

    n_components se recorta a lo que permite el fold de entrenamiento más chico
    dentro de la validación interna.
    """
    features = np.asarray(features, dtype=float)
    y = np.asarray(y, dtype=float)
    cv = CVScheme.leave_one_group_out(groups)
    splits = cv.splits(features.shape[0])
    smallest_train = min(train.size for train, _ in splits)
    inner_train = smallest_train - int(np.ceil(smallest_train / inner_folds))
    n_components = max(1, min(n_components, features.shape[1], inner_train))
    if lambdas is None:
        lambdas = tuple(np.geomspace(1.0, 1e-3, 8))
    spec = PipelineSpec(n_components=n_components, regressor="lasso", lambdas=tuple(lambdas),
                        inner_folds=inner_folds, seed=seed)
    names = ("rmse", "pearson")
    result = cross_validate(features, y, spec, cv, names)
    result.fitted = spec.fit(features, y)
    if holdout is not None:
        test_features, test_y = (np.asarray(a, dtype=float) for a in holdout)
        if test_features.ndim != 2 or test_features.shape[1] != features.shape[1]:
            raise DimensionMismatch(("m", features.shape[1]), test_features.shape, "las features de test")
        scores = metrics(test_y, result.fitted.predict(test_features))
        result.holdout = {name: scores[name] for name in names}
    return result
