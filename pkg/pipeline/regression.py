import logging
from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np
import scipy.linalg

from common.errors import DimensionMismatch, InvalidInput, NotConverged

__all__ = [
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
]

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class LinearModel:
    """ŷ = X·weights + intercept, más el estado del solver que lo produjo."""
    weights: np.ndarray
    intercept: float
    lam: Optional[float] = None
    converged: bool = True
    iterations: int = 0

    def predict(self, X) -> np.ndarray:
        X = np.asarray(X, dtype=float)
        if X.ndim != 2 or X.shape[1] != self.weights.shape[0]:
            raise DimensionMismatch(("m", self.weights.shape[0]), X.shape, "los datos")
        return X @ self.weights + self.intercept

    @property
    def n_nonzero(self) -> int:
        return int(np.count_nonzero(self.weights))


def _check_xy(X, y):
    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=float)
    if X.ndim != 2:
        raise InvalidInput(f"X debe ser una matriz, se recibió {X.shape}.")
    if y.shape != (X.shape[0],):
        raise DimensionMismatch((X.shape[0],), y.shape, "el objetivo")
    if X.shape[0] == 0:
        raise InvalidInput("No hay muestras.")
    return X, y


def ols_fit(X, y) -> LinearModel:
    """
    Mínimos cuadrados con intercepto. Si X centrada no tiene rango completo se
    devuelve la solución de norma mínima.
    """
    X, y = _check_xy(X, y)
    x_mean, y_mean = X.mean(axis=0), y.mean()
    weights = scipy.linalg.lstsq(X - x_mean, y - y_mean)[0]
    return LinearModel(weights, float(y_mean - x_mean @ weights))


def lambda_max(X, y) -> float:
    """Menor λ para el cual la solución de Lasso es idénticamente nula."""
    X, y = _check_xy(X, y)
    Xc = X - X.mean(axis=0)
    return float(np.max(np.abs(Xc.T @ (y - y.mean()))) / X.shape[0]) if X.shape[1] else 0.0


def kkt_violation(X, y, model: LinearModel, lam: float) -> float:
    """
    Máximo desvío de las condiciones de optimalidad de Lasso en unidades originales:
    |X_jᵀr/m| ≤ λ si w_j = 0 y X_jᵀr/m = λ·sign(w_j) si no.
    """
    X, y = _check_xy(X, y)
    residual = y - model.predict(X)
    gradient = X.T @ residual / X.shape[0]
    w = model.weights
    return float(_violation(gradient, w, lam).max(initial=0.0))


def _violation(gradient: np.ndarray, w: np.ndarray, lam: float) -> np.ndarray:
    return np.where(w != 0, np.abs(gradient - lam * np.sign(w)), np.maximum(np.abs(gradient) - lam, 0.0))


def _soft_threshold(x: float, t: float) -> float:
    return np.sign(x) * max(abs(x) - t, 0.0)


def lasso_fit(X, y, lam: float, max_iter: int = 10000, tol: float = 1e-8, warm_start: Optional[np.ndarray] = None,
              strict: bool = False) -> LinearModel:
    """
    Lasso por descenso coordenado: min (1/2m)‖y - Xw - b‖² + λ‖w‖₁.

    Internamente se trabaja con las columnas centradas y estandarizadas (el
    umbral de cada coordenada pasa a ser λ/σ_j) y los pesos se devuelven en
    las unidades originales. Las columnas constantes quedan con peso 0.

    Se detiene cuando la violación de KKT en unidades originales baja de `tol`.
    Si se agotan las iteraciones devuelve el iterado con menor violación y
    converged=False (o lanza NotConverged con strict=True).
    """
    X, y = _check_xy(X, y)
    if lam < 0 or not np.isfinite(lam):
        raise InvalidInput(f"λ debe ser no negativo, se recibió {lam}.")
    m, q = X.shape
    x_mean, y_mean = X.mean(axis=0), y.mean()
    if lam >= lambda_max(X, y) * (1 - 1e-12):
        # el redondeo del soft-threshold podría dejar pesos de 1e-16 en λ_max
        return LinearModel(np.zeros(q), float(y_mean), float(lam), True, 0)
    Xc = X - x_mean
    scale = np.sqrt((Xc ** 2).sum(axis=0) / m)
    active = scale > 0
    Z = np.zeros_like(Xc)
    Z[:, active] = Xc[:, active] / scale[active]

    # v son los pesos sobre las columnas estandarizadas: w = v / σ
    v = np.zeros(q)
    if warm_start is not None:
        v[active] = np.asarray(warm_start, dtype=float)[active] * scale[active]
    residual = (y - y_mean) - Z @ v
    thresholds = np.where(active, lam / np.where(active, scale, 1.0), 0.0)
    columns = np.flatnonzero(active)

    best_v, best_violation = v.copy(), np.inf
    violation = np.inf
    iteration = 0
    for iteration in range(1, max_iter + 1):
        for j in columns:
            old = v[j]
            rho = Z[:, j] @ residual / m + old
            new = _soft_threshold(rho, thresholds[j])
            if new != old:
                residual -= (new - old) * Z[:, j]
                v[j] = new
        w = np.where(active, v / np.where(active, scale, 1.0), 0.0)
        gradient = Xc.T @ residual / m
        violation = float(_violation(gradient[active], w[active], lam).max(initial=0.0))
        if violation < best_violation:
            best_v, best_violation = v.copy(), violation
        if violation < tol:
            break

    converged = best_violation < tol
    weights = np.where(active, best_v / np.where(active, scale, 1.0), 0.0)
    if not converged:
        if strict:
            raise NotConverged("lasso_fit", iteration, best_violation)
        logger.warning("lasso_fit no convergió con λ=%.3g en %d iteraciones (KKT %.2e); "
                       "se devuelve el mejor iterado.", lam, iteration, best_violation)
    else:
        logger.debug("lasso_fit λ=%.3g: %d iteraciones, %d pesos no nulos", lam, iteration, np.count_nonzero(weights))
    return LinearModel(weights, float(y_mean - x_mean @ weights), float(lam), converged, iteration)


def lasso_path(X, y, lambdas: Optional[Sequence[float]] = None, n_lambdas: int = 20, ratio: float = 1e-3,
               max_iter: int = 10000, tol: float = 1e-8) -> list:
    """
    Soluciones de Lasso a lo largo de una grilla decreciente de λ, cada una
    arrancando desde la anterior. Sin grilla se usan n_lambdas valores
    geométricos entre λ_max y ratio·λ_max.
    """
    X, y = _check_xy(X, y)
    if lambdas is None:
        top = lambda_max(X, y)
        lambdas = np.geomspace(top, top * ratio, n_lambdas) if top > 0 else np.zeros(1)
    grid = sorted((float(lam) for lam in lambdas), reverse=True)
    path = []
    previous = None
    for lam in grid:
        model = lasso_fit(X, y, lam, max_iter=max_iter, tol=tol, warm_start=previous)
        path.append(model)
        previous = model.weights
    return path


class Regressor(ABC):
    """Estimador lineal: fit devuelve un LinearModel, predict lo aplica."""

    name: str

    def __init__(self):
        self.model: Optional[LinearModel] = None

    @abstractmethod
    def _fit(self, X, y) -> LinearModel:
        pass

    def fit(self, X, y) -> "Regressor":
        self.model = self._fit(X, y)
        return self

    def predict(self, X) -> np.ndarray:
        if self.model is None:
            raise InvalidInput(f"{self.__class__.__name__} no fue ajustado.")
        return self.model.predict(X)


class OLS(Regressor):
    name = "ols"

    def _fit(self, X, y):
        return ols_fit(X, y)


class Lasso(Regressor):
    name = "lasso"

    def __init__(self, lam: float, max_iter: int = 10000, tol: float = 1e-8):
        super().__init__()
        self.lam = lam
        self.max_iter = max_iter
        self.tol = tol

    def _fit(self, X, y):
        return lasso_fit(X, y, self.lam, max_iter=self.max_iter, tol=self.tol)


REGRESSORS = {OLS.name: OLS, Lasso.name: Lasso}
