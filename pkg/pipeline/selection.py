import numpy as np

from common.errors import ConstantFeature, ConstantInput, DimensionMismatch, InvalidInput, KOutOfRange

__all__ = ["correlation_scores", "select_k_best"]


def correlation_scores(X, y) -> np.ndarray:
    """|r| de Pearson de cada columna con y. Las columnas constantes puntúan 0."""
    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=float)
    if X.ndim != 2 or y.shape != (X.shape[0],):
        raise DimensionMismatch((X.shape[0],), y.shape, "el objetivo")
    yc = y - y.mean()
    y_norm = np.linalg.norm(yc)
    if np.ptp(y) == 0 or y_norm == 0:
        raise ConstantInput("El objetivo es constante: ninguna correlación está definida.")
    Xc = X - X.mean(axis=0)
    norms = np.linalg.norm(Xc, axis=0)
    constant = np.ptp(X, axis=0) == 0
    with np.errstate(divide="ignore", invalid="ignore"):
        scores = np.abs(Xc.T @ yc) / (norms * y_norm)
    scores[constant | ~np.isfinite(scores)] = 0.0
    return np.minimum(scores, 1.0)


def select_k_best(X, y, k: int, strict: bool = False) -> np.ndarray:
    """
    Índices de las k columnas más correlacionadas (en módulo) con y, de mayor a menor.

    A igual puntaje gana el índice menor. Las columnas constantes tienen
    correlación indefinida y puntúan 0; con strict=True lanzan ConstantFeature.
    """
    X = np.asarray(X, dtype=float)
    if X.ndim != 2:
        raise InvalidInput(f"X debe ser una matriz, se recibió {X.shape}.")
    m, q = X.shape
    if isinstance(k, bool) or int(k) != k or not 1 <= k <= q:
        raise KOutOfRange(f"k={k} debe estar entre 1 y la cantidad de features ({q}).")
    if m < 3:
        raise InvalidInput(f"Hacen falta al menos 3 muestras para seleccionar features, hay {m}.")
    if strict:
        constant = np.flatnonzero(np.ptp(X, axis=0) == 0)
        if constant.size:
            raise ConstantFeature(f"Las columnas {constant.tolist()} son constantes.")
    scores = correlation_scores(X, y)
    return np.argsort(-scores, kind="stable")[: int(k)]
