import numpy as np

from common.errors import ConstantInput, DimensionMismatch, InvalidInput

__all__ = ["METRICS", "metrics"]

METRICS = ("mse", "rmse", "r2", "pearson")


def metrics(y_true, y_pred, strict: bool = False) -> dict:
    """
    MSE, RMSE, R² = 1 - SS_res/SS_tot y correlación de Pearson.

    Si alguna de las dos entradas es constante Pearson no está definida: se
    informa NaN con pearson_defined=False, o se lanza ConstantInput con strict=True.
    Con y_true constante R² vale 1 si la predicción es exacta y 0 si no.
    """
    y_true = np.asarray(y_true, dtype=float).ravel()
    y_pred = np.asarray(y_pred, dtype=float).ravel()
    if y_true.shape != y_pred.shape:
        raise DimensionMismatch(y_true.shape, y_pred.shape, "las predicciones")
    if y_true.size < 2:
        raise InvalidInput(f"Hacen falta al menos 2 valores, hay {y_true.size}.")
    residual = y_true - y_pred
    mse = float(np.mean(residual ** 2))
    ss_res = float(np.sum(residual ** 2))
    ss_tot = float(np.sum((y_true - y_true.mean()) ** 2))
    if ss_tot > 0:
        r2 = 1.0 - ss_res / ss_tot
    else:
        r2 = 1.0 if ss_res == 0 else 0.0

    defined = np.ptp(y_true) > 0 and np.ptp(y_pred) > 0
    if defined:
        pearson = float(np.clip(np.corrcoef(y_true, y_pred)[0, 1], -1.0, 1.0))
    elif strict:
        raise ConstantInput("La correlación de Pearson no está definida para entradas constantes.")
    else:
        pearson = float("nan")
    return {"mse": mse, "rmse": float(np.sqrt(mse)), "r2": r2, "pearson": pearson, "pearson_defined": bool(defined)}
