import csv
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from tabulate import tabulate

from common.io import write_json
from common.rng import GENERATOR_VERSION
from pipeline.metrics import METRICS

__all__ = ["RegressionReport", "NO_WAVELET", "summarize_trials", "ROW_FIELDS", "Z_95"]

NO_WAVELET = "No Wavelet"
Z_95 = 1.959963984540054

ROW_FIELDS = (
    "representation", "kernel_family", "graph_method", "n_trials",
    "mse_mean", "mse_se", "rmse_mean", "rmse_se", "r2_mean", "r2_se", "pearson_mean", "pearson_se",
    "delta_r2_mean", "delta_r2_ci_low", "delta_r2_ci_high",
)


def _mean_se(values: np.ndarray) -> tuple:
    values = values[np.isfinite(values)]
    if values.size == 0:
        return float("nan"), float("nan")
    se = float(values.std(ddof=1) / np.sqrt(values.size)) if values.size > 1 else float("nan")
    return float(values.mean()), se


def summarize_trials(arms: list, trials: list, graph_method: str = "erdos_renyi") -> list:
    """
    Una fila por brazo con media y error estándar de cada métrica sobre los ensayos.

    rmse_mean es la raíz de mse_mean, de modo que rmse² == mse en cada fila.
    Para los brazos con wavelets se agrega la diferencia pareada de R² contra
    el brazo sin wavelets, con su intervalo de confianza del 95 % (aproximación normal).
    """
    rows = []
    baseline = np.array([t["scores"][NO_WAVELET]["r2"] for t in trials], dtype=float)
    for label, family in arms:
        row = {"representation": label, "kernel_family": family, "graph_method": graph_method,
               "n_trials": len(trials)}
        for name in METRICS:
            values = np.array([t["scores"][label][name] for t in trials], dtype=float)
            row[f"{name}_mean"], row[f"{name}_se"] = _mean_se(values)
        row["rmse_mean"] = float(np.sqrt(row["mse_mean"])) if np.isfinite(row["mse_mean"]) else float("nan")
        delta = mean = low = high = None
        if label != NO_WAVELET and trials:
            delta = np.array([t["scores"][label]["r2"] for t in trials], dtype=float) - baseline
            mean, se = _mean_se(delta)
            low, high = (mean - Z_95 * se, mean + Z_95 * se) if np.isfinite(se) else (None, None)
        row["delta_r2_mean"], row["delta_r2_ci_low"], row["delta_r2_ci_high"] = mean, low, high
        rows.append({key: row[key] for key in ROW_FIELDS})
    return rows


@dataclass
class RegressionReport:
    """Resultado del benchmark: configuración resuelta, filas resumen, detalle por ensayo y exclusiones."""
    config: dict
    rows: list
    trials: list = field(default_factory=list)
    excluded: list = field(default_factory=list)

    def row(self, representation: str) -> dict:
        for row in self.rows:
            if row["representation"] == representation:
                return row
        raise KeyError(representation)

    def to_dict(self) -> dict:
        return {
            "generator": GENERATOR_VERSION,
            "config": self.config,
            "n_trials": len(self.trials) + len(self.excluded),
            "n_excluded": len(self.excluded),
            "rows": self.rows,
            "excluded": self.excluded,
            "trials": self.trials,
        }

    def to_json(self, path) -> Path:
        return write_json(path, self.to_dict())

    def to_csv(self, path) -> Path:
        """Una fila por brazo. Los valores indefinidos quedan vacíos."""
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, "w", newline="", encoding="utf-8") as f:
            writer = csv.writer(f, lineterminator="\n")
            writer.writerow(ROW_FIELDS)
            for row in self.rows:
                writer.writerow([_cell(row[key]) for key in ROW_FIELDS])
        return path

    def to_table(self) -> str:
        header = ["Representación", "MSE", "R²", "RMSE", "Pearson", "ΔR² [IC 95%]"]
        table = []
        for row in self.rows:
            delta = "-"
            if row["delta_r2_mean"] is not None:
                low, high = row["delta_r2_ci_low"], row["delta_r2_ci_high"]
                bracket = f" [{low:+.4f}, {high:+.4f}]" if low is not None else ""
                delta = f"{row['delta_r2_mean']:+.4f}{bracket}"
            table.append([
                row["representation"],
                _with_se(row["mse_mean"], row["mse_se"], "{:.4e}"),
                _with_se(row["r2_mean"], row["r2_se"], "{:.4f}"),
                f"{row['rmse_mean']:.4f}",
                _with_se(row["pearson_mean"], row["pearson_se"], "{:.4f}"),
                delta,
            ])
        footer = f"\nEnsayos válidos: {len(self.trials)}, excluidos: {len(self.excluded)}"
        return tabulate(table, header, tablefmt="fancy_grid") + footer


def _with_se(mean, se, fmt: str) -> str:
    if mean is None or not np.isfinite(mean):
        return "nan"
    text = fmt.format(mean)
    return f"{text} ± {fmt.format(se)}" if se is not None and np.isfinite(se) else text


def _cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return repr(value) if np.isfinite(value) else ""
    return str(value)
