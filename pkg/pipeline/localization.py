import csv
from pathlib import Path

import numpy as np

from common.errors import DimensionMismatch
from pipeline.regression import LinearModel

__all__ = ["LOCALIZATION_FIELDS", "scale_localization", "write_localization"]

LOCALIZATION_FIELDS = ("node", "sign", "band", "band_index", "weight")


def scale_localization(weights, layout: list) -> list:
    """
    Mapa de escalas por nodo a partir de los pesos de un modelo lineal.

    `layout` es la lista de feature_layout: una entrada {band, band_index, node}
    por columna. Para cada nodo se devuelve el peso positivo más grande y el
    negativo más chico con la banda donde aparecen; a igual módulo gana la
    banda que aparece primero. Los nodos sin pesos de un signo no tienen fila
    para ese signo. Orden: por nodo, primero "+".
    """
    if isinstance(weights, LinearModel):
        weights = weights.weights
    weights = np.asarray(weights, dtype=float)
    if weights.shape != (len(layout),):
        raise DimensionMismatch((len(layout),), weights.shape, "los pesos")
    best = {}
    for entry, w in zip(layout, weights):
        if w == 0:
            continue
        key = (entry["node"], "+" if w > 0 else "-")
        if key not in best or abs(w) > abs(best[key]["weight"]):
            best[key] = {"node": entry["node"], "sign": key[1], "band": entry["band"],
                         "band_index": entry["band_index"], "weight": float(w)}
    return [best[key] for key in sorted(best, key=lambda k: (k[0], k[1] == "-"))]


def write_localization(path, rows: list) -> Path:
    """CSV con una fila por (nodo, signo), listo para graficar."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="", encoding="utf-8") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(LOCALIZATION_FIELDS)
        for row in rows:
            writer.writerow(["" if row[key] is None else (repr(row[key]) if isinstance(row[key], float) else row[key])
                             for key in LOCALIZATION_FIELDS])
    return path
