import logging

import numpy as np
from scipy.spatial.distance import pdist, squareform

from common.errors import DegenerateSeries, DimensionMismatch, DisconnectedAtAnyThreshold, InvalidInput, KTooLarge
from graphs.core import Graph

__all__ = [
    "TimeSeriesMatrix",
    "covariance_graph",
    "correlation_graph",
    "threshold_graph",
    "knn_graph",
    "semi_local_graph",
]

logger = logging.getLogger(__name__)


class TimeSeriesMatrix:
    """Serie temporal multivariada: T observaciones (filas) por n nodos (columnas)."""

    def __init__(self, data):
        data = np.array(data, dtype=float, copy=True)
        if data.ndim != 2:
            raise InvalidInput(f"La serie temporal debe ser una matriz T×n, se recibió {data.shape}.")
        if data.shape[0] < 2:
            raise InvalidInput(f"Hacen falta al menos 2 observaciones, hay {data.shape[0]}.")
        if not np.all(np.isfinite(data)):
            raise InvalidInput("La serie temporal tiene valores no finitos.")
        self.data = data
        self.data.setflags(write=False)

    @property
    def n_nodes(self) -> int:
        return self.data.shape[1]

    @property
    def n_samples(self) -> int:
        return self.data.shape[0]


def _as_series(x) -> TimeSeriesMatrix:
    return x if isinstance(x, TimeSeriesMatrix) else TimeSeriesMatrix(x)


def _symmetric_off_diagonal(matrix: np.ndarray) -> np.ndarray:
    """Copia el triángulo superior sobre el inferior y anula la diagonal: simetría exacta."""
    upper = np.triu(matrix, k=1)
    return upper + upper.T


def covariance_graph(x) -> Graph:
    """Pesos = covarianza muestral entre columnas (denominador T-1), diagonal nula."""
    x = _as_series(x)
    cov = np.atleast_2d(np.cov(x.data, rowvar=False, ddof=1))
    return Graph(_symmetric_off_diagonal(cov))


def correlation_graph(x) -> Graph:
    """Pesos = correlación de Pearson entre columnas, diagonal nula."""
    x = _as_series(x)
    constant = np.flatnonzero(np.ptp(x.data, axis=0) == 0)
    if constant.size:
        raise DegenerateSeries(f"Las columnas {constant.tolist()} son constantes: la correlación no está definida.")
    corr = np.clip(np.atleast_2d(np.corrcoef(x.data, rowvar=False)), -1.0, 1.0)
    return Graph(_symmetric_off_diagonal(corr))


def threshold_graph(g: Graph, t: float, binary: bool = False) -> Graph:
    """
    Anula los pesos con |w| < t. Con binary=True los que sobreviven pasan a valer 1.
    """
    weights = np.where(np.abs(g.weights) < t, 0.0, g.weights)
    if binary:
        weights = (weights != 0).astype(float)
    return g.with_weights(weights)


def knn_graph(g: Graph, k: int, binary: bool = False) -> Graph:
    """
    Conserva las k aristas de mayor |w| de cada nodo.

    La simetrización es por unión: una arista sobrevive si cualquiera de sus
    extremos la eligió, y mantiene el mismo peso en W_ij y W_ji. Los empates en
    el k-ésimo lugar los gana el nodo de índice más bajo.
    """
    n = g.n_nodes
    k = int(k)
    if k < 1 or k >= n:
        raise KTooLarge(f"k={k} debe estar entre 1 y n-1={n - 1}.")
    strength = np.abs(g.weights)
    np.fill_diagonal(strength, -np.inf)
    # orden estable sobre -|w|: a igual peso queda primero el índice menor
    order = np.argsort(-strength, axis=1, kind="stable")[:, :k]
    keep = np.zeros((n, n), dtype=bool)
    keep[np.repeat(np.arange(n), k), order.ravel()] = True
    keep |= keep.T
    weights = np.where(keep, g.weights, 0.0)
    if binary:
        weights = (weights != 0).astype(float)
    return g.with_weights(weights)


class _DisjointSet:
    def __init__(self, n: int):
        self.parent = list(range(n))
        self.rank = [0] * n
        self.components = n

    def find(self, i: int) -> int:
        while self.parent[i] != i:
            self.parent[i] = self.parent[self.parent[i]]
            i = self.parent[i]
        return i

    def union(self, i: int, j: int) -> bool:
        ri, rj = self.find(i), self.find(j)
        if ri == rj:
            return False
        if self.rank[ri] < self.rank[rj]:
            ri, rj = rj, ri
        self.parent[rj] = ri
        if self.rank[ri] == self.rank[rj]:
            self.rank[ri] += 1
        self.components -= 1
        return True


def semi_local_graph(g: Graph, coords=None) -> Graph:
    """
    Poda las aristas más largas que el menor umbral de distancia que mantiene el grafo conexo.

    El umbral t* se busca recorriendo las distancias entre baricentros ordenadas
    (solo de pares con peso no nulo) y uniendo componentes hasta que queda una
    sola; t* es la distancia de la arista que las une a todas.
    """
    coords = g.coords if coords is None else np.asarray(coords, dtype=float)
    if coords is None:
        raise InvalidInput("El grafo semi-local necesita las coordenadas de los nodos.")
    if coords.ndim == 1:
        coords = coords[:, None]
    if coords.shape[0] != g.n_nodes:
        raise DimensionMismatch(g.n_nodes, coords.shape[0], "las coordenadas")

    n = g.n_nodes
    distances = squareform(pdist(coords)) if n > 1 else np.zeros((1, 1))
    rows, cols = np.triu_indices(n, k=1)
    present = g.weights[rows, cols] != 0
    rows, cols = rows[present], cols[present]
    pair_distances = distances[rows, cols]

    threshold = 0.0
    components = _DisjointSet(n)
    for e in np.argsort(pair_distances, kind="stable"):
        if components.components == 1:
            break
        if components.union(int(rows[e]), int(cols[e])):
            threshold = float(pair_distances[e])
    if components.components > 1:
        raise DisconnectedAtAnyThreshold(
            f"Quedan {components.components} componentes aun sin umbral: hay pesos nulos que desconectan el grafo."
        )
    logger.debug("Umbral semi-local t* = %.6g", threshold)
    weights = np.where(distances <= threshold, g.weights, 0.0)
    return Graph(weights, coords)
