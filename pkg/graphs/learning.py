import logging
from dataclasses import dataclass, field

import numpy as np
from scipy import sparse
from scipy.spatial.distance import pdist, squareform

from common.errors import InvalidInput, NotConverged
from graphs.construction import TimeSeriesMatrix
from graphs.core import Graph

__all__ = ["LearnedGraph", "kalofolias_solve", "kalofolias_learn", "kalofolias_objective", "CHECKPOINT_EVERY"]

logger = logging.getLogger(__name__)

CHECKPOINT_EVERY = 10


@dataclass
class LearnedGraph:
    """Resultado del aprendizaje: el grafo y cómo le fue al solver."""
    graph: Graph
    converged: bool
    iterations: int
    # (iteración, objetivo del mejor iterado hasta ese momento)
    checkpoints: list = field(default_factory=list)

    @property
    def objective(self) -> float:
        return self.checkpoints[-1][1] if self.checkpoints else float("nan")


def _sum_operator(n: int) -> sparse.csr_matrix:
    """
    Operador S (n × n(n-1)/2) tal que S·w = W·1 para w = triángulo superior de W.

    El orden de las aristas es el de np.triu_indices(n, 1), el mismo de squareform.
    """
    rows, cols = np.triu_indices(n, k=1)
    n_edges = rows.size
    edges = np.arange(n_edges)
    data = np.ones(2 * n_edges)
    return sparse.csr_matrix(
        (data, (np.concatenate([rows, cols]), np.concatenate([edges, edges]))), shape=(n, n_edges)
    )


def _objective(w: np.ndarray, z: np.ndarray, degrees: np.ndarray, alpha: float, beta: float) -> float:
    if np.any(w < 0) or np.any(degrees <= 0):
        return float("inf")
    # en forma vectorial cada arista aparece una vez; en la matricial, dos
    return float(2 * z @ w - alpha * np.sum(np.log(degrees)) + 2 * beta * w @ w)


def _pairwise_distances(x: TimeSeriesMatrix) -> np.ndarray:
    z = pdist(x.data.T, metric="sqeuclidean")
    mean = z.mean() if z.size else 0.0
    return z / mean if mean > 0 else z


def kalofolias_objective(weights, x, alpha: float = 1.0, beta: float = 0.0) -> float:
    """
    Objetivo ‖W ⊙ Z‖₁ − α·1ᵀlog(W1) + β‖W‖_F², con Z normalizada por su media.

    Devuelve infinito fuera del conjunto factible (pesos negativos o algún grado nulo).
    """
    x = x if isinstance(x, TimeSeriesMatrix) else TimeSeriesMatrix(x)
    weights = np.asarray(weights, dtype=float)
    w = squareform(weights, checks=False)
    return _objective(w, _pairwise_distances(x), weights.sum(axis=1), alpha, beta)


def kalofolias_solve(x, alpha: float = 1.0, beta: float = 0.0, max_iter: int = 1000, tol: float = 1e-5,
                     step: float = 0.5, strict: bool = False) -> LearnedGraph:
    """
    Aprende un grafo sobre el cual las columnas de x son suaves (modelo de log-grados).

    Resuelve
        min_{W ≥ 0, simétrica, diag nula}  ‖W ⊙ Z‖₁ − α·1ᵀlog(W1) + β‖W‖_F²
    con Z_ij = ‖x_i − x_j‖² (columnas como señales de los nodos) normalizada por su
    media, usando el esquema primal-dual forward-backward-forward sobre el vector
    de aristas w. El término logarítmico impide grados nulos.

    Cada CHECKPOINT_EVERY iteraciones (y en la primera) se evalúa el objetivo sobre la
    proyección factible del iterado y se guarda el mejor. Si no se alcanza `tol`
    se devuelve ese mejor iterado con converged=False.
    """
    x = x if isinstance(x, TimeSeriesMatrix) else TimeSeriesMatrix(x)
    if alpha <= 0:
        raise InvalidInput(f"alpha debe ser positivo, se recibió {alpha}.")
    if beta < 0:
        raise InvalidInput(f"beta no puede ser negativo, se recibió {beta}.")
    if max_iter < 1:
        raise InvalidInput(f"max_iter debe ser al menos 1, se recibió {max_iter}.")
    n = x.n_nodes
    if n < 2:
        raise InvalidInput("Hacen falta al menos 2 nodos para aprender un grafo.")

    z = _pairwise_distances(x)
    if beta == 0 and np.any(z == 0):
        logger.warning("Hay columnas idénticas y beta=0: el peso de esas aristas no está acotado.")
    S = _sum_operator(n)
    St = S.T.tocsr()
    mu = 4 * beta + np.sqrt(2 * (n - 1))
    gamma = step / mu

    w = np.zeros(z.size)
    d = np.zeros(n)
    best_w, best_obj = np.zeros(z.size), float("inf")
    checkpoints = []
    converged = False
    change = float("inf")
    iteration = 0
    for iteration in range(1, max_iter + 1):
        y = w - gamma * (4 * beta * w + St @ d)
        y_dual = d + gamma * (S @ w)
        p = np.maximum(0.0, y - 2 * gamma * z)
        p_dual = (y_dual - np.sqrt(y_dual ** 2 + 4 * alpha * gamma)) / 2
        q = p - gamma * (4 * beta * p + St @ p_dual)
        q_dual = p_dual + gamma * (S @ p)
        w_next = w - y + q
        d_next = d - y_dual + q_dual

        change = max(np.linalg.norm(w_next - w) / max(np.linalg.norm(w), 1e-12),
                     np.linalg.norm(d_next - d) / max(np.linalg.norm(d), 1e-12))
        w, d = w_next, d_next
        converged = change < tol

        if iteration == 1 or iteration % CHECKPOINT_EVERY == 0 or converged or iteration == max_iter:
            candidate = np.maximum(w, 0.0)
            obj = _objective(candidate, z, S @ candidate, alpha, beta)
            if obj < best_obj:
                best_w, best_obj = candidate, obj
            checkpoints.append((iteration, best_obj))
        if converged:
            break

    if converged:
        logger.debug("Grafo aprendido en %d iteraciones, objetivo %.6g", iteration, best_obj)
    elif strict:
        raise NotConverged("kalofolias_learn", iteration, change)
    else:
        logger.warning("kalofolias_learn no convergió en %d iteraciones (cambio relativo %.2e); "
                       "se devuelve el mejor iterado.", iteration, change)

    weights = squareform(best_w)
    return LearnedGraph(Graph(weights), converged, iteration, checkpoints)


def kalofolias_learn(x, alpha: float = 1.0, beta: float = 0.0, max_iter: int = 1000, tol: float = 1e-5) -> Graph:
    """Igual que kalofolias_solve pero devuelve solo el grafo."""
    return kalofolias_solve(x, alpha=alpha, beta=beta, max_iter=max_iter, tol=tol).graph
