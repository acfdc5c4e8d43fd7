import logging
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from common.errors import ConnectivityFailure, InvalidInput, IsolatedNode
from common.io import write_json, write_matrix
from common.rng import GENERATOR_VERSION, generator, substreams
from graphs.core import Graph

__all__ = [
    "SyntheticDataset",
    "erdos_renyi",
    "diffusion_operator",
    "generate_dataset",
    "MAX_ATTEMPTS",
]

logger = logging.getLogger(__name__)

MAX_ATTEMPTS = 100


def _seed_sequence(seed) -> np.random.SeedSequence:
    if isinstance(seed, np.random.SeedSequence):
        return seed
    return substreams(seed)["graph"]


def erdos_renyi(n: int, p: float, seed) -> Graph:
    """
    Grafo de Erdős–Rényi G(n, p) con pesos 1, remuestreado hasta que sea conexo.

    El intento i usa el hijo i de la semilla (sin modificar el SeedSequence
    recibido), así que el resultado depende solo de la semilla.
    """
    if n < 2:
        raise InvalidInput(f"Hacen falta al menos 2 nodos, se pidieron {n}.")
    if not 0 <= p <= 1:
        raise InvalidInput(f"p debe ser una probabilidad, se recibió {p}.")
    root = _seed_sequence(seed)
    rows, cols = np.triu_indices(n, k=1)
    for attempt in range(MAX_ATTEMPTS):
        child = np.random.SeedSequence(root.entropy, spawn_key=tuple(root.spawn_key) + (attempt,))
        present = generator(child).random(rows.size) < p
        weights = np.zeros((n, n))
        weights[rows[present], cols[present]] = 1.0
        g = Graph(weights + weights.T)
        if g.is_connected():
            if attempt:
                logger.debug("ER(%d, %.3g) conexo al intento %d", n, p, attempt + 1)
            return g
    raise ConnectivityFailure(f"ER({n}, {p}) no salió conexo en {MAX_ATTEMPTS} intentos.")


def diffusion_operator(g: Graph, halved: bool = False) -> np.ndarray:
    """
    Paseo al azar perezoso A = I + D^{-1}W, tal como se escribe habitualmente sin el 1/2.

    Con halved=True devuelve la variante convencional (I + D^{-1}W)/2.
    Con pesos no negativos cada fila de A suma 2 (o 1 en la variante halved).
    """
    degrees = g.degrees()
    isolated = np.flatnonzero(degrees == 0)
    if isolated.size:
        raise IsolatedNode(isolated)
    operator = np.eye(g.n_nodes) + g.weights / degrees[:, None]
    return operator / 2 if halved else operator


@dataclass
class SyntheticDataset:
    """
    Problema de regresión sobre señales suaves en un grafo.

    raw es R, diffused es R̂ = R·A^steps, X = R̂ + σ·ruido e
    y = log(R̂β + shift), con shift elegido para que el argumento sea positivo.
    """
    graph: Graph
    X: np.ndarray
    y: np.ndarray
    beta: np.ndarray
    seed: int
    shift: float
    raw: np.ndarray
    diffused: np.ndarray
    params: dict = field(default_factory=dict)

    @property
    def n_samples(self) -> int:
        return self.X.shape[0]

    def split_generator(self) -> np.random.Generator:
        """Generador del sub-stream "split", para particionar este dataset."""
        return generator(substreams(self.seed)["split"])

    def metadata(self) -> dict:
        return {
            "seed": self.seed,
            "generator": GENERATOR_VERSION,
            "params": dict(self.params),
            "shift": self.shift,
            "n_edges": self.graph.n_edges(),
        }

    def export(self, directory) -> Path:
        """Escribe weights.csv, X.csv, y.csv y meta.json en el directorio."""
        directory = Path(directory)
        directory.mkdir(parents=True, exist_ok=True)
        write_matrix(directory / "weights.csv", self.graph.weights)
        write_matrix(directory / "X.csv", self.X)
        write_matrix(directory / "y.csv", self.y)
        write_json(directory / "meta.json", self.metadata())
        return directory


def generate_dataset(n: int, m: int, p: float = 0.1, sigma: float = 0.1, seed: int = 0,
                     halved_diffusion: bool = False, diffusion_steps: int = 1) -> SyntheticDataset:
    """
    Genera el problema sintético: grafo ER, señales difundidas, objetivo no lineal y ruido.

    Cada ingrediente sale de su propio sub-stream de la semilla (graph, signals,
    weights, noise), así que el resultado es idéntico para los mismos parámetros.
    """
    if m < 1:
        raise InvalidInput(f"Hace falta al menos una muestra, se pidieron {m}.")
    if sigma < 0:
        raise InvalidInput(f"sigma no puede ser negativo, se recibió {sigma}.")
    if diffusion_steps < 1:
        raise InvalidInput(f"diffusion_steps debe ser al menos 1, se recibió {diffusion_steps}.")
    streams = substreams(seed)
    graph = erdos_renyi(n, p, streams["graph"])

    raw = generator(streams["signals"]).standard_normal((m, n))
    diffusion = np.linalg.matrix_power(diffusion_operator(graph, halved_diffusion), diffusion_steps)
    diffused = raw @ diffusion
    beta = generator(streams["weights"]).random(n)

    response = diffused @ beta
    shift = 1.0 + max(0.0, -float(response.min()))
    y = np.log(response + shift)
    X = diffused + sigma * generator(streams["noise"]).standard_normal((m, n))

    params = {
        "n": n,
        "m": m,
        "p": p,
        "sigma": sigma,
        "halved_diffusion": halved_diffusion,
        "diffusion_steps": diffusion_steps,
    }
    return SyntheticDataset(graph, X, y, beta, int(seed), shift, raw, diffused, params)
