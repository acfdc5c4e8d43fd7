import logging
from dataclasses import dataclass
from enum import Enum
from typing import Optional

import numpy as np
import scipy.linalg
from scipy.sparse.csgraph import connected_components

from common.errors import AsymmetricInput, ConvergenceFailure, DimensionMismatch, InvalidInput, IsolatedNode

__all__ = [
    "Graph",
    "LaplacianKind",
    "Laplacian",
    "Spectrum",
    "build_laplacian",
    "eigendecompose",
    "gft",
    "igft",
    "laplacian_quadratic_form",
    "fix_signs",
]

logger = logging.getLogger(__name__)


def _frozen(array: np.ndarray) -> np.ndarray:
    array = np.array(array, dtype=float, copy=True)
    array.setflags(write=False)
    return array


class Graph:
    """
    Grafo no dirigido con pesos reales (pueden ser negativos).

    Los pesos forman una matriz simétrica con diagonal nula. Las coordenadas
    de los nodos son opcionales y solo las usa el grafo semi-local.
    El objeto es inmutable: las matrices quedan de solo lectura.
    """

    def __init__(self, weights, coords=None):
        weights = np.asarray(weights, dtype=float)
        if weights.ndim != 2 or weights.shape[0] != weights.shape[1] or weights.shape[0] == 0:
            raise AsymmetricInput(f"La matriz de pesos debe ser cuadrada y no vacía, se recibió {weights.shape}.")
        if not np.all(np.isfinite(weights)):
            raise InvalidInput("La matriz de pesos tiene valores no finitos.")
        if not np.array_equal(weights, weights.T):
            i, j = np.unravel_index(np.argmax(np.abs(weights - weights.T)), weights.shape)
            raise AsymmetricInput(f"La matriz de pesos no es simétrica: w[{i}][{j}]={weights[i, j]} y w[{j}][{i}]={weights[j, i]}.")
        if np.any(np.diag(weights) != 0):
            raise AsymmetricInput("La diagonal de la matriz de pesos debe ser nula.")
        self.weights = _frozen(weights)
        self.coords = None
        if coords is not None:
            coords = np.asarray(coords, dtype=float)
            if coords.ndim == 1:
                coords = coords[:, None]
            if coords.shape[0] != self.n_nodes:
                raise DimensionMismatch(self.n_nodes, coords.shape[0], "las coordenadas")
            self.coords = _frozen(coords)

    @property
    def n_nodes(self) -> int:
        return self.weights.shape[0]

    def degrees(self) -> np.ndarray:
        """Grados absolutos D_ii = Σ_j |w_ij|."""
        return np.abs(self.weights).sum(axis=1)

    def n_edges(self) -> int:
        return int(np.count_nonzero(np.triu(self.weights, k=1)))

    def is_connected(self) -> bool:
        n_components, _ = connected_components(self.weights != 0, directed=False)
        return n_components == 1

    def with_weights(self, weights) -> "Graph":
        """Grafo nuevo con otros pesos y las mismas coordenadas."""
        return Graph(weights, self.coords)

    def __str__(self):
        return f"{self.__class__.__name__}<N={self.n_nodes}, |E|={self.n_edges()}, coords={self.coords is not None}>"


class LaplacianKind(Enum):
    COMBINATORIAL = "combinatorial"
    NORMALIZED = "normalized"


@dataclass(frozen=True)
class Laplacian:
    matrix: np.ndarray
    kind: LaplacianKind

    @property
    def n_nodes(self) -> int:
        return self.matrix.shape[0]


@dataclass(frozen=True)
class Spectrum:
    """Autovalores ascendentes y autovectores ortonormales (columna k ↔ autovalor k)."""
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    laplacian: Optional[Laplacian] = None

    @property
    def n_nodes(self) -> int:
        return self.eigenvalues.shape[0]

    @property
    def lambda_max(self) -> float:
        return float(self.eigenvalues[-1])


def build_laplacian(g: Graph, kind: LaplacianKind = LaplacianKind.COMBINATORIAL) -> Laplacian:
    """
    Construye L = D - W con D_ii = Σ_j |w_ij|.

    Usar el grado absoluto garantiza que L sea semidefinida positiva aunque haya
    pesos negativos. La versión normalizada es D^{-1/2} L D^{-1/2} y exige que
    ningún nodo quede aislado.
    """
    kind = LaplacianKind(kind)
    degrees = g.degrees()
    matrix = np.diag(degrees) - g.weights
    if kind is LaplacianKind.NORMALIZED:
        isolated = np.flatnonzero(degrees == 0)
        if isolated.size:
            raise IsolatedNode(isolated)
        inv_sqrt = 1.0 / np.sqrt(degrees)
        matrix = inv_sqrt[:, None] * matrix * inv_sqrt[None, :]
        # el producto elemento a elemento puede romper la simetría en el último bit
        matrix = (matrix + matrix.T) / 2
    return Laplacian(_frozen(matrix), kind)


def fix_signs(vectors: np.ndarray) -> np.ndarray:
    """
    Fija el signo de cada columna: la entrada de mayor módulo queda no negativa.

    Con empates gana el índice más bajo. Dos módulos que difieren en menos de
    1e-10 relativo cuentan como empate, para que el redondeo no decida el signo.
    """
    vectors = np.array(vectors, dtype=float, copy=True)
    magnitudes = np.abs(vectors)
    rows = np.argmax(magnitudes >= magnitudes.max(axis=0) * (1 - 1e-10), axis=0)
    signs = np.sign(vectors[rows, np.arange(vectors.shape[1])])
    signs[signs == 0] = 1.0
    return vectors * signs


def eigendecompose(l: Laplacian) -> Spectrum:
    """Descomposición completa de L con la convención de signos de fix_signs."""
    matrix = np.asarray(l.matrix, dtype=float)
    if not np.allclose(matrix, matrix.T, rtol=0.0, atol=1e-12):
        raise AsymmetricInput("El laplaciano no es simétrico.")
    try:
        eigenvalues, eigenvectors = scipy.linalg.eigh(matrix, check_finite=True)
    except (np.linalg.LinAlgError, ValueError) as exc:
        raise ConvergenceFailure(f"eigh falló sobre un laplaciano de {matrix.shape[0]} nodos: {exc}") from exc

    eigenvectors = fix_signs(eigenvectors)
    scale = max(np.abs(matrix).max(initial=0.0), 1.0)
    residual = float(np.abs(matrix @ eigenvectors - eigenvectors * eigenvalues).max(initial=0.0)) / scale
    if not np.isfinite(residual) or residual > 1e-8:
        raise ConvergenceFailure("La descomposición no verifica L·u = λ·u", residual)
    logger.debug("Espectro de %d nodos: λ ∈ [%.3e, %.3e], residuo %.2e",
                 matrix.shape[0], eigenvalues[0], eigenvalues[-1], residual)
    return Spectrum(_frozen(eigenvalues), _frozen(eigenvectors), l)


def _check_signal(s: Spectrum, f, what: str) -> np.ndarray:
    f = np.asarray(f, dtype=float)
    if f.ndim not in (1, 2) or f.shape[-1] != s.n_nodes:
        raise DimensionMismatch(s.n_nodes, f.shape, what)
    return f


def gft(s: Spectrum, f) -> np.ndarray:
    """
    Transformada de Fourier en grafos: f̂ = Uᵀf.

    Acepta una señal (n,) o un lote (m, n) con una señal por fila.
    """
    f = _check_signal(s, f, "la señal")
    return f @ s.eigenvectors


def igft(s: Spectrum, fhat) -> np.ndarray:
    """Inversa de gft: f = U f̂."""
    fhat = _check_signal(s, fhat, "los coeficientes espectrales")
    return fhat @ s.eigenvectors.T


def laplacian_quadratic_form(l: Laplacian, f) -> float:
    """fᵀLf, cuánto varía la señal sobre las aristas."""
    f = np.asarray(f, dtype=float)
    if f.shape != (l.n_nodes,):
        raise DimensionMismatch((l.n_nodes,), f.shape)
    return float(f @ l.matrix @ f)
