from dataclasses import dataclass

import numpy as np
import scipy.linalg

from common.errors import DimensionMismatch, InvalidInput, TooManyComponents
from graphs.core import fix_signs

__all__ = ["PCA", "pca_fit", "pca_transform"]


@dataclass(frozen=True)
class PCA:
    """Modelo de PCA: media de entrenamiento y componentes por fila (k × q)."""
    mean: np.ndarray
    components: np.ndarray
    explained_variance: np.ndarray
    total_variance: float

    @property
    def n_components(self) -> int:
        return self.components.shape[0]

    @property
    def explained_variance_ratio(self) -> np.ndarray:
        if self.total_variance == 0:
            return np.zeros_like(self.explained_variance)
        return self.explained_variance / self.total_variance

    def transform(self, X) -> np.ndarray:
        return pca_transform(self, X)

    def inverse_transform(self, Z) -> np.ndarray:
        """Reconstrucción en el espacio original a partir de las proyecciones."""
        return np.asarray(Z, dtype=float) @ self.components + self.mean


def pca_fit(X, n_components: int) -> PCA:
    """
    Componentes principales por SVD de los datos centrados.

    Las componentes son los vectores singulares derechos, con el mismo criterio
    de signo que los autovectores del laplaciano; la varianza explicada es s²/(m-1).
    """
    X = np.asarray(X, dtype=float)
    if X.ndim != 2:
        raise InvalidInput(f"X debe ser una matriz, se recibió {X.shape}.")
    m, q = X.shape
    if m < 2:
        raise InvalidInput("Hacen falta al menos 2 muestras para estimar varianzas.")
    if isinstance(n_components, bool) or int(n_components) != n_components or not 1 <= n_components <= min(m, q):
        raise TooManyComponents(f"n_components={n_components} debe estar entre 1 y min(m, q)={min(m, q)}.")
    mean = X.mean(axis=0)
    _, s, vt = scipy.linalg.svd(X - mean, full_matrices=False)
    k = int(n_components)
    components = fix_signs(vt[:k].T).T
    variance = s ** 2 / (m - 1)
    return PCA(mean, components, variance[:k], float(variance.sum()))


def pca_transform(model: PCA, X) -> np.ndarray:
    """Proyección de las filas centradas sobre las componentes."""
    X = np.asarray(X, dtype=float)
    if X.ndim == 1:
        X = X[None, :]
    if X.ndim != 2 or X.shape[1] != model.mean.shape[0]:
        raise DimensionMismatch(("m", model.mean.shape[0]), X.shape, "los datos")
    return (X - model.mean) @ model.components.T
