import logging
from dataclasses import dataclass

import numpy as np

from common.errors import DimensionMismatch, InvalidInput, NotTight, SpectrumExceedsCalibration
from graphs.core import Spectrum, gft
from wavelets.bank import KernelBank
from wavelets.warping import TIGHTNESS_TOL

__all__ = [
    "WaveletFrame",
    "WaveletCoefficients",
    "build_frame",
    "analyze",
    "extract_features",
    "feature_layout",
    "synthesize_tight",
]

logger = logging.getLogger(__name__)

RAW_BAND = "raw"


@dataclass(frozen=True)
class WaveletFrame:
    """
    Banco de kernels evaluado en los autovalores de un espectro.

    band_multipliers[b, k] = kernel_b(λ_k); la fila 0 es la función de escala.
    """
    spectrum: Spectrum
    band_multipliers: np.ndarray
    band_labels: tuple

    @property
    def n_bands(self) -> int:
        return self.band_multipliers.shape[0]

    @property
    def n_nodes(self) -> int:
        return self.spectrum.n_nodes

    def bounds(self) -> tuple:
        """Cotas (A, B) del marco sobre los autovalores del espectro."""
        energy = (self.band_multipliers ** 2).sum(axis=0)
        return float(energy.min()), float(energy.max())

    def is_tight(self, tol: float = TIGHTNESS_TOL) -> bool:
        lower, upper = self.bounds()
        return lower > 0 and upper / lower - 1 <= tol


@dataclass(frozen=True)
class WaveletCoefficients:
    """Coeficientes (J+1) × n de una señal: fila b, nodo a."""
    coefficients: np.ndarray
    band_labels: tuple

    def band(self, label: str) -> np.ndarray:
        return self.coefficients[self.band_labels.index(label)]

    def energy(self) -> float:
        return float(np.sum(self.coefficients ** 2))


def build_frame(s: Spectrum, bank: KernelBank) -> WaveletFrame:
    """
    Evalúa cada kernel del banco en los autovalores de s.

    Los autovalores apenas negativos por redondeo se evalúan en 0.
    """
    lambda_max = s.lambda_max
    if lambda_max > bank.spectrum_max * (1 + 1e-9) + 1e-12:
        raise SpectrumExceedsCalibration(
            f"El espectro llega a λ={lambda_max:.6g} y el banco se calibró hasta {bank.spectrum_max:.6g}."
        )
    multipliers = bank.evaluate(np.maximum(s.eigenvalues, 0.0))
    if not np.all(np.isfinite(multipliers)) or np.any(multipliers < 0):
        raise InvalidInput("Algún kernel del banco no es finito o es negativo en el espectro.")
    multipliers.setflags(write=False)
    return WaveletFrame(s, multipliers, bank.labels)


def _analyze_rows(frame: WaveletFrame, signals: np.ndarray) -> np.ndarray:
    # (m, n) -> (m, J+1, n): igft(multiplicador_b ⊙ gft(f)) para cada banda
    fhat = gft(frame.spectrum, signals)
    return (frame.band_multipliers[None, :, :] * fhat[:, None, :]) @ frame.spectrum.eigenvectors.T


def analyze(frame: WaveletFrame, f) -> WaveletCoefficients:
    """
    Transformada SGWT de una señal: coeficiente (b, a) = Σ_k kernel_b(λ_k)·f̂_k·u_k(a).

    Es el producto interno de f con el átomo de la banda b centrado en el nodo a,
    calculado en el dominio espectral.
    """
    f = np.asarray(f, dtype=float)
    if f.shape != (frame.n_nodes,):
        raise DimensionMismatch((frame.n_nodes,), f.shape)
    return WaveletCoefficients(_analyze_rows(frame, f[None, :])[0], frame.band_labels)


def extract_features(frame: WaveletFrame, signals, augment: bool = False) -> np.ndarray:
    """
    Matriz de features m × ((J+1)·n), una fila por señal.

    El orden es por banda: banda 0 nodos 0..n-1, luego banda 1, etc.
    Con augment=True se agregan al final las señales originales.
    """
    signals = np.asarray(signals, dtype=float)
    if signals.ndim == 1:
        signals = signals[None, :]
    if signals.ndim != 2 or signals.shape[1] != frame.n_nodes:
        raise DimensionMismatch(("m", frame.n_nodes), signals.shape, "las señales")
    m = signals.shape[0]
    features = _analyze_rows(frame, signals).reshape(m, frame.n_bands * frame.n_nodes)
    if augment:
        features = np.hstack([features, signals])
    return features


def feature_layout(frame: WaveletFrame, augment: bool = False) -> list:
    """(banda, nodo) de cada columna de extract_features, en el mismo orden."""
    layout = [
        {"column": b * frame.n_nodes + a, "band": label, "band_index": b, "node": a}
        for b, label in enumerate(frame.band_labels)
        for a in range(frame.n_nodes)
    ]
    if augment:
        offset = frame.n_bands * frame.n_nodes
        layout += [{"column": offset + a, "band": RAW_BAND, "band_index": None, "node": a}
                   for a in range(frame.n_nodes)]
    return layout


def synthesize_tight(frame: WaveletFrame, c) -> np.ndarray:
    """
    Reconstrucción para marcos ajustados: f = (1/A)·Σ_b igft(kernel_b ⊙ gft(c_b)).

    Si el marco no es ajustado en los autovalores lanza NotTight: hace falta
    resolver mínimos cuadrados con el marco dual.
    """
    coefficients = c.coefficients if isinstance(c, WaveletCoefficients) else np.asarray(c, dtype=float)
    expected = (frame.n_bands, frame.n_nodes)
    if coefficients.shape != expected:
        raise DimensionMismatch(expected, coefficients.shape, "los coeficientes")
    lower, upper = frame.bounds()
    if lower <= 0 or upper / lower - 1 > TIGHTNESS_TOL:
        raise NotTight(lower, upper, TIGHTNESS_TOL)
    U = frame.spectrum.eigenvectors
    chat = coefficients @ U
    return ((frame.band_multipliers * chat).sum(axis=0) @ U.T) / lower
