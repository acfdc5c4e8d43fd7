import logging
from typing import Callable, Optional, Sequence

import numpy as np
from tabulate import tabulate

from common.errors import EmptyEvalPoints, InvalidInput, NonpositiveLambdaMax
from wavelets.kernels import DILATION_KERNELS, DilationKernel, KernelFamily

__all__ = ["KernelBank", "select_scales", "frame_bounds", "dilation_bank", "identity_bank", "MIN_LAMBDA_RATIO"]

logger = logging.getLogger(__name__)

# λ_min efectivo = λ_max / MIN_LAMBDA_RATIO
MIN_LAMBDA_RATIO = 20.0


class KernelBank:
    """
    Función de escala h más J kernels pasa-banda g_j, todos funciones de λ.

    spectrum_max es el λ_max con que se calibró el banco; evaluarlo sobre un
    espectro que lo supere no tiene sentido (ver build_frame).
    """

    def __init__(self, scaling: Callable, wavelets: Sequence[Callable], spectrum_max: float,
                 labels: Optional[Sequence[str]] = None, centers: Optional[Sequence[float]] = None,
                 family: Optional[KernelFamily] = None):
        self.scaling = scaling
        self.wavelets = tuple(wavelets)
        self.spectrum_max = float(spectrum_max)
        self.family = family
        if labels is None:
            labels = ["h"] + [f"g{j}" for j in range(1, len(self.wavelets) + 1)]
        if len(labels) != self.n_bands:
            raise InvalidInput(f"Hay {self.n_bands} bandas y {len(labels)} etiquetas.")
        self.labels = tuple(labels)
        self.centers = None if centers is None else tuple(float(c) for c in centers)

    @property
    def n_bands(self) -> int:
        """Cantidad total de bandas, función de escala incluida (J+1)."""
        return len(self.wavelets) + 1

    def kernels(self) -> tuple:
        return (self.scaling,) + self.wavelets

    def evaluate(self, lam) -> np.ndarray:
        """Matriz (J+1) × len(λ) con kernel_b(λ_k) en la fila b."""
        lam = np.atleast_1d(np.asarray(lam, dtype=float))
        rows = [np.broadcast_to(np.asarray(kernel(lam), dtype=float), lam.shape) for kernel in self.kernels()]
        return np.vstack(rows)

    def response_table(self, points) -> str:
        """Tabla con la respuesta de cada banda en los puntos dados y la suma de cuadrados."""
        points = np.atleast_1d(np.asarray(points, dtype=float))
        responses = self.evaluate(points)
        energy = (responses ** 2).sum(axis=0)
        header = ["λ"] + list(self.labels) + ["Σ²"]
        table = [[f"{p:.4g}"] + [f"{v:.4f}" for v in responses[:, i]] + [f"{energy[i]:.6f}"]
                 for i, p in enumerate(points)]
        return tabulate(table, header, tablefmt="fancy_grid")

    def __str__(self):
        family = self.family.value if self.family else "custom"
        return f"{self.__class__.__name__}<{family}, bandas={self.n_bands}, λ_max={self.spectrum_max:.4g}>"


def select_scales(lambda_max: float, J: int) -> np.ndarray:
    """
    J escalas logarítmicamente espaciadas, de 2/λ_min a 2/λ_max (decrecientes),
    con λ_min = λ_max / 20. Para J=1 la única escala es 2/λ_max.
    """
    if not np.isfinite(lambda_max) or lambda_max <= 0:
        raise NonpositiveLambdaMax(f"λ_max debe ser positivo, se recibió {lambda_max}.")
    if J < 1:
        raise InvalidInput(f"J debe ser al menos 1, se recibió {J}.")
    finest = 2.0 / lambda_max
    if J == 1:
        return np.array([finest])
    coarsest = 2.0 / (lambda_max / MIN_LAMBDA_RATIO)
    return np.geomspace(coarsest, finest, J)


def frame_bounds(bank: KernelBank, eval_points) -> tuple:
    """
    Cotas (A, B) del marco: mínimo y máximo de h(λ)² + Σ_j g_j(λ)² sobre los puntos.

    A > 0 indica que el banco es un marco sobre esos puntos; A == B, que es ajustado.
    """
    points = np.atleast_1d(np.asarray(eval_points, dtype=float))
    if points.size == 0:
        raise EmptyEvalPoints("No hay puntos para evaluar las cotas del marco.")
    energy = (bank.evaluate(points) ** 2).sum(axis=0)
    return float(energy.min()), float(energy.max())


class _Dilated:
    """g(s·λ). Con high_pass=True vale 1 pasado el pico de g (x ≥ 1)."""

    def __init__(self, kernel: DilationKernel, scale: float, high_pass: bool = False):
        self.kernel = kernel
        self.scale = float(scale)
        self.high_pass = high_pass

    def __call__(self, lam):
        x = self.scale * np.asarray(lam, dtype=float)
        values = self.kernel.band_pass(x)
        return np.where(x >= 1, 1.0, values) if self.high_pass else values


class _LowPass:
    def __init__(self, kernel: DilationKernel, coarsest_scale: float, lambda_min: float):
        self.kernel = kernel
        self.coarsest_scale = coarsest_scale
        self.lambda_min = lambda_min

    def __call__(self, lam):
        return self.kernel.low_pass(lam, self.coarsest_scale, self.lambda_min)


class _Constant:
    def __init__(self, value: float):
        self.value = float(value)

    def __call__(self, lam):
        return np.full(np.shape(lam), self.value)


def dilation_bank(family: KernelFamily, lambda_max: float, J: int) -> KernelBank:
    """Banco g(s_j λ), j = 1..J, con las escalas de select_scales y la h de la familia."""
    family = KernelFamily(family)
    if family not in DILATION_KERNELS:
        raise InvalidInput(f"La familia {family.value} no se construye por dilatación.")
    kernel = DILATION_KERNELS[family]()
    scales = select_scales(lambda_max, J)
    if kernel.compact_support and J > 1 and scales[0] / scales[1] > 4:
        # soporte [1/2, 2]: con escalas separadas por más de 4 quedan huecos sin cubrir
        logger.warning("Con J=%d las bandas de %s dejan huecos en el espectro (usar J ≥ 4).", J, family.value)
    scaling = _LowPass(kernel, scales[0], lambda_max / MIN_LAMBDA_RATIO)
    labels = ["h"] + [f"s={s:.4g}" for s in scales]
    # con soporte acotado, g(s_J·λ_max) = g(2) = 0: la última banda se extiende hasta λ_max
    wavelets = [_Dilated(kernel, s, high_pass=kernel.compact_support and j == len(scales) - 1)
                for j, s in enumerate(scales)]
    return KernelBank(scaling, wavelets, lambda_max, labels, family=family)


def identity_bank(lambda_max: float = np.inf) -> KernelBank:
    """Una sola banda constante igual a 1: la transformada devuelve la señal."""
    return KernelBank(_Constant(1.0), [], lambda_max, ["identity"])
