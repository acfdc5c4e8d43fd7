import logging
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from common.errors import DegenerateSpectrum, InadmissibleCoefficients, InvalidInput, TooFewTranslates
from wavelets.bank import KernelBank
from wavelets.kernels import KernelFamily

__all__ = [
    "WarpingFunction",
    "empirical_cdf_warping",
    "cosine_window",
    "check_coefficients",
    "tight_bound",
    "warped_translate_bank",
    "HANN",
    "TIGHTNESS_TOL",
]

logger = logging.getLogger(__name__)

HANN = (0.5, 0.5)
TIGHTNESS_TOL = 1e-6
_GRID_POINTS = 10001


@dataclass(frozen=True)
class WarpingFunction:
    """
    Interpolante lineal por tramos ω: knots ascendentes → values en [0, 1].

    Vale 0 en el primer knot y 1 en el último; fuera de ese rango se satura.
    """
    knots: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        knots = np.array(self.knots, dtype=float, copy=True)
        values = np.array(self.values, dtype=float, copy=True)
        if knots.ndim != 1 or knots.shape != values.shape or knots.size < 2:
            raise InvalidInput(f"knots y values deben ser vectores de igual largo ≥ 2: {knots.shape}, {values.shape}.")
        if np.any(np.diff(knots) <= 0):
            raise InvalidInput("Los knots deben ser estrictamente crecientes.")
        if np.any(np.diff(values) < 0):
            raise InvalidInput("La función de warping debe ser no decreciente.")
        if values[0] != 0.0 or values[-1] != 1.0:
            raise InvalidInput(f"ω debe valer 0 en λ_min y 1 en λ_max, vale {values[0]} y {values[-1]}.")
        knots.setflags(write=False)
        values.setflags(write=False)
        object.__setattr__(self, "knots", knots)
        object.__setattr__(self, "values", values)

    def __call__(self, lam):
        out = np.interp(np.asarray(lam, dtype=float), self.knots, self.values)
        return float(out) if np.ndim(lam) == 0 else out

    def inverse(self, w):
        """Preimagen de w en [0, 1]. Los valores son estrictamente crecientes, así que está bien definida."""
        out = np.interp(np.asarray(w, dtype=float), self.values, self.knots)
        return float(out) if np.ndim(w) == 0 else out


def empirical_cdf_warping(eigenvalues, tol: float = 1e-10) -> WarpingFunction:
    """
    Función de distribución empírica de los autovalores como warping.

    Une (λ_(i), i/(n-1)). Los autovalores repetidos (a menos de `tol` relativo a
    max|λ|) se colapsan en un solo knot con el rango medio del grupo.
    """
    lam = np.sort(np.asarray(eigenvalues, dtype=float).ravel())
    if lam.size < 2:
        raise DegenerateSpectrum(f"Hacen falta al menos 2 autovalores, hay {lam.size}.")
    if not np.all(np.isfinite(lam)):
        raise InvalidInput("Hay autovalores no finitos.")
    ranks = np.arange(lam.size) / (lam.size - 1)
    gap = tol * max(1.0, float(np.abs(lam).max()))
    group = np.concatenate([[0], np.cumsum(np.diff(lam) > gap)])
    n_groups = int(group[-1]) + 1
    if n_groups < 2:
        raise DegenerateSpectrum(f"Todos los autovalores son iguales ({lam[0]}).")
    counts = np.bincount(group)
    knots = np.bincount(group, weights=lam) / counts
    values = np.bincount(group, weights=ranks) / counts
    # los extremos se fijan aunque el primer o último autovalor sea múltiple
    values[0], values[-1] = 0.0, 1.0
    logger.debug("Warping con %d knots a partir de %d autovalores", n_groups, lam.size)
    return WarpingFunction(knots, values)


def cosine_window(u, coeffs: Sequence[float] = HANN):
    """q(u) = Σ_k a_k cos(2πk(u - 1/2)) en [0, 1], recortada a valores ≥ 0 y nula afuera."""
    u = np.asarray(u, dtype=float)
    inside = (u >= 0) & (u <= 1)
    q = sum(a * np.cos(2 * np.pi * k * (u - 0.5)) for k, a in enumerate(coeffs))
    return np.where(inside, np.maximum(q, 0.0), 0.0)


def tight_bound(coeffs: Sequence[float] = HANN) -> float:
    """Constante del marco ajustado: (2K+1)·(a_0² + ½ Σ_{k≥1} a_k²). 9/8 para Hann."""
    coeffs = np.asarray(coeffs, dtype=float)
    return float((2 * coeffs.size - 1) * (coeffs[0] ** 2 + 0.5 * np.sum(coeffs[1:] ** 2)))


class _Translate:
    """
    Banda m del banco: q((ω(λ) - m/R)·R/(2K+1) + 1/2).

    Las bandas extremas acumulan la energía de todas las traslaciones que caen
    del mismo lado: la 0 las de m ≤ 0 y la R las de m ≥ R.
    """

    def __init__(self, warp: WarpingFunction, coeffs: tuple, m: int, R: int):
        self.warp = warp
        self.coeffs = coeffs
        self.m = m
        self.R = R
        overlap = 2 * len(coeffs) - 1
        if m == 0:
            self.shifts = tuple(range(-overlap, 1))
        elif m == R:
            self.shifts = tuple(range(R, R + overlap + 1))
        else:
            self.shifts = (m,)

    def at_warped(self, t):
        t = np.asarray(t, dtype=float)
        overlap = 2 * len(self.coeffs) - 1
        energy = sum(cosine_window((t - j / self.R) * self.R / overlap + 0.5, self.coeffs) ** 2 for j in self.shifts)
        return np.sqrt(energy)

    def __call__(self, lam):
        return self.at_warped(self.warp(np.asarray(lam, dtype=float)))


def check_coefficients(coeffs) -> tuple:
    """
    Valida los coeficientes del coseno: finitos, a_0 > 0 y ventana nula en los
    bordes (Σ (-1)^k a_k = 0). La ajustez se verifica aparte, sobre una grilla.
    """
    try:
        array = np.asarray(coeffs, dtype=float).ravel()
    except (TypeError, ValueError):
        raise InadmissibleCoefficients(f"Los coeficientes {coeffs!r} no son números.") from None
    if array.size < 2:
        raise InadmissibleCoefficients(f"Hacen falta al menos a_0 y a_1, se recibió {array.tolist()}.")
    if not np.all(np.isfinite(array)):
        raise InadmissibleCoefficients(f"Los coeficientes {array.tolist()} no son finitos.")
    if array[0] <= 0:
        raise InadmissibleCoefficients(f"a_0 debe ser positivo, es {array[0]}.")
    edge = float(np.sum(array * (-1.0) ** np.arange(array.size)))
    if abs(edge) > 1e-12 * np.abs(array).sum():
        raise InadmissibleCoefficients(
            f"La ventana no se anula en los bordes: Σ (-1)^k a_k = {edge:.3g} para {array.tolist()}."
        )
    return tuple(float(a) for a in array)


def warped_translate_bank(warp: WarpingFunction, R: int = 4, coeffs: Sequence[float] = HANN) -> KernelBank:
    """
    Banco de R+1 traslaciones de una ventana coseno, uniformes en la coordenada
    deformada ω(λ). La banda 0 cumple el rol de función de escala.

    Donde los autovalores se amontonan ω crece rápido, y las bandas quedan más
    angostas en λ. Si la suma de cuadrados no es constante en [0, 1] (B/A - 1 >
    TIGHTNESS_TOL) los coeficientes se rechazan.
    """
    if isinstance(R, bool) or int(R) != R or R < 2:
        raise TooFewTranslates(f"Hacen falta al menos 2 traslaciones, se pidieron {R}.")
    R = int(R)
    coeffs = check_coefficients(coeffs)
    bands = [_Translate(warp, coeffs, m, R) for m in range(R + 1)]

    grid = np.linspace(0.0, 1.0, _GRID_POINTS)
    energy = sum(band.at_warped(grid) ** 2 for band in bands)
    lower, upper = float(energy.min()), float(energy.max())
    if lower <= 0 or upper / lower - 1 > TIGHTNESS_TOL:
        raise InadmissibleCoefficients(
            f"Los coeficientes {list(coeffs)} no dan un marco ajustado: A={lower:.6g}, B={upper:.6g}."
        )
    logger.debug("Banco warped con R=%d, cota %.6g", R, upper)

    centers = warp.inverse(np.arange(R + 1) / R)
    labels = [f"m={m}" for m in range(R + 1)]
    return KernelBank(bands[0], bands[1:], float(warp.knots[-1]), labels, centers,
                      family=KernelFamily.WARPED_TRANSLATE)
