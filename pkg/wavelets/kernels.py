from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from common.errors import ConfigError, NegativeArgument

__all__ = [
    "KernelFamily",
    "KernelSpec",
    "cubic_spline_kernel",
    "meyer_kernel",
    "iterated_sine_kernel",
    "DilationKernel",
    "CubicSpline",
    "Meyer",
    "IteratedSine",
    "DILATION_KERNELS",
]


class KernelFamily(Enum):
    CUBIC_SPLINE = "cubic_spline"
    MEYER = "meyer"
    ITERATED_SINE = "iterated_sine"
    WARPED_TRANSLATE = "warped_translate"

    @property
    def label(self) -> str:
        return {
            KernelFamily.CUBIC_SPLINE: "Cubic Spline",
            KernelFamily.MEYER: "Meyer",
            KernelFamily.ITERATED_SINE: "Iterated Sine",
            KernelFamily.WARPED_TRANSLATE: "Warped Translate",
        }[self]


@dataclass(frozen=True)
class KernelSpec:
    """
    Familia de kernels, cantidad de bandas J (sin contar la función de escala) y parámetros.

    Parámetros reconocidos:
      - warped_translate: "coeffs" (a_0..a_K del coseno, por defecto Hann [1/2, 1/2]).
        J es la cantidad R de traslaciones: el banco tiene R+1 bandas.
      - cubic_spline, meyer, iterated_sine: no tienen parámetros.
    """
    family: KernelFamily
    n_bands: int = 4
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "family", KernelFamily(self.family))
        if isinstance(self.n_bands, bool) or not isinstance(self.n_bands, (int, np.integer)) or self.n_bands < 1:
            raise ConfigError("n_bands", f"debe ser un entero ≥ 1, se recibió {self.n_bands!r}")
        allowed = {"coeffs"} if self.family is KernelFamily.WARPED_TRANSLATE else set()
        unknown = set(self.params) - allowed
        if unknown:
            raise ConfigError(f"params.{sorted(unknown)[0]}", f"parámetro desconocido para {self.family.value}")

    @classmethod
    def from_dict(cls, entry) -> "KernelSpec":
        if isinstance(entry, str):
            entry = {"family": entry}
        unknown = set(entry) - {"family", "n_bands", "params"}
        if unknown:
            raise ConfigError(sorted(unknown)[0], "clave desconocida en la definición del kernel")
        try:
            family = KernelFamily(entry.get("family"))
        except ValueError:
            valid = ", ".join(f.value for f in KernelFamily)
            raise ConfigError("family", f"'{entry.get('family')}' no es una familia válida ({valid})") from None
        return cls(family, entry.get("n_bands", 4), dict(entry.get("params", {})))

    def to_dict(self) -> dict:
        return {"family": self.family.value, "n_bands": int(self.n_bands), "params": dict(self.params)}


def _nonnegative(x):
    values = np.asarray(x, dtype=float)
    if np.any(values < 0):
        raise NegativeArgument(f"Los kernels espectrales solo aceptan argumentos ≥ 0, se recibió {np.min(values)}.")
    return values


def _like_input(x, values: np.ndarray):
    return float(values) if np.ndim(x) == 0 else values


def cubic_spline_kernel(x):
    """
    Kernel pasa-banda de spline cúbica: x² en [0,1), s(x) = -5 + 11x - 6x² + x³ en
    [1,2] y 4/x² a partir de 2. Es continuo y vale 1 en x=1 y x=2.
    """
    values = _nonnegative(x)
    with np.errstate(divide="ignore"):
        out = np.where(values < 1, values ** 2,
                       np.where(values <= 2, -5 + 11 * values - 6 * values ** 2 + values ** 3,
                                4 / np.where(values > 2, values, 1.0) ** 2))
    return _like_input(x, out)


def _meyer_nu(t):
    t = np.clip(t, 0.0, 1.0)
    return t ** 4 * (35 - 84 * t + 70 * t ** 2 - 20 * t ** 3)


def meyer_kernel(x):
    """Ventana de Meyer con soporte [1/2, 2] y pico 1 en x=1."""
    values = _nonnegative(x)
    rising = np.sin(np.pi / 2 * _meyer_nu(2 * values - 1))
    falling = np.cos(np.pi / 2 * _meyer_nu(values - 1))
    out = np.where((values >= 0.5) & (values <= 1), rising, np.where((values > 1) & (values <= 2), falling, 0.0))
    return _like_input(x, out)


def _sine_window(t):
    """w(t) = sin((π/2)·sin²(πt/2)) para t en [0, 1]: sube de 0 a 1."""
    return np.sin(np.pi / 2 * np.sin(np.pi * np.clip(t, 0.0, 1.0) / 2) ** 2)


def iterated_sine_kernel(x):
    """
    Ventana de seno iterado sobre log₂(x): soporte [1/2, 2], pico 1 en x=1.

    En t = 1 - |log₂ x| vale w(t); los cuadrados de dos copias separadas por
    un factor 2 suman 1.
    """
    values = _nonnegative(x)
    inside = (values >= 0.5) & (values <= 2)
    with np.errstate(divide="ignore"):
        t = 1 - np.abs(np.log2(np.where(inside, values, 1.0)))
    out = np.where(inside, _sine_window(t), 0.0)
    return _like_input(x, out)


class DilationKernel(ABC):
    """
    Familia de kernels que se escala por dilatación: las bandas son g(s_j·λ).

    Cada familia define su pasa-banda g y la función de escala h que cubre las
    frecuencias bajas que la banda más gruesa deja sin cubrir.
    """

    family: KernelFamily
    # soporte acotado arriba: la banda más fina se cierra como pasa-altos
    compact_support: bool = False

    @abstractmethod
    def band_pass(self, x):
        """Kernel pasa-banda g(x), x ≥ 0."""
        pass

    @abstractmethod
    def low_pass(self, lam, coarsest_scale: float, lambda_min: float):
        """Función de escala h(λ) para la escala más gruesa s_1."""
        pass


class CubicSpline(DilationKernel):
    family = KernelFamily.CUBIC_SPLINE

    def band_pass(self, x):
        return cubic_spline_kernel(x)

    def low_pass(self, lam, coarsest_scale, lambda_min):
        # γ = máximo del pasa-banda, que se alcanza dentro de [1, 2]
        grid = np.linspace(1.0, 2.0, 10001)
        gamma = float(np.max(cubic_spline_kernel(grid)))
        lam = _nonnegative(lam)
        return gamma * np.exp(-(lam / (0.6 * lambda_min)) ** 4)


class Meyer(DilationKernel):
    family = KernelFamily.MEYER
    compact_support = True

    def band_pass(self, x):
        return meyer_kernel(x)

    def low_pass(self, lam, coarsest_scale, lambda_min):
        # complemento de la subida de la banda más gruesa: h² + g(s_1 λ)² = 1
        x = _nonnegative(lam) * coarsest_scale
        return np.where(x <= 0.5, 1.0, np.where(x <= 1, np.cos(np.pi / 2 * _meyer_nu(2 * x - 1)), 0.0))


class IteratedSine(DilationKernel):
    family = KernelFamily.ITERATED_SINE
    compact_support = True

    def band_pass(self, x):
        return iterated_sine_kernel(x)

    def low_pass(self, lam, coarsest_scale, lambda_min):
        x = _nonnegative(lam) * coarsest_scale
        inside = (x > 0.5) & (x <= 1)
        with np.errstate(divide="ignore"):
            t = 1 + np.log2(np.where(inside, x, 1.0))
        # cos((π/2)·sin²) es el complemento exacto de la subida w(t)
        rising_complement = np.cos(np.pi / 2 * np.sin(np.pi * np.clip(t, 0.0, 1.0) / 2) ** 2)
        return np.where(x <= 0.5, 1.0, np.where(inside, rising_complement, 0.0))


DILATION_KERNELS = {
    KernelFamily.CUBIC_SPLINE: CubicSpline,
    KernelFamily.MEYER: Meyer,
    KernelFamily.ITERATED_SINE: IteratedSine,
}
