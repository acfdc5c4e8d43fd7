from dataclasses import dataclass, field, fields
from pathlib import Path

from common.errors import ConfigError, GraphletError
from common.io import read_json
from graphs.core import LaplacianKind
from wavelets.kernels import KernelFamily, KernelSpec

__all__ = ["BenchmarkConfig", "default_kernels", "load_config", "MIN_TRAIN"]

# select_k_best necesita 3 muestras de entrenamiento; el test, 2 para R² y Pearson
MIN_TRAIN = 3


def default_kernels() -> list:
    return [KernelSpec(family) for family in (
        KernelFamily.WARPED_TRANSLATE, KernelFamily.CUBIC_SPLINE, KernelFamily.MEYER, KernelFamily.ITERATED_SINE,
    )]


def _integer(key, value, low, high=None):
    if isinstance(value, bool) or not isinstance(value, int):
        raise ConfigError(key, f"debe ser un entero, se recibió {value!r}")
    if value < low or (high is not None and value > high):
        bound = f"≥ {low}" if high is None else f"entre {low} y {high}"
        raise ConfigError(key, f"debe ser {bound}, se recibió {value}")
    return value


def _real(key, value, low, high, open_low=False, open_high=False):
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(key, f"debe ser un número, se recibió {value!r}")
    value = float(value)
    too_low = value <= low if open_low else value < low
    too_high = high is not None and (value >= high if open_high else value > high)
    if too_low or too_high:
        interval = f"{'(' if open_low else '['}{low}, {high if high is not None else '∞'}{')' if open_high or high is None else ']'}"
        raise ConfigError(key, f"debe estar en {interval}, se recibió {value}")
    return value


def _flag(key, value):
    if not isinstance(value, bool):
        raise ConfigError(key, f"debe ser true o false, se recibió {value!r}")
    return value


@dataclass(frozen=True)
class BenchmarkConfig:
    """
    Parámetros del benchmark sintético. Los valores por defecto corresponden a
    la escala completa: 500 ensayos con grafos de 500 nodos.
    """
    nodes: int = 500
    samples: int = 200
    trials: int = 500
    edge_prob: float = 0.1
    noise_sigma: float = 0.1
    seed: int = 0
    kernels: tuple = field(default_factory=lambda: tuple(default_kernels()))
    k_best: int = 100
    split_ratio: float = 0.7
    halved_diffusion: bool = False
    diffusion_steps: int = 1
    laplacian: str = "combinatorial"
    augment: bool = False
    output_dir: str = "results"

    def __post_init__(self):
        _integer("nodes", self.nodes, 2)
        _integer("samples", self.samples, MIN_TRAIN + 2)
        _integer("trials", self.trials, 1)
        object.__setattr__(self, "edge_prob", _real("edge_prob", self.edge_prob, 0.0, 1.0))
        object.__setattr__(self, "noise_sigma", _real("noise_sigma", self.noise_sigma, 0.0, None))
        _integer("seed", self.seed, 0, 2 ** 64 - 1)
        _integer("k_best", self.k_best, 1)
        object.__setattr__(self, "split_ratio", _real("split_ratio", self.split_ratio, 0.0, 1.0, open_low=True, open_high=True))
        _flag("halved_diffusion", self.halved_diffusion)
        _integer("diffusion_steps", self.diffusion_steps, 1)
        _flag("augment", self.augment)
        if self.laplacian not in {kind.value for kind in LaplacianKind}:
            raise ConfigError("laplacian", f"'{self.laplacian}' no es combinatorial ni normalized")
        if not isinstance(self.output_dir, str) or not self.output_dir:
            raise ConfigError("output_dir", "debe ser una ruta no vacía")
        if not self.kernels:
            raise ConfigError("kernels", "hace falta al menos un kernel")
        kernels = []
        for i, entry in enumerate(self.kernels):
            if isinstance(entry, KernelSpec):
                kernels.append(entry)
                continue
            try:
                kernels.append(KernelSpec.from_dict(entry))
            except ConfigError as exc:
                raise ConfigError(f"kernels[{i}].{exc.key}", exc.message) from None
            except (GraphletError, TypeError, AttributeError) as exc:
                raise ConfigError(f"kernels[{i}]", str(exc)) from None
        object.__setattr__(self, "kernels", tuple(kernels))

    @classmethod
    def from_dict(cls, data: dict) -> "BenchmarkConfig":
        """Valida un diccionario (típicamente leído de JSON); las claves faltantes toman su valor por defecto."""
        if not isinstance(data, dict):
            raise ConfigError("<raíz>", "la configuración debe ser un objeto JSON")
        known = {f.name for f in fields(cls)}
        unknown = sorted(set(data) - known)
        if unknown:
            raise ConfigError(unknown[0], f"clave desconocida (válidas: {', '.join(sorted(known))})")
        data = dict(data)
        if "kernels" in data:
            if not isinstance(data["kernels"], list):
                raise ConfigError("kernels", "debe ser una lista")
            data["kernels"] = tuple(data["kernels"])
        return cls(**data)

    def with_overrides(self, **overrides) -> "BenchmarkConfig":
        """Copia con algunos campos reemplazados (los None se ignoran)."""
        merged = self.to_dict()
        merged.update({key: value for key, value in overrides.items() if value is not None})
        return BenchmarkConfig.from_dict(merged)

    def to_dict(self) -> dict:
        """Configuración completa, con los valores por defecto ya resueltos."""
        out = {}
        for f in fields(self):
            value = getattr(self, f.name)
            out[f.name] = [k.to_dict() for k in value] if f.name == "kernels" else value
        return out


def load_config(path) -> BenchmarkConfig:
    path = Path(path)
    if not path.is_file():
        raise ConfigError("config", f"no existe el archivo {path}")
    try:
        data = read_json(path)
    except ValueError as exc:
        raise ConfigError("config", f"{path} no es JSON válido: {exc}") from None
    return BenchmarkConfig.from_dict(data)
