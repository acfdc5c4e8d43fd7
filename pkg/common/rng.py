import numpy as np

__all__ = ["GENERATOR_VERSION", "STREAMS", "generator", "substreams", "derive_seed"]

# PCG64 sembrado con SeedSequence. Cambiar la derivación implica cambiar la versión.
GENERATOR_VERSION = "pcg64-seedseq-v1"

# Orden fijo de los sub-streams de un dataset: agregar nuevos solo al final.
STREAMS = ("graph", "signals", "weights", "noise", "split")


def _check_seed(seed: int) -> int:
    seed = int(seed)
    if seed < 0 or seed >= 2 ** 64:
        raise ValueError(f"La semilla {seed} debe ser un entero de 64 bits no negativo.")
    return seed


def generator(seed) -> np.random.Generator:
    """Generador PCG64 para una semilla entera o un SeedSequence."""
    if isinstance(seed, np.random.SeedSequence):
        return np.random.Generator(np.random.PCG64(seed))
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(_check_seed(seed))))


def substreams(seed: int) -> dict:
    """
    Sub-streams con nombre derivados de una semilla: graph, signals, weights, noise, split.

    Cada uno es un SeedSequence hijo (spawn en el orden de STREAMS), así que agregar
    un consumidor nuevo no altera lo que generan los anteriores.
    """
    children = np.random.SeedSequence(_check_seed(seed)).spawn(len(STREAMS))
    return dict(zip(STREAMS, children))


def derive_seed(base_seed: int, index: int) -> int:
    """Semilla de 64 bits para el ensayo `index` de una corrida con semilla `base_seed`."""
    state = np.random.SeedSequence([_check_seed(base_seed), int(index)]).generate_state(1, dtype=np.uint64)
    return int(state[0])
