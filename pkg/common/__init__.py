from common import errors
from common.errors import *
from common.io import read_matrix, write_matrix, read_json, write_json
from common.log import setup_logging
from common.rng import GENERATOR_VERSION, derive_seed, generator, substreams

__all__ = errors.__all__ + [
    "read_matrix",
    "write_matrix",
    "read_json",
    "write_json",
    "setup_logging",
    "GENERATOR_VERSION",
    "derive_seed",
    "generator",
    "substreams",
]
