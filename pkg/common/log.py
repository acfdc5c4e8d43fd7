import logging
import os

__all__ = ["setup_logging", "LOG_ENV_VAR"]

LOG_ENV_VAR = "GRAPHLET_LOG"
_FORMAT = "%(levelname)s %(name)s: %(message)s"


def setup_logging(level: str = None) -> int:
    """
    Configura el logging de la raíz según GRAPHLET_LOG (DEBUG, INFO, WARNING, ERROR).

    Solo la llama el CLI; las librerías únicamente piden su logger.
    Devuelve el nivel numérico aplicado.
    """
    name = (level or os.environ.get(LOG_ENV_VAR, "WARNING")).strip().upper()
    numeric = logging.getLevelName(name)
    if not isinstance(numeric, int):
        numeric = logging.WARNING
    logging.basicConfig(level=numeric, format=_FORMAT, force=True)
    return numeric
