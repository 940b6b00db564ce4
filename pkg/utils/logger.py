import logging
import os
from typing import Optional

FORMATO = "%(asctime)s %(levelname)s %(name)s %(message)s"


def configurar_logging(debug: bool = False, nivel: Optional[str] = None) -> int:
    """Nível vem de CHAOS_LOG_LEVEL (padrão WARNING); --debug força DEBUG"""
    if debug:
        valor = logging.DEBUG
    else:
        nome = (nivel or os.getenv("CHAOS_LOG_LEVEL", "WARNING")).upper()
        valor = logging.getLevelName(nome)
        if not isinstance(valor, int):
            valor = logging.WARNING
    logging.basicConfig(level=valor, format=FORMATO, force=True)
    return valor
