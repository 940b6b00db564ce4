import logging
import os
from pathlib import Path
from typing import Optional

from dotenv import load_dotenv

logger = logging.getLogger(__name__)

load_dotenv()

CACHE_DIR_PADRAO = ".chaos_cache"
ARQUIVO_MOMENTOS = "moments.jsonl"

cache_dir: Optional[Path] = None
conexao_disponivel = False


def inicializar_conexao(diretorio: Optional[str] = None) -> bool:
    """Resolve o diretório de cache (argumento, CHAOS_CACHE_DIR ou padrão) e testa escrita"""
    global cache_dir, conexao_disponivel

    caminho = Path(diretorio or os.getenv("CHAOS_CACHE_DIR", CACHE_DIR_PADRAO))
    try:
        caminho.mkdir(parents=True, exist_ok=True)
        if not os.access(caminho, os.W_OK):
            raise PermissionError(f"sem permissão de escrita em {caminho}")
        cache_dir = caminho
        conexao_disponivel = True
        logger.debug("[CACHE] diretório de cache: %s", caminho)
        return True
    except OSError as e:
        logger.warning("[AVISO] Cache não disponível: %s", str(e)[:100])
        logger.warning("[LOG] Sistema funcionará sem cache.")
        cache_dir = None
        conexao_disponivel = False
        return False


def verificar_conexao() -> bool:
    global conexao_disponivel
    if not conexao_disponivel:
        return False
    if cache_dir is None or not cache_dir.is_dir():
        logger.warning("[AVISO] Diretório de cache perdido.")
        conexao_disponivel = False
        return False
    return True


def caminho_cache(nome: str = ARQUIVO_MOMENTOS) -> Optional[Path]:
    if not verificar_conexao():
        return None
    return cache_dir / nome


inicializar_conexao()
