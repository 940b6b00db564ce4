import logging
import os
from pathlib import Path
from typing import Any, Dict, Optional

from dotenv import dotenv_values, load_dotenv

from calculo.erros import ParametroInvalidoError

logger = logging.getLogger(__name__)

load_dotenv()

PREFIXO = "CHAOS_"
ARQUIVO_PADRAO = "chaos.env"


def caminho_config(arquivo: Optional[str] = None) -> Path:
    return Path(arquivo or os.getenv("CHAOS_CONFIG", ARQUIVO_PADRAO))


def _sem_prefixo(valores: Dict[str, Optional[str]]) -> Dict[str, str]:
    return {
        chave[len(PREFIXO):].lower(): valor
        for chave, valor in valores.items()
        if chave.startswith(PREFIXO) and valor is not None
    }


def carregar_config(arquivo: Optional[str] = None) -> Dict[str, str]:
    """Valores padrão vindos do ambiente, sobrescritos pelo arquivo chave-valor"""
    valores = _sem_prefixo(dict(os.environ))
    caminho = caminho_config(arquivo)
    if caminho.exists():
        do_arquivo = _sem_prefixo(dotenv_values(caminho))
        logger.debug("[CONFIG] %d chaves lidas de %s", len(do_arquivo), caminho)
        valores.update(do_arquivo)
    elif arquivo:
        raise ParametroInvalidoError(f"Arquivo de configuração {caminho} não encontrado")
    return valores


def converter(valor: Any, esquema: Dict[str, Any]) -> Any:
    """Converte texto para o `type` declarado no JSON Schema do parâmetro"""
    if not isinstance(valor, str):
        return valor
    tipo = esquema.get("type")
    if isinstance(tipo, list):
        if valor.strip().lower() in ("none", "null", ""):
            return None
        tipo = next((t for t in tipo if t != "null"), None)
    try:
        if tipo == "integer":
            return int(valor)
        if tipo == "number":
            return float(valor)
        if tipo == "boolean":
            return valor.strip().lower() in ("1", "true", "sim", "yes", "on")
        if tipo == "array":
            itens = esquema.get("items", {})
            return [converter(parte.strip(), itens) for parte in valor.split(",") if parte.strip()]
    except ValueError as e:
        raise ParametroInvalidoError(f"Valor '{valor}' não é do tipo {tipo}: {e}") from e
    return valor


def resolver_parametros(flags: Dict[str, Any], esquema: Dict[str, Any],
                        config: Optional[Dict[str, str]] = None) -> Dict[str, Any]:
    """Precedência: flag > arquivo > ambiente > padrão do esquema"""
    config = carregar_config() if config is None else config
    resolvidos = {}
    for nome, propriedade in esquema.get("properties", {}).items():
        if flags.get(nome) is not None:
            resolvidos[nome] = converter(flags[nome], propriedade)
        elif nome in config:
            resolvidos[nome] = converter(config[nome], propriedade)
        elif "default" in propriedade:
            resolvidos[nome] = propriedade["default"]
    return resolvidos


def threads_padrao() -> int:
    return os.cpu_count() or 1
