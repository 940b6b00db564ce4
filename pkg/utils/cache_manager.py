import json
import logging
from pathlib import Path
from typing import Any, Dict, Iterator, Optional, Tuple

import db
from utils.file_utils import validar_registro

logger = logging.getLogger(__name__)

CAMPOS_CHAVE = ("beta", "N", "n", "tol", "mode", "lambda_max")


class CacheManager:
    """Cache append-only em JSON-lines dos registros de momento.

    A chave é (beta, N, n, tol, mode, lambda_max); um acerto devolve o registro
    gravado sem alteração, e floats voltam bit a bit pelo repr do JSON.
    """

    def __init__(self, arquivo: Optional[Path] = None, habilitado: bool = True):
        self.arquivo = arquivo
        self.habilitado = habilitado

    def _caminho(self) -> Optional[Path]:
        if not self.habilitado:
            return None
        return self.arquivo if self.arquivo is not None else db.caminho_cache()

    @staticmethod
    def chave(registro: Dict[str, Any]) -> Tuple:
        return tuple(registro.get(campo) for campo in CAMPOS_CHAVE)

    def _registros(self) -> Iterator[Dict[str, Any]]:
        caminho = self._caminho()
        if caminho is None or not caminho.exists():
            return
        with open(caminho, "r", encoding="utf-8") as f:
            for numero, linha in enumerate(f, start=1):
                linha = linha.strip()
                if not linha:
                    continue
                try:
                    yield json.loads(linha)
                except json.JSONDecodeError:
                    logger.warning("[CACHE] linha %d corrompida em %s ignorada", numero, caminho)

    def buscar(self, consulta: Dict[str, Any]) -> Optional[Dict[str, Any]]:
        alvo = self.chave(consulta)
        encontrado = None
        for registro in self._registros():
            if self.chave(registro) == alvo:
                encontrado = registro
        if encontrado is not None:
            logger.info("[CACHE] acerto para %s", dict(zip(CAMPOS_CHAVE, alvo)))
        return encontrado

    def gravar(self, registro: Dict[str, Any]) -> bool:
        caminho = self._caminho()
        if caminho is None:
            return False
        validar_registro(registro, "moment_result")
        caminho.parent.mkdir(parents=True, exist_ok=True)
        with open(caminho, "a", encoding="utf-8") as f:
            f.write(json.dumps(registro, ensure_ascii=False, sort_keys=True) + "\n")
        logger.info("[CACHE] registro gravado em %s", caminho)
        return True

    def obter_estatisticas(self) -> Dict[str, Any]:
        total, chaves = 0, set()
        for registro in self._registros():
            total += 1
            chaves.add(self.chave(registro))
        return {
            "arquivo": str(self._caminho()),
            "habilitado": self.habilitado,
            "total_registros": total,
            "chaves_distintas": len(chaves),
        }
