import logging
from typing import Any, Dict, Optional

from agentes import (AsymptoticAgent, JointAgent, MixedAgent, MomentAgent, OracleAgent,
                     SimulateAgent, VerifyAgent)
from calculo.erros import ChaosError
from utils.cache_manager import CacheManager
from utils.config import resolver_parametros
from utils.guardrails import GuardRailsManager

logger = logging.getLogger(__name__)

CODIGO_PARAMETRO_INVALIDO = 2
CODIGO_INESPERADO = 1


class Orquestrador:
    """Roteia um comando: resolve parâmetros, aplica guardrails e entrega ao agente"""

    def __init__(self, debug: bool = False, cache: Optional[CacheManager] = None):
        self.guardrails_manager = GuardRailsManager(debug)
        momentos = MomentAgent(cache)
        agentes = [momentos, AsymptoticAgent(momentos), JointAgent(momentos), MixedAgent(),
                   SimulateAgent(), OracleAgent(), VerifyAgent()]
        self.agentes = {agente.comando: agente for agente in agentes}

    def _bloqueio(self, mensagem: str, detalhes: Dict[str, Any]) -> Dict[str, Any]:
        return {"erro": True, "mensagem": mensagem, "resultado": None,
                "codigo": CODIGO_PARAMETRO_INVALIDO, "detalhes": detalhes}

    def executar_comando(self, comando: str, flags: Dict[str, Any],
                         config: Optional[Dict[str, str]] = None) -> Dict[str, Any]:
        """Executa um comando com guardrails de entrada e de saída"""
        agente = self.agentes.get(comando)
        if agente is None:
            return self._bloqueio(f"Comando desconhecido: {comando}", {"comandos": sorted(self.agentes)})

        esquema = agente.parametros_schema()
        try:
            params = resolver_parametros(flags, esquema, config)
        except ChaosError as e:
            return self._bloqueio(e.mensagem, e.detalhes)

        logger.info("[GUARDRAILS] Verificando parâmetros de %s", comando)
        bloqueado, mensagem_erro, detalhes = self.guardrails_manager.aplicar_guardrails_entrada(
            params, {"parameters": esquema})
        if bloqueado:
            logger.warning("[GUARDRAIL] Comando %s bloqueado: %s", comando, mensagem_erro)
            return self._bloqueio(mensagem_erro, detalhes)

        logger.info("[MAIN] %s processando %s", agente.nome, params)
        try:
            resposta = agente.processar(**params)
        except Exception as e:
            logger.exception("[ERRO] Erro inesperado em %s", agente.nome)
            return {"erro": True, "mensagem": f"Erro inesperado: {e}", "resultado": None,
                    "codigo": CODIGO_INESPERADO}

        if not resposta["erro"] and comando == "moment":
            bloqueado, mensagem_erro, detalhes = self.guardrails_manager.aplicar_guardrails_saida(
                {"registro": resposta["resultado"]})
            if bloqueado:
                return {"erro": True, "mensagem": mensagem_erro, "resultado": resposta["resultado"],
                        "codigo": CODIGO_INESPERADO, "detalhes": detalhes}

        resposta["agente"] = agente.nome
        resposta["parametros"] = params
        return resposta
