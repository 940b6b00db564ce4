from abc import ABC, abstractmethod
from typing import Any, Dict, Optional

from calculo.erros import ChaosError


class BaseAgent(ABC):
    """Clase base abstrata para todos os agentes do sistema"""

    def __init__(self, nome: str, descricao: str):
        self.nome = nome
        self.descricao = descricao

    @abstractmethod
    def processar(self, *args, **kwargs) -> Dict[str, Any]:
        """Método principal para processar a requisição do agente"""
        pass

    @abstractmethod
    def get_tool_definition(self) -> Dict[str, Any]:
        """Retorna a definição da ferramenta: nome do comando e JSON Schema dos parâmetros"""
        pass

    @property
    def comando(self) -> str:
        return self.get_tool_definition()["function"]["name"]

    def parametros_schema(self) -> Dict[str, Any]:
        return self.get_tool_definition()["function"]["parameters"]

    def _definicao(self, nome: str, propriedades: Dict[str, Any], obrigatorios) -> Dict[str, Any]:
        return {
            "type": "function",
            "function": {
                "name": nome,
                "description": self.descricao,
                "parameters": {
                    "type": "object",
                    "properties": propriedades,
                    "required": list(obrigatorios),
                    "additionalProperties": False,
                },
            },
        }

    def sucesso(self, mensagem: str, resultado: Any, **extras) -> Dict[str, Any]:
        resposta = {"erro": False, "mensagem": mensagem, "resultado": resultado, "codigo": 0}
        resposta.update(extras)
        return resposta

    def falha(self, erro: Exception, resultado: Optional[Any] = None) -> Dict[str, Any]:
        codigo = erro.codigo_saida if isinstance(erro, ChaosError) else 1
        mensagem = erro.mensagem if isinstance(erro, ChaosError) else str(erro)
        detalhes = erro.detalhes if isinstance(erro, ChaosError) else {}
        return {"erro": True, "mensagem": mensagem, "resultado": resultado,
                "codigo": codigo, "detalhes": detalhes}
