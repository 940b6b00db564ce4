import logging
from typing import Any, Dict, List, Optional, Tuple

from jsonschema import Draft7Validator

from calculo.gmc_sim import MARGEM_MOLIFICACAO, MIN_AMOSTRAS_ESTIMATIVA
from utils.file_utils import erros_schema

logger = logging.getLogger(__name__)


class GuardrailResult:
    def __init__(self, passed: bool, message: str = "", details: Optional[Dict] = None):
        self.passed = passed
        self.message = message
        self.details = details or {}
        self.tripwire_triggered = not passed


class InputGuardrail:
    def __init__(self, name: str, debug: bool = False):
        self.name = name
        self.debug = debug

    def validate(self, params: Dict[str, Any], contexto: Optional[Dict] = None) -> GuardrailResult:
        """Valida os parâmetros de um comando - deve ser implementado pelas subclasses"""
        raise NotImplementedError("Subclasses devem implementar validate()")


class OutputGuardrail:
    def __init__(self, name: str, debug: bool = False):
        self.name = name
        self.debug = debug

    def validate(self, resultado: Dict[str, Any], contexto: Optional[Dict] = None) -> GuardrailResult:
        """Valida o resultado de um comando - deve ser implementado pelas subclasses"""
        raise NotImplementedError("Subclasses devem implementar validate()")


class SchemaInputGuardrail(InputGuardrail):
    """Confere os parâmetros contra o JSON Schema da definição de ferramenta do agente"""

    def __init__(self, debug: bool = False):
        super().__init__("schema", debug)

    def validate(self, params: Dict[str, Any], contexto: Optional[Dict] = None) -> GuardrailResult:
        esquema = (contexto or {}).get("parameters")
        if not esquema:
            return GuardrailResult(passed=True, message="Comando sem esquema declarado")
        erros = sorted(Draft7Validator(esquema).iter_errors(params), key=lambda e: list(e.path))
        if erros:
            campo = ".".join(str(p) for p in erros[0].path) or "(raiz)"
            return GuardrailResult(
                passed=False,
                message=f"Parâmetro inválido em {campo}: {erros[0].message}",
                details={"erros": [e.message for e in erros]},
            )
        return GuardrailResult(passed=True, message="Parâmetros conferem com o esquema")


class BetaRangeInputGuardrail(InputGuardrail):
    """0 < β < 1: fase subcrítica do caos imaginário; γ = β²/2 é derivado"""

    def __init__(self, debug: bool = False):
        super().__init__("beta_range", debug)

    def validate(self, params: Dict[str, Any], contexto: Optional[Dict] = None) -> GuardrailResult:
        if "beta" not in params:
            return GuardrailResult(passed=True, message="Comando sem β")
        beta = params["beta"]
        if not isinstance(beta, (int, float)) or not 0 < beta < 1:
            return GuardrailResult(
                passed=False,
                message=f"β = {beta} fora da fase subcrítica imaginária 0 < β < 1",
                details={"beta": beta},
            )
        return GuardrailResult(passed=True, message="β na fase subcrítica",
                               details={"gamma": beta * beta / 2.0})


class SimConfigInputGuardrail(InputGuardrail):
    """Grade potência de dois, G ≥ 8K, índices até K/16 e amostras suficientes"""

    def __init__(self, debug: bool = False):
        super().__init__("sim_config", debug)

    def validate(self, params: Dict[str, Any], contexto: Optional[Dict] = None) -> GuardrailResult:
        if "K" not in params or "grid" not in params:
            return GuardrailResult(passed=True, message="Comando sem simulação")
        K, G = params["K"], params["grid"]
        problemas = []
        if G < 2 or G & (G - 1):
            problemas.append(f"grade G = {G} não é potência de dois")
        if G < 8 * K:
            problemas.append(f"grade G = {G} abaixo de 8K = {8 * K}")
        limite = K // MARGEM_MOLIFICACAO
        fora = [n for n in params.get("n", []) if abs(n) > limite]
        if fora:
            problemas.append(f"índices {fora} acima de K/{MARGEM_MOLIFICACAO} = {limite}")
        if params.get("estimate", True) and params.get("samples", 0) < MIN_AMOSTRAS_ESTIMATIVA:
            problemas.append(f"estimativas exigem ao menos {MIN_AMOSTRAS_ESTIMATIVA} amostras")
        if problemas:
            return GuardrailResult(passed=False, message="; ".join(problemas),
                                   details={"problemas": problemas})
        return GuardrailResult(passed=True, message="Configuração de simulação válida")


class MixedExponentsInputGuardrail(InputGuardrail):
    def __init__(self, debug: bool = False):
        super().__init__("mixed_exponents", debug)

    def validate(self, params: Dict[str, Any], contexto: Optional[Dict] = None) -> GuardrailResult:
        if "l" not in params or "m" not in params:
            return GuardrailResult(passed=True, message="Comando sem expoentes mistos")
        l, m = params["l"], params["m"]
        if len(l) != len(m):
            return GuardrailResult(passed=False,
                                   message=f"ℓ e m com comprimentos diferentes: {len(l)} e {len(m)}")
        if not any(l) and not any(m):
            return GuardrailResult(passed=False, message="Ao menos um expoente deve ser não nulo")
        return GuardrailResult(passed=True, message="Expoentes mistos válidos")


class MomentRecordOutputGuardrail(OutputGuardrail):
    """Registros de momento emitidos precisam validar contra moment_result.schema.json"""

    def __init__(self, debug: bool = False):
        super().__init__("moment_record", debug)

    def validate(self, resultado: Dict[str, Any], contexto: Optional[Dict] = None) -> GuardrailResult:
        registro = resultado.get("registro") if isinstance(resultado, dict) else None
        if registro is None:
            return GuardrailResult(passed=True, message="Resultado sem registro de momento")
        erros = erros_schema(registro, "moment_result")
        if erros:
            return GuardrailResult(passed=False, message=f"Registro fora do esquema: {erros[0]}",
                                   details={"erros": erros})
        return GuardrailResult(passed=True, message="Registro confere com o esquema")


class GuardRailsManager:
    def __init__(self, debug: bool = False):
        self.debug = debug

        self.input_guardrails: List[InputGuardrail] = [
            SchemaInputGuardrail(debug),
            BetaRangeInputGuardrail(debug),
            SimConfigInputGuardrail(debug),
            MixedExponentsInputGuardrail(debug),
        ]

        self.output_guardrails: List[OutputGuardrail] = [
            MomentRecordOutputGuardrail(debug),
        ]

    def _aplicar(self, guardrails, valor, contexto, lado: str) -> Tuple[bool, str, Dict[str, Any]]:
        all_details = {}

        for guardrail in guardrails:
            try:
                resultado = guardrail.validate(valor, contexto)
            except Exception as e:
                # parâmetros que derrubam a validação não seguem adiante
                logger.error("[ERRO] Erro ao executar guardrail %s: %s", guardrail.name, e)
                all_details[guardrail.name] = {
                    "passed": False,
                    "message": f"Erro no guardrail: {e}",
                    "details": {},
                }
                return True, f"Erro no guardrail {guardrail.name}: {e}", all_details

            all_details[guardrail.name] = {
                "passed": resultado.passed,
                "message": resultado.message,
                "details": resultado.details,
            }

            if resultado.tripwire_triggered:
                logger.info("[GUARDRAIL] %s bloqueou %s: %s", guardrail.name, lado, resultado.message)
                return True, resultado.message, all_details

        return False, "", all_details

    def aplicar_guardrails_entrada(self, params: Dict[str, Any],
                                   contexto: Optional[Dict] = None) -> Tuple[bool, str, Dict[str, Any]]:
        """
        Aplica todos os guardrails de entrada

        Returns:
            Tuple: (bloqueado, mensagem_erro, detalhes)
        """
        return self._aplicar(self.input_guardrails, params, contexto, "entrada")

    def aplicar_guardrails_saida(self, resultado: Dict[str, Any],
                                 contexto: Optional[Dict] = None) -> Tuple[bool, str, Dict[str, Any]]:
        return self._aplicar(self.output_guardrails, resultado, contexto, "saída")
