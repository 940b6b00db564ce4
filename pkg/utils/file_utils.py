import csv
import hashlib
import io
import json
import logging
import subprocess
from dataclasses import dataclass, field
from datetime import datetime, timezone
from functools import lru_cache
from pathlib import Path
from typing import Any, Dict, Iterable, List, Optional, Sequence, TextIO

from jsonschema import Draft7Validator

import calculo
from calculo.erros import ChaosError

logger = logging.getLogger(__name__)

RAIZ = Path(__file__).resolve().parent.parent
SCHEMAS_DIR = RAIZ / "schemas"
FIXTURES_DIR = RAIZ / "fixtures" / "v1"
# parâmetros que não mudam o resultado, fora da identidade do manifesto
PARAMETROS_DE_EXECUCAO = ("threads", "no_cache")


def carregar_json(caminho: Path) -> Any:
    with open(caminho, "r", encoding="utf-8") as f:
        return json.load(f)


def salvar_json(caminho: Path, dados: Any) -> None:
    caminho = Path(caminho)
    caminho.parent.mkdir(parents=True, exist_ok=True)
    with open(caminho, "w", encoding="utf-8") as f:
        json.dump(dados, f, indent=2, ensure_ascii=False)
    logger.debug("[LOG] JSON salvo em %s", caminho)


def carregar_fixture(nome: str) -> Dict[str, Any]:
    return carregar_json(FIXTURES_DIR / f"{nome}.json")


@lru_cache(maxsize=None)
def _validador(nome_schema: str) -> Draft7Validator:
    return Draft7Validator(carregar_json(SCHEMAS_DIR / f"{nome_schema}.schema.json"))


def erros_schema(registro: Dict[str, Any], nome_schema: str) -> List[str]:
    return [e.message for e in _validador(nome_schema).iter_errors(registro)]


def validar_registro(registro: Dict[str, Any], nome_schema: str) -> None:
    erros = erros_schema(registro, nome_schema)
    if erros:
        raise ChaosError(f"Registro não confere com {nome_schema}: {erros[0]}", {"erros": erros})


def digest_bytes(dados: bytes) -> str:
    return hashlib.sha256(dados).hexdigest()


def digest_arquivo(caminho: Path) -> str:
    h = hashlib.sha256()
    with open(caminho, "rb") as f:
        for bloco in iter(lambda: f.read(1 << 20), b""):
            h.update(bloco)
    return h.hexdigest()


def json_canonico(dados: Any) -> str:
    return json.dumps(dados, sort_keys=True, ensure_ascii=False, separators=(",", ":"))


@lru_cache(maxsize=1)
def versao_ferramenta() -> str:
    """Versão do pacote mais o `git describe` quando houver repositório"""
    try:
        descricao = subprocess.run(
            ["git", "describe", "--tags", "--always", "--dirty"],
            cwd=RAIZ, capture_output=True, text=True, timeout=5, check=True,
        ).stdout.strip()
    except (OSError, subprocess.SubprocessError):
        descricao = ""
    return f"{calculo.__version__}+{descricao}" if descricao else calculo.__version__


def _agora() -> str:
    return datetime.now(timezone.utc).isoformat()


@dataclass
class RunManifest:
    """Eco de uma execução.

    O digest cobre só comando, parâmetros e versão. Horários, digests de
    arquivos e `PARAMETROS_DE_EXECUCAO` ficam no manifesto mas fora da
    identidade: a mesma conta em outra máquina tem o mesmo digest.
    """

    command: str
    parameters: Dict[str, Any]
    version: str = field(default_factory=versao_ferramenta)
    started_at: str = field(default_factory=_agora)
    finished_at: Optional[str] = None
    inputs: Dict[str, str] = field(default_factory=dict)
    outputs: Dict[str, str] = field(default_factory=dict)

    @property
    def digest(self) -> str:
        parametros = {k: v for k, v in self.parameters.items() if k not in PARAMETROS_DE_EXECUCAO}
        identidade = {"command": self.command, "parameters": parametros, "version": self.version}
        return digest_bytes(json_canonico(identidade).encode("utf-8"))

    def registrar_entrada(self, caminho: Path) -> None:
        self.inputs[str(caminho)] = digest_arquivo(caminho)

    def registrar_saida(self, caminho: Path) -> None:
        self.outputs[str(caminho)] = digest_arquivo(caminho)

    def finalizar(self) -> None:
        self.finished_at = _agora()

    def to_json(self) -> Dict[str, Any]:
        return {
            "command": self.command,
            "parameters": self.parameters,
            "version": self.version,
            "started_at": self.started_at,
            "finished_at": self.finished_at,
            "inputs": self.inputs,
            "outputs": self.outputs,
            "digest": self.digest,
        }

    def salvar(self, diretorio: Path) -> Path:
        self.finalizar()
        dados = self.to_json()
        validar_registro(dados, "run_manifest")
        caminho = Path(diretorio) / f"manifest-{self.digest[:16]}.json"
        salvar_json(caminho, dados)
        return caminho


def escrever_csv(destino: TextIO, cabecalho: Sequence[str], linhas: Iterable[Sequence[Any]],
                 manifest_digest: Optional[str] = None) -> None:
    """CSV com `,` e `.` decimal; floats em repr, independente de locale"""
    if manifest_digest:
        destino.write(f"# manifest: {manifest_digest}\n")
    escritor = csv.writer(destino, lineterminator="\n")
    escritor.writerow(cabecalho)
    for linha in linhas:
        escritor.writerow([repr(v) if isinstance(v, float) else v for v in linha])


def salvar_csv(caminho: Path, cabecalho: Sequence[str], linhas: Iterable[Sequence[Any]],
               manifest_digest: Optional[str] = None) -> None:
    caminho = Path(caminho)
    caminho.parent.mkdir(parents=True, exist_ok=True)
    with open(caminho, "w", encoding="utf-8", newline="") as f:
        escrever_csv(f, cabecalho, linhas, manifest_digest)
    logger.debug("[LOG] CSV salvo em %s", caminho)


def csv_como_texto(cabecalho: Sequence[str], linhas: Iterable[Sequence[Any]],
                   manifest_digest: Optional[str] = None) -> str:
    buffer = io.StringIO()
    escrever_csv(buffer, cabecalho, linhas, manifest_digest)
    return buffer.getvalue()


def ler_csv(caminho: Path) -> List[Dict[str, str]]:
    """Lê um CSV emitido por `escrever_csv`, ignorando a linha do manifesto"""
    with open(caminho, "r", encoding="utf-8", newline="") as f:
        linhas = [linha for linha in f if not linha.startswith("#")]
    return list(csv.DictReader(linhas))
