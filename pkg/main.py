import argparse
import json
import logging
import sys
from pathlib import Path
from typing import Any, Dict, List, Optional

from calculo.moments import MODOS
from calculo.oracle import GRAU_MAXIMO
from orquestrador import Orquestrador
from utils.cache_manager import CacheManager
from utils.config import carregar_config
from utils.file_utils import RunManifest, csv_como_texto, salvar_csv, salvar_json
from utils.logger import configurar_logging

logger = logging.getLogger(__name__)

CHAVES_INTERNAS = ("tabela", "amostras")


def _comum(parser: argparse.ArgumentParser) -> None:
    saida = parser.add_mutually_exclusive_group()
    saida.add_argument("--json", action="store_true", help="imprime o resultado em JSON")
    saida.add_argument("--csv", action="store_true", help="imprime a tabela em CSV")
    parser.add_argument("--output", help="diretório para gravar JSON, CSV e manifesto")
    parser.add_argument("--config", help="arquivo chave-valor com padrões (CHAOS_*)")
    parser.add_argument("--debug", action="store_true")


def criar_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="chaos",
        description="Momentos de Fourier do caos multiplicativo gaussiano imaginário",
    )
    sub = parser.add_subparsers(dest="comando", required=True)

    p = sub.add_parser("moment", help="E|c_n|^{2N} pela série exata")
    p.add_argument("--beta", type=float, required=True)
    p.add_argument("--N", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--tol", type=float)
    p.add_argument("--lambda-max", dest="lambda_max", type=int)
    p.add_argument("--mode", choices=MODOS)
    p.add_argument("--lambda-ceiling", dest="lambda_ceiling", type=int)
    p.add_argument("--no-cache", dest="no_cache", action="store_true", default=None)
    _comum(p)

    p = sub.add_parser("asymptotic", help="tabela n, exato, assintótico, razão")
    p.add_argument("--beta", type=float, required=True)
    p.add_argument("--N", type=int, required=True)
    p.add_argument("--n-grid", dest="n_grid", help="'a:b' diádico ou lista 'n1,n2,...'")
    p.add_argument("--tol", type=float)
    p.add_argument("--no-cache", dest="no_cache", action="store_true", default=None)
    _comum(p)

    p = sub.add_parser("joint", help="momento conjunto de c_n e c_{n+1}")
    p.add_argument("--beta", type=float, required=True)
    p.add_argument("--N0", type=int, required=True)
    p.add_argument("--N1", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--lambda-max", dest="lambda_max", type=int)
    p.add_argument("--threads", type=int)
    p.add_argument("--no-cache", dest="no_cache", action="store_true", default=None)
    _comum(p)

    p = sub.add_parser("mixed", help="regra de seleção dos momentos mistos")
    p.add_argument("--beta", type=float)
    p.add_argument("--l", required=True, help="expoentes de c, ex.: 2,0")
    p.add_argument("--m", required=True, help="expoentes de c̄, ex.: 0,2")
    p.add_argument("--n", type=int)
    _comum(p)

    p = sub.add_parser("simulate", help="simulação Monte Carlo")
    p.add_argument("--beta", type=float, required=True)
    p.add_argument("--K", type=int, required=True)
    p.add_argument("--grid", type=int, required=True)
    p.add_argument("--samples", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--n", required=True, help="índices separados por vírgula")
    p.add_argument("--threads", type=int)
    p.add_argument("--batches", type=int)
    p.add_argument("--no-estimate", dest="estimate", action="store_false", default=None)
    _comum(p)

    p = sub.add_parser("oracle", help="oráculos independentes")
    p.add_argument("kind", choices=("n1", "n2", "dyson", "remark", "jack", "pieri", "orthogonality"))
    p.add_argument("--gamma", type=float, required=True)
    p.add_argument("--n", type=int)
    p.add_argument("--tol", type=float)
    p.add_argument("--N", type=int)
    p.add_argument("--p", type=int)
    p.add_argument("--mu", help=f"partição, ex.: 2,1 (grau até {GRAU_MAXIMO})")
    p.add_argument("--lam")
    p.add_argument("--nu")
    _comum(p)

    p = sub.add_parser("verify", help="critérios de aceitação")
    p.add_argument("--suite", choices=("fast", "full"))
    p.add_argument("--only", help="ids de critérios separados por vírgula")
    p.add_argument("--threads", type=int)
    _comum(p)

    return parser


def _flags(args: argparse.Namespace) -> Dict[str, Any]:
    ignorados = {"comando", "json", "csv", "output", "config", "debug"}
    return {k: v for k, v in vars(args).items() if k not in ignorados}


def _publico(resposta: Dict[str, Any]) -> Dict[str, Any]:
    return {k: v for k, v in resposta.items() if k not in CHAVES_INTERNAS}


def _com_digest(resultado: Any, digest: str) -> Any:
    if isinstance(resultado, dict):
        return {**resultado, "manifest_digest": digest}
    return {"resultado": resultado, "manifest_digest": digest}


def emitir(resposta: Dict[str, Any], args: argparse.Namespace, manifest: RunManifest) -> None:
    tabela = resposta.get("tabela")
    if args.json:
        print(json.dumps(_com_digest(_publico(resposta), manifest.digest), ensure_ascii=False, indent=2))
    elif args.csv and tabela:
        sys.stdout.write(csv_como_texto(tabela[0], tabela[1], manifest.digest))
    else:
        print(resposta["mensagem"])
        if tabela and len(tabela[1]) > 1:
            sys.stdout.write(csv_como_texto(tabela[0], tabela[1]))

    if args.output:
        destino = Path(args.output)
        caminho_json = destino / f"{args.comando}.json"
        salvar_json(caminho_json, _com_digest(resposta.get("resultado"), manifest.digest))
        manifest.registrar_saida(caminho_json)
        if tabela:
            caminho_csv = destino / f"{args.comando}.csv"
            salvar_csv(caminho_csv, tabela[0], tabela[1], manifest.digest)
            manifest.registrar_saida(caminho_csv)
        if resposta.get("amostras"):
            cabecalho, linhas = resposta["amostras"]
            caminho_amostras = destino / "samples.csv"
            salvar_csv(caminho_amostras, cabecalho, linhas, manifest.digest)
            manifest.registrar_saida(caminho_amostras)
        logger.info("[MAIN] manifesto salvo em %s", manifest.salvar(destino))


def main(argv: Optional[List[str]] = None) -> int:
    args = criar_parser().parse_args(argv)
    configurar_logging(args.debug)
    try:
        config = carregar_config(args.config)
    except Exception as e:
        print(f"[ERRO] {e}", file=sys.stderr)
        return 2

    flags = _flags(args)
    orquestrador = Orquestrador(args.debug, CacheManager(habilitado=not flags.get("no_cache")))
    try:
        resposta = orquestrador.executar_comando(args.comando, flags, config)
        if resposta["erro"]:
            print(f"[ERRO] {resposta['mensagem']}", file=sys.stderr)
            if args.json and resposta.get("resultado") is not None:
                print(json.dumps(_publico(resposta), ensure_ascii=False, indent=2, default=str))
            return resposta["codigo"]
        manifest = RunManifest(args.comando, resposta["parametros"])
        if args.config:
            manifest.registrar_entrada(Path(args.config))
        emitir(resposta, args, manifest)
        return 0
    except KeyboardInterrupt:
        print("\nExecução interrompida pelo usuário.", file=sys.stderr)
        return 1
    except Exception as e:
        logger.exception("[ERRO] Erro inesperado")
        print(f"[ERRO] Erro inesperado: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
