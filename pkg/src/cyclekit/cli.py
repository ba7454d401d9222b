"""Thin command-line client for the cyclekit service.

By default every subcommand invokes the service handlers in-process, so no
server is needed and seeded runs are byte-reproducible; pass --server URL to
talk to a running instance instead.  Exit codes: 0 success / pass / witness
found; 1 certified negative / failed check; 2 inconclusive (including budget
exhaustion); 3 usage or input error.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Any

from . import __version__
from .errors import BudgetExceededError, GraphFormatError, GuardError
from .service import handlers
from .service.models import (
    GenRequest,
    GenResponse,
    SearchRequest,
    SearchResponse,
    SweepRequest,
    SweepResponse,
    VerifyRequest,
    VerifyResponse,
)


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse would exit 2; the contract wants 3
        raise _UsageError(message)


def build_parser() -> _Parser:
    parser = _Parser(prog="cyclekit", description=__doc__)
    parser.add_argument("--version", action="version", version=f"cyclekit {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, budget_default=10**6):
        p.add_argument("--in", dest="infile", help="input graph document")
        p.add_argument("--out", help="output file (default: stdout)")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--budget", type=int, default=budget_default)
        p.add_argument("--format", choices=["json", "csv", "text"], default=None)
        p.add_argument("--no-timestamp", action="store_true")
        p.add_argument("--server", help="service URL; default runs in-process")

    gen = sub.add_parser("gen", help="emit graphs and colourings")
    gen.add_argument(
        "kind",
        choices=["random", "hypercube", "complete-greedy", "subset-aux", "tuple-aux"],
    )
    gen.add_argument("--n", type=int)
    gen.add_argument("--p", type=float)
    gen.add_argument("--m", type=int)
    gen.add_argument("--r", type=int)
    common(gen)

    verify = sub.add_parser("verify", help="run a certificate over an input")
    verify.add_argument(
        "check",
        choices=[
            "proper",
            "ratio",
            "interpolation",
            "sidorenko",
            "bipartite-mindeg",
            "sparsity",
            "key-lemma",
            "dyadic",
            "tuple-bound",
            "subset-bound",
            "krr-count",
            "mono-matchings",
            "step1",
            "step2",
            "almost-regular",
            "blowup-biregular",
        ],
    )
    verify.add_argument("--k", type=int, default=2)
    verify.add_argument("--ell", type=int, default=0)
    verify.add_argument("--kmax", type=int, default=4)
    verify.add_argument("--r", type=int, default=2)
    verify.add_argument("--relation", choices=["equality", "same-colour"], default="equality")
    verify.add_argument("--eps", type=float, default=0.5)
    verify.add_argument("--c", type=float, default=1.0)
    verify.add_argument("--base-n", type=int, dest="base_n")
    common(verify, budget_default=10**9)

    search = sub.add_parser("search", help="run a finder over an input")
    search.add_argument(
        "finder",
        choices=["good-cycle", "rainbow-cycle", "theta", "even-cycle", "blowup", "colour-iso"],
    )
    search.add_argument("--k", type=int, default=None)
    search.add_argument("--t", type=int, default=2)
    search.add_argument("--r", type=int, default=2)
    search.add_argument("--exact-max-n", type=int, dest="exact_max_n", default=64)
    common(search)

    sweep = sub.add_parser("sweep", help="exhaustive small-graph lemma sweeps")
    sweep.add_argument("family", choices=["keylemma"])
    sweep.add_argument("--nmax", type=int, default=6)
    sweep.add_argument("--k", type=int, action="append", dest="ks")
    sweep.add_argument("--colour-seeds", default="101,202,303")
    sweep.add_argument("--all-graphs", action="store_true", help="include disconnected")
    sweep.add_argument("--max-graphs", type=int, dest="max_graphs")
    sweep.add_argument("--processes", type=int, default=1)
    common(sweep)

    serve = sub.add_parser("serve", help="run the HTTP service")
    serve.add_argument("--host", default="127.0.0.1")
    serve.add_argument("--port", type=int, default=8000)
    return parser


def _read_input(args) -> str:
    if not args.infile:
        raise _UsageError("this subcommand requires --in")
    try:
        with open(args.infile, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise _UsageError(f"cannot read {args.infile}: {exc}")


def _invoke(server: str | None, endpoint: str, request, response_cls):
    if server is None:
        fn = {
            "gen": handlers.run_gen,
            "verify": handlers.run_verify,
            "search": handlers.run_search,
            "sweep": handlers.run_sweep,
        }[endpoint]
        return fn(request)
    import httpx

    reply = httpx.post(
        f"{server.rstrip('/')}/api/{endpoint}",
        json=request.model_dump(),
        timeout=None,
    )
    if reply.status_code == 400:
        raise ValueError(reply.json().get("detail", "bad input"))
    if reply.status_code == 422:
        raise BudgetExceededError(0)
    reply.raise_for_status()
    return response_cls.model_validate(reply.json())


def _render_json(response) -> str:
    return json.dumps(response.model_dump(), sort_keys=True, indent=2) + "\n"


def _csv_cell(value: Any) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _render_sweep_csv(response: SweepResponse) -> str:
    lines = [",".join(response.columns)]
    lines.extend(",".join(_csv_cell(v) for v in row) for row in response.rows)
    return "\n".join(lines) + "\n"


def _write(args, text: str) -> None:
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command == "serve":
            import uvicorn

            from .service.app import app

            uvicorn.run(app, host=args.host, port=args.port)
            return 0
        if args.command == "gen":
            request = GenRequest(
                kind=args.kind,
                n=args.n,
                p=args.p,
                m=args.m,
                r=args.r,
                seed=args.seed,
                document=_read_input(args)
                if args.kind in ("subset-aux", "tuple-aux")
                else None,
                input_path=args.infile,
                output_format=args.format,
                no_timestamp=args.no_timestamp,
            )
            response = _invoke(args.server, "gen", request, GenResponse)
            if args.format == "json":
                _write(args, _render_json(response))
            else:
                _write(args, response.document)
            return 0
        if args.command == "verify":
            request = VerifyRequest(
                check=args.check,
                document=_read_input(args),
                k=args.k,
                ell=args.ell,
                kmax=args.kmax,
                r=args.r,
                relation=args.relation,
                eps=args.eps,
                c=args.c,
                base_n=args.base_n,
                seed=args.seed,
                budget=args.budget,
                input_path=args.infile,
                output_format=args.format,
                no_timestamp=args.no_timestamp,
            )
            response = _invoke(args.server, "verify", request, VerifyResponse)
            _write(args, _render_json(response))
            return 0 if response.passed else 1
        if args.command == "search":
            request = SearchRequest(
                finder=args.finder,
                document=_read_input(args),
                k=args.k,
                t=args.t,
                r=args.r,
                seed=args.seed,
                budget=args.budget,
                exact_max_n=args.exact_max_n,
                input_path=args.infile,
                output_format=args.format,
                no_timestamp=args.no_timestamp,
            )
            response = _invoke(args.server, "search", request, SearchResponse)
            _write(args, _render_json(response))
            return {"found": 0, "certified-absent": 1, "inconclusive": 2}[
                response.status
            ]
        if args.command == "sweep":
            request = SweepRequest(
                family=args.family,
                nmax=args.nmax,
                ks=args.ks or [2],
                colour_seeds=[int(s) for s in args.colour_seeds.split(",") if s],
                connected_only=not args.all_graphs,
                max_graphs=args.max_graphs,
                processes=args.processes,
                output_format=args.format,
                no_timestamp=args.no_timestamp,
            )
            response = _invoke(args.server, "sweep", request, SweepResponse)
            if args.format == "json":
                _write(args, _render_json(response))
            else:
                _write(args, _render_sweep_csv(response))
            return 0 if response.all_passed else 1
        raise _UsageError(f"unknown command {args.command!r}")
    except _UsageError as exc:
        print(f"cyclekit: {exc}", file=sys.stderr)
        return 3
    except (GraphFormatError, GuardError, ValueError) as exc:
        print(f"cyclekit: {exc}", file=sys.stderr)
        return 3
    except BudgetExceededError as exc:
        print(f"cyclekit: inconclusive: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
