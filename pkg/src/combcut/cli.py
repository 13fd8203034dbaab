"""Command-line client for the toolkit service.

All commands build a request, send it through the HTTP API, and render
the response. By default the service runs in-process (no network, no
separate server needed); ``--base-url`` points the same client at a
running ``combcut serve`` instance instead.

Exit codes: 0 all checks pass / computation agreed; 1 a verification
failed (suite check, pipeline mismatch, term budget overrun); 2 invalid
input (parse failures, unknown gates, width caps).
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import httpx

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_INVALID = 2


class ServiceClient:
    """Thin HTTP client; in-process ASGI transport unless a URL is given."""

    def __init__(self, base_url: str | None = None):
        self._base_url = base_url
        self._client = None
        self._app = None
        if base_url:
            self._client = httpx.Client(base_url=base_url, timeout=300.0)
        else:
            from .service.app import create_app

            self._app = create_app()

    def post(self, path: str, payload: dict) -> dict:
        if self._client is not None:
            return self._handle(path, self._client.post(path, json=payload))
        import asyncio

        return asyncio.run(self._post_in_process(path, payload))

    async def _post_in_process(self, path: str, payload: dict) -> dict:
        transport = httpx.ASGITransport(app=self._app)
        async with httpx.AsyncClient(
            transport=transport, base_url="http://combcut.internal", timeout=None
        ) as client:
            response = await client.post(path, json=payload)
        return self._handle(path, response)

    @staticmethod
    def _handle(path: str, response: httpx.Response) -> dict:
        if response.status_code >= 400:
            try:
                detail = response.json().get("detail", response.text)
            except ValueError:
                detail = response.text
            raise CommandError(f"{path}: {detail}")
        return response.json()

    def close(self) -> None:
        if self._client is not None:
            self._client.close()


class CommandError(Exception):
    """Invalid input reported by the service or the local file layer."""


def _load_json(path: str) -> dict:
    try:
        return json.loads(Path(path).read_text())
    except FileNotFoundError:
        raise CommandError(f"no such file: {path}")
    except json.JSONDecodeError as exc:
        raise CommandError(f"malformed JSON in {path}: {exc}")


def _dump(payload: dict, *, timings: bool) -> str:
    if not timings:
        payload = _zero_wall(payload)
    return json.dumps(payload, sort_keys=True, indent=2) + "\n"


def _zero_wall(obj):
    if isinstance(obj, dict):
        return {
            k: (0.0 if k == "wall_ms" else _zero_wall(v)) for k, v in obj.items()
        }
    if isinstance(obj, list):
        return [_zero_wall(v) for v in obj]
    return obj


def _write_out(path: str, text: str) -> None:
    Path(path).parent.mkdir(parents=True, exist_ok=True)
    Path(path).write_text(text)


def _emit(args, payload: dict, human_lines: list[str]) -> None:
    if args.json:
        sys.stdout.write(_dump(payload, timings=args.timings))
    else:
        for line in human_lines:
            print(line)
    if args.out:
        _write_out(args.out, _dump(payload, timings=args.timings))


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------


def cmd_decompose(args, client: ServiceClient) -> int:
    payload: dict = {"mode": args.mode}
    if args.gate:
        payload["gate"] = args.gate
    elif args.matrix_file:
        payload["matrix"] = _load_json(args.matrix_file)
    else:
        raise CommandError("give --gate NAME or --matrix-file FILE")
    data = client.post("/decompose", payload)
    lines = [f"mode = {data['mode']}", f"L = {data['term_count']}"]
    for i, t in enumerate(data["terms"]):
        c = complex(t["coef"][0], t["coef"][1])
        label = f" [{t['label']}]" if t.get("label") else ""
        lines.append(f"  term {i}: coef = {c:.6g}{label}")
    _emit(args, data, lines)
    return EXIT_OK


def cmd_gadgetize(args, client: ServiceClient) -> int:
    circuit = _load_json(args.circuit)
    data = client.post("/gadgetize", {"circuit": circuit, "variant": args.variant})
    lines = [
        f"variant = {args.variant}",
        f"gates = {data['gate_count']} "
        f"(inserted swaps = {data['swap_count']}, relocated = {data['relocated_count']})",
        f"ancillas = {data['circuit']['ancillas']}",
    ]
    if args.out:
        _write_out(args.out, _dump(data["circuit"], timings=True))
        lines.append(f"wrote {args.out}")
    if args.json:
        sys.stdout.write(_dump(data, timings=args.timings))
    else:
        for line in lines:
            print(line)
    return EXIT_OK


def cmd_cut(args, client: ServiceClient) -> int:
    comb = _load_json(args.comb)
    if args.gap_gates_file:
        gap_gates = _load_json(args.gap_gates_file)
    elif args.gap_gates:
        gaps = comb.get("gaps", [])
        names = [s.strip() for s in args.gap_gates.split(",")]
        if len(names) != len(gaps):
            raise CommandError(
                f"{len(names)} gap gate(s) given for {len(gaps)} gap(s)"
            )
        gap_gates = [
            {"name": name, "wires": gap["wires"]} for name, gap in zip(names, gaps)
        ]
    else:
        raise CommandError("give --gap-gates NAMES or --gap-gates-file FILE")
    payload = {
        "comb": comb,
        "gap_gates": gap_gates,
        "mode": args.mode,
        "budget": args.budget,
    }
    data = client.post("/cut", payload)
    _emit(args, data["decomposition"], [f"mode = {data['mode']}", f"L = {data['term_count']}"])
    return EXIT_OK


def cmd_simulate(args, client: ServiceClient) -> int:
    payload = {
        "circuit": _load_json(args.circuit),
        "input": args.input,
        "observable": args.observable,
    }
    data = client.post("/simulate", payload)
    _emit(args, data, [f"expectation = {data['expectation']:.12g}"])
    return EXIT_OK


def cmd_pipeline(args, client: ServiceClient) -> int:
    payload = {
        "circuit": _load_json(args.circuit),
        "input": args.input,
        "observable": args.observable,
        "mode": args.mode,
        "budget": args.budget,
        "variant": args.variant,
        "tolerance": args.tol,
    }
    data = client.post("/pipeline", payload)
    if data["budget_exceeded"]:
        _emit(
            args,
            data,
            [
                f"term budget exceeded: the cut needs {data['term_count']} terms "
                f"(budget {args.budget})"
            ],
        )
        return EXIT_FAIL
    lines = [
        f"expectation = {data['expectation']:.12g}",
        f"term_count = {data['term_count']}",
        f"mode = {data['mode']}",
    ]
    code = EXIT_OK
    if data["agrees"] is not None:
        lines.append(
            f"dense reference = {data['dense_expectation']:.12g} "
            f"({'agrees' if data['agrees'] else 'MISMATCH'} at {args.tol:g})"
        )
        if not data["agrees"]:
            code = EXIT_FAIL
    _emit(args, data, lines)
    return code


def _suite_params(args) -> dict:
    params: dict = {}
    for key in ("n", "kmax", "instances", "max_tries", "cuts", "channels",
                "random_cases", "budget"):
        value = getattr(args, key, None)
        if value is not None:
            params[key] = value
    if getattr(args, "gate", None):
        params["gate"] = args.gate
    if getattr(args, "mode", None):
        params["mode"] = args.mode
    if args.tol is not None:
        params["tol"] = args.tol
    if args.suite == "corpus":
        from .corpus import load_corpus

        manifest, files = load_corpus(args.corpus_dir)
        params["manifest"] = manifest
        params["entries"] = files
    return params


def cmd_verify(args, client: ServiceClient) -> int:
    payload = {
        "suite": args.suite,
        "seed": args.seed,
        "params": _suite_params(args),
        "include_timings": args.timings,
    }
    data = client.post("/verify", payload)
    lines = []
    for check in data["checks"]:
        status = "PASS" if check["passed"] else "FAIL"
        lines.append(
            f"[{status}] {check['name']}: measured={check['measured']} "
            f"expected={check['expected']} tol={check['tolerance']}"
        )
    lines.append(f"suite {data['suite']}: {'pass' if data['overall'] else 'fail'}")
    if args.json:
        sys.stdout.write(_dump(data, timings=args.timings))
    else:
        for line in lines:
            print(line)
    if args.out:
        _write_out(args.out + ".json", _dump(data, timings=args.timings))
        _write_out(args.out + ".csv", _render_checks_csv(data))
        if data.get("rows"):
            _write_out(args.out + "_report.csv", _render_rows_csv(data, args.timings))
    return EXIT_OK if data["overall"] else EXIT_FAIL


def _render_checks_csv(data: dict) -> str:
    lines = ["suite,check,passed,measured,expected,tolerance"]
    for c in data["checks"]:
        lines.append(
            ",".join(
                [
                    data["suite"],
                    c["name"],
                    "pass" if c["passed"] else "fail",
                    _csv_cell(c["measured"]),
                    _csv_cell(c["expected"]),
                    _csv_cell(c["tolerance"]),
                ]
            )
        )
    return "\n".join(lines) + "\n"


def _render_rows_csv(data: dict, timings: bool) -> str:
    lines = ["n_or_k,mode,L,rank,fidelity,wall_ms"]
    for row in data["rows"]:
        lines.append(
            ",".join(
                [
                    str(row["n_or_k"]),
                    row["mode"],
                    str(row["L"]),
                    "" if row["rank"] is None else str(row["rank"]),
                    "" if row["fidelity"] is None else repr(float(row["fidelity"])),
                    repr(float(row["wall_ms"] if timings else 0.0)),
                ]
            )
        )
    return "\n".join(lines) + "\n"


def _csv_cell(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    return str(value).replace(",", ";")


def cmd_serve(args, client: ServiceClient) -> int:
    import uvicorn

    from .service.app import create_app

    uvicorn.run(create_app(), host=args.host, port=args.port, log_level="info")
    return EXIT_OK


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------


def _global_flags(parser: argparse.ArgumentParser, suppress: bool) -> None:
    d = argparse.SUPPRESS if suppress else None

    def default(value):
        return argparse.SUPPRESS if suppress else value

    parser.add_argument("--base-url", default=default(None),
                        help="remote service URL (default: run in-process)")
    parser.add_argument("--json", action="store_true", default=default(False),
                        help="print machine-readable JSON instead of text")
    parser.add_argument("--out", default=default(None),
                        help="write the result to this path")
    parser.add_argument("--seed", type=int, default=default(None),
                        help="seed override")
    parser.add_argument("--tol", type=float, default=default(1e-8),
                        help="agreement tolerance for pipeline/verify")
    parser.add_argument("--timings", action="store_true", default=default(False),
                        help="keep measured wall times in written files")
    del d


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    _global_flags(common, suppress=True)

    parser = argparse.ArgumentParser(
        prog="combcut", description="circuit-cutting toolkit client"
    )
    _global_flags(parser, suppress=False)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("decompose", help="cut one two-qubit gate", parents=[common])
    p.add_argument("--gate", help="named gate (cz, cnot, swap)")
    p.add_argument("--matrix-file", help="JSON file with a 4x4 matrix")
    p.add_argument("--mode", default="schmidt", choices=["schmidt", "pauli"])
    p.set_defaults(func=cmd_decompose)

    p = sub.add_parser("gadgetize", help="relocate entangling gates onto ancillas", parents=[common])
    p.add_argument("circuit", help="circuit JSON file")
    p.add_argument("--variant", default="v1", choices=["v1", "v2"])
    p.set_defaults(func=cmd_gadgetize)

    p = sub.add_parser("cut", help="cut every gap of a comb", parents=[common])
    p.add_argument("comb", help="comb JSON file (circuit with gaps/partition)")
    p.add_argument("--gap-gates", help="comma-separated gate names, one per gap")
    p.add_argument("--gap-gates-file", help="JSON file with a gate list")
    p.add_argument("--mode", default="schmidt", choices=["schmidt", "pauli"])
    p.add_argument("--budget", type=int, default=None)
    p.set_defaults(func=cmd_cut)

    p = sub.add_parser("simulate", help="dense expectation of a circuit", parents=[common])
    p.add_argument("circuit")
    p.add_argument("--input", required=True)
    p.add_argument("--observable", required=True)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("pipeline", help="gadgetize, cut, evaluate, compare to dense", parents=[common])
    p.add_argument("circuit")
    p.add_argument("--input", required=True)
    p.add_argument("--observable", required=True)
    p.add_argument("--mode", default="schmidt", choices=["schmidt", "pauli"])
    p.add_argument("--budget", type=int, default=None)
    p.add_argument("--variant", default="v1", choices=["v1", "v2"])
    p.set_defaults(func=cmd_pipeline)

    p = sub.add_parser("verify", help="run a named verification suite", parents=[common])
    p.add_argument("--suite", required=True,
                   choices=["lemma1", "thm2-pipeline", "thm3", "fidelity",
                            "unital-nogo", "scaling", "corpus"])
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--kmax", type=int, default=None)
    p.add_argument("--gate", default=None)
    p.add_argument("--mode", default=None, choices=["schmidt", "pauli"])
    p.add_argument("--instances", type=int, default=None)
    p.add_argument("--max-tries", dest="max_tries", type=int, default=None)
    p.add_argument("--cuts", type=int, default=None)
    p.add_argument("--channels", type=int, default=None)
    p.add_argument("--random-cases", dest="random_cases", type=int, default=None)
    p.add_argument("--corpus-dir", default="corpus")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("serve", help="run the HTTP service", parents=[common])
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    p.set_defaults(func=cmd_serve)

    return parser


def main(argv=None) -> int:
    from .errors import ToolkitError

    parser = build_parser()
    args = parser.parse_args(argv)
    client = None
    try:
        if args.command != "serve":
            client = ServiceClient(args.base_url)
        return args.func(args, client)
    except (CommandError, ToolkitError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except httpx.HTTPError as exc:
        print(f"transport error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    finally:
        if client is not None:
            client.close()


if __name__ == "__main__":
    raise SystemExit(main())
