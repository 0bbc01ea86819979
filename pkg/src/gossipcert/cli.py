"""Command line interface: a thin client of the HTTP service.

Requests go to the FastAPI app in-process by default, or over the wire when
--server is given.  Output is CSV (decimal point, 17 significant digits, no
locale) or JSON; identical configs and seeds produce byte-identical files.

Exit codes: 0 ok/valid, 2 infeasible or invalid certificate, 3 capacity
exceeded, 4 bad configuration, 1 anything else.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import httpx

EXIT_OK = 0
EXIT_INFEASIBLE = 2
EXIT_CAPACITY = 3
EXIT_CONFIG = 4


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return format(value, ".17g")
    return str(value)


def _csv(header: list[str], rows: list[dict]) -> str:
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(_fmt(row.get(col)) for col in header))
    return "\n".join(lines) + "\n"


def _emit(text: str, out: str | None):
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _load_model_spec(arg: str) -> dict:
    """Inline JSON or a path to a JSON file."""
    text = arg
    path = Path(arg)
    if not arg.lstrip().startswith("{") and path.exists():
        text = path.read_text()
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise SystemExit(f"bad model spec: {exc}")


def _parse_x0(arg: str, normalize: bool) -> dict:
    if arg.lstrip().startswith("{"):
        spec = json.loads(arg)
    elif arg == "alternating":
        spec = {"kind": "alternating"}
    elif arg.startswith("iid_uniform"):
        _, _, seed = arg.partition(":")
        spec = {"kind": "iid_uniform", "seed": int(seed or 0)}
    elif arg.startswith("explicit:"):
        values = [float(v) for v in arg.split(":", 1)[1].split(",")]
        spec = {"kind": "explicit", "values": values}
    else:
        raise SystemExit(f"bad x0 spec {arg!r}")
    if normalize:
        spec["normalize"] = True
    return spec


class Client:
    def __init__(self, server: str | None):
        self._server = server

    def _request(self, path: str, payload: dict) -> httpx.Response:
        if self._server:
            with httpx.Client(base_url=self._server, timeout=None) as client:
                return client.post(path, json=payload)

        # ASGITransport is async-only, so drive the in-process app with a
        # short-lived event loop per request
        import asyncio

        from .service import app

        async def call():
            transport = httpx.ASGITransport(app=app)
            async with httpx.AsyncClient(
                transport=transport,
                base_url="http://gossipcert.local",
                timeout=None,
            ) as client:
                return await client.post(path, json=payload)

        return asyncio.run(call())

    def post(self, path: str, payload: dict) -> dict:
        resp = self._request(path, payload)
        if resp.status_code == 413:
            sys.stderr.write(resp.text + "\n")
            raise SystemExit(EXIT_CAPACITY)
        if resp.status_code in (400, 422):
            sys.stderr.write(resp.text + "\n")
            raise SystemExit(EXIT_CONFIG)
        resp.raise_for_status()
        return resp.json()


def _cmd_certify(args, client: Client) -> int:
    payload = {"model": _load_model_spec(args.model), "v0": args.v0}
    if args.gamma is not None:
        payload["gamma"] = args.gamma
    elif args.minimal:
        payload["minimal"] = True
    else:
        payload["theorem"] = args.theorem or "auto"
    result = client.post("/certify", payload)
    _emit(json.dumps(result, indent=2) + "\n", args.out)
    if result["infeasible"] or not result["valid"]:
        return EXIT_INFEASIBLE
    return EXIT_OK


def _cmd_oracle(args, client: Client) -> int:
    payload = {
        "model": _load_model_spec(args.model),
        "x0": _parse_x0(args.x0, args.normalize),
        "steps": args.steps,
    }
    if args.gamma is not None:
        payload["gamma"] = args.gamma
    result = client.post("/oracle", payload)
    if args.format == "json":
        _emit(json.dumps(result, indent=2) + "\n", args.out)
    else:
        _emit(_csv(["t", "mse", "disagreement", "lyapunov"], result["rows"]),
              args.out)
    return EXIT_OK


def _cmd_simulate(args, client: Client) -> int:
    payload = {
        "model": _load_model_spec(args.model),
        "x0": _parse_x0(args.x0, args.normalize),
        "steps": args.steps,
        "trials": args.trials,
        "seed": args.seed,
    }
    result = client.post("/simulate", payload)
    if args.format == "json":
        _emit(json.dumps(result, indent=2) + "\n", args.out)
    else:
        _emit(_csv(["t", "mse_mean", "mse_ci", "v_mean", "bound", "oracle_mse"],
                   result["rows"]), args.out)
    return EXIT_OK


def _cmd_scaling(args, client: Client) -> int:
    payload = {
        "family": args.family,
        "n_list": [int(v) for v in args.n_list.split(",")],
        "q": args.q,
        "trials": args.trials,
        "seed": args.seed,
    }
    if args.max_steps is not None:
        payload["max_steps"] = args.max_steps
    result = client.post("/scaling", payload)
    if args.format == "json":
        _emit(json.dumps(result, indent=2) + "\n", args.out)
    else:
        _emit(_csv(["N", "gamma", "bound_over_v0", "mse_over_v0",
                    "prior_bound_best"], result["rows"]), args.out)
    return EXIT_OK


def _cmd_compare_bounds(args, client: Client) -> int:
    payload = {"model": _load_model_spec(args.model), "v0": args.v0}
    if args.sigma2 is not None:
        payload["sigma2"] = args.sigma2
    result = client.post("/compare-bounds", payload)
    if args.format == "json":
        _emit(json.dumps(result, indent=2) + "\n", args.out)
    else:
        _emit(_csv(["bound_name", "value", "vacuous"], result["rows"]), args.out)
    return EXIT_OK


def _cmd_serve(args, _client) -> int:
    import uvicorn

    from .service import app

    uvicorn.run(app, host=args.host, port=args.port)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gossipcert",
        description="Accuracy certificates and simulation for randomized "
                    "average-preserving consensus",
    )
    parser.add_argument("--server", help="base URL of a running service "
                                         "(default: in-process)")
    parser.add_argument("--config", help="JSON file with default argument values")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, model=True):
        if model:
            # required, but validated after the config file is merged in
            p.add_argument("--model",
                           help="model JSON (inline or file path)")
        p.add_argument("--out", help="output file (default: stdout)")
        p.add_argument("--format", choices=["csv", "json"], default="csv")
        p.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("certify", help="compute or check a gamma certificate")
    common(p)
    p.add_argument("--gamma", type=float)
    p.add_argument("--minimal", action="store_true")
    p.add_argument("--theorem", nargs="?", const="auto")
    p.add_argument("--v0", type=float)
    p.set_defaults(func=_cmd_certify)

    p = sub.add_parser("oracle", help="exact second-moment trajectory")
    common(p)
    p.add_argument("--x0", default="alternating")
    p.add_argument("--normalize", action="store_true")
    p.add_argument("--steps", type=int, default=100)
    p.add_argument("--gamma", type=float)
    p.set_defaults(func=_cmd_oracle)

    p = sub.add_parser("simulate", help="Monte Carlo estimate of the deviation")
    common(p)
    p.add_argument("--x0", default="alternating")
    p.add_argument("--normalize", action="store_true")
    p.add_argument("--steps", type=int, default=100)
    p.add_argument("--trials", type=int, default=1000)
    p.set_defaults(func=_cmd_simulate)

    p = sub.add_parser("scaling", help="sweep a model family over network sizes")
    common(p, model=False)
    p.add_argument("--family", required=True,
                   choices=["bga_cycle", "saga_cycle", "aaga_complete",
                            "pbga_complete"])
    p.add_argument("--n-list", required=True, help="comma-separated sizes")
    p.add_argument("--q", type=float, default=0.5)
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--max-steps", type=int)
    p.set_defaults(func=_cmd_scaling)

    p = sub.add_parser("compare-bounds",
                       help="our bound next to prior-literature bounds")
    common(p)
    p.add_argument("--v0", type=float, default=1.0)
    p.add_argument("--sigma2", type=float)
    p.set_defaults(func=_cmd_compare_bounds)

    p = sub.add_parser("serve", help="run the HTTP service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    p.set_defaults(func=_cmd_serve)

    return parser


def _apply_config(args, argv):
    """Fill arguments from the config file unless given on the command line."""
    if not getattr(args, "config", None):
        return args
    try:
        config = json.loads(Path(args.config).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        sys.stderr.write(f"bad config file: {exc}\n")
        raise SystemExit(EXIT_CONFIG)
    given = {a.split("=", 1)[0] for a in argv if a.startswith("--")}
    for key, value in config.items():
        dest = key.replace("-", "_")
        if hasattr(args, dest) and f"--{key}" not in given:
            setattr(args, dest, value)
    return args


def main(argv=None) -> int:
    argv = list(sys.argv[1:]) if argv is None else list(argv)
    parser = build_parser()
    args = parser.parse_args(argv)
    args = _apply_config(args, argv)
    if getattr(args, "model", "absent") is None:
        sys.stderr.write("a model is required (--model or the config file)\n")
        return EXIT_CONFIG
    if args.command == "serve":
        return args.func(args, None)
    client = Client(args.server)
    try:
        return args.func(args, client)
    except httpx.HTTPError as exc:
        sys.stderr.write(f"request failed: {exc}\n")
        return 1


if __name__ == "__main__":
    sys.exit(main())
