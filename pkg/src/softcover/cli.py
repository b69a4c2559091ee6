"""Command-line client for the softcover service.

Subcommands: exponent, second-order, simulate, gaussian, serve. By default
the CLI mounts the service in-process (no daemon needed, fully deterministic
given the flag set); point --server at a running instance to use it instead.
Flags override values from --config FILE (JSON). Exit codes: 0 success,
2 invalid parameters or preconditions, 3 resource caps.
"""

from __future__ import annotations

import argparse
import asyncio
import json
import os
import sys
from pathlib import Path

import httpx

CAP_ERRORS = ("SizeOverflow", "SpaceTooLarge")

EXIT_INVALID = 2
EXIT_CAPS = 3


class CliError(Exception):
    def __init__(self, message: str, code: int = EXIT_INVALID):
        super().__init__(message)
        self.code = code


def _fmt(value) -> str:
    """Shortest-roundtrip CSV field formatting."""
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _write_csv(path: Path, header: list[str], rows) -> None:
    with open(path, "w", newline="") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(_fmt(v) for v in row) + "\n")


def _post(server: str | None, path: str, payload: dict) -> dict:
    async def go() -> httpx.Response:
        if server:
            async with httpx.AsyncClient(base_url=server, timeout=None) as client:
                return await client.post(path, json=payload)
        from .service import create_app

        transport = httpx.ASGITransport(app=create_app())
        async with httpx.AsyncClient(
            transport=transport, base_url="http://softcover.internal", timeout=None
        ) as client:
            return await client.post(path, json=payload)

    resp = asyncio.run(go())
    if resp.status_code == 200:
        return resp.json()
    try:
        body = resp.json()
    except ValueError:
        raise CliError(f"service error (HTTP {resp.status_code}): {resp.text}")
    if resp.status_code == 422:
        raise CliError(f"invalid request: {json.dumps(body.get('detail'))}")
    error = body.get("error", "error")
    message = body.get("message", resp.text)
    code = EXIT_CAPS if error in CAP_ERRORS else EXIT_INVALID
    raise CliError(f"{error}: {message}", code)


def _load_config(path: str | None) -> dict:
    if not path:
        return {}
    with open(path) as fh:
        cfg = json.load(fh)
    if not isinstance(cfg, dict):
        raise CliError(f"config file {path} must hold a JSON object")
    return cfg


def _channel_payload(spec: str) -> dict:
    """Accept a shorthand, an inline JSON object, or a path to a JSON file."""
    spec = spec.strip()
    if spec.startswith("{"):
        return json.loads(spec)
    if os.path.exists(spec):
        with open(spec) as fh:
            return json.load(fh)
    return {"shorthand": spec}


def _merge_payload(config: dict, overrides: dict) -> dict:
    payload = dict(config)
    for key, value in overrides.items():
        if value is not None:
            payload[key] = value
    return payload


def _out_dir(args) -> Path:
    out = Path(args.out or ".")
    out.mkdir(parents=True, exist_ok=True)
    return out


def _default_threads(args) -> int | None:
    if args.threads is not None:
        return args.threads
    env = os.environ.get("SOFTCOVER_THREADS")
    if env:
        return int(env)
    return None  # service default: all cores


def _parse_n_list(text: str) -> list[int]:
    """Blocklength list: '4:14' (inclusive range) or '4,6,8'."""
    text = text.strip()
    if ":" in text:
        lo, _, hi = text.partition(":")
        return list(range(int(lo), int(hi) + 1))
    return [int(part) for part in text.split(",") if part]


def cmd_exponent(args) -> int:
    config = _load_config(args.config)
    overrides = {
        "channel": _channel_payload(args.channel) if args.channel else None,
        "rate": args.rate,
        "delta": args.delta,
        "n": args.n,
    }
    body = _post(args.server, "/exponent", _merge_payload(config, overrides))
    print(json.dumps(body, indent=2))
    return 0


def cmd_second_order(args) -> int:
    config = _load_config(args.config)
    overrides = {
        "channel": _channel_payload(args.channel) if args.channel else None,
        "eps_target": args.eps,
        "c": args.c,
        "d": args.d,
        "r": args.r,
        "n": args.n,
    }
    body = _post(args.server, "/second-order", _merge_payload(config, overrides))
    print(json.dumps(body, indent=2))
    return 0


def cmd_simulate(args) -> int:
    config = _load_config(args.config)
    overrides = {
        "channel": _channel_payload(args.channel) if args.channel else None,
        "n_list": _parse_n_list(args.n_list) if args.n_list else None,
        "trials": args.trials,
        "delta": args.delta,
        "master_seed": args.seed,
        "rate": args.rate,
        "eps_target": args.eps,
        "c": args.c,
        "epsilon_override": args.epsilon_override,
        "threads": _default_threads(args),
    }
    if args.tail_threshold:
        overrides["tail_thresholds"] = args.tail_threshold
    body = _post(args.server, "/simulate", _merge_payload(config, overrides))

    out = _out_dir(args)
    _write_csv(
        out / "sweep.csv",
        ["n", "trial", "seed", "tv", "p2_mass", "d1_max", "pos_part_d1"],
        (
            [r["n"], r["trial"], r["seed"], r["tv"], r["p2_mass"], r["d1_max"], r["pos_part_d1"]]
            for r in body["rows"]
        ),
    )
    with open(out / "summary.json", "w") as fh:
        json.dump(body["summary"], fh, indent=2)
        fh.write("\n")
    print(f"wrote {out / 'sweep.csv'} and {out / 'summary.json'}")
    return 0


def cmd_gaussian(args) -> int:
    config = _load_config(args.config)
    overrides = {
        "snr": args.snr,
        "dim": args.dim,
        "b": args.b,
        "noise_var": args.noise_var,
        "seed": args.seed,
        "optimize": True if args.optimize else None,
        "max_iters": args.max_iters,
        "tol": args.tol,
        "grid_points": args.grid_points,
    }
    body = _post(args.server, "/gaussian", _merge_payload(config, overrides))

    out = _out_dir(args)
    grid = body["grid"]
    if body["dim"] == 1:
        _write_csv(
            out / "density_grid.csv",
            ["x", "mixture", "target"],
            zip(grid["xs"], grid["mixture"], grid["target"]),
        )
        _write_csv(out / "codewords.csv", ["x"], ([c[0]] for c in body["codewords"]))
    else:
        xs, ys, mix = grid["xs"], grid["ys"], grid["mixture"]
        _write_csv(
            out / "density_grid.csv",
            ["x", "y", "mixture"],
            ([x, y, mix[i][j]] for i, x in enumerate(xs) for j, y in enumerate(ys)),
        )
        _write_csv(out / "codewords.csv", ["x", "y"], body["codewords"])
    with open(out / "tv.json", "w") as fh:
        json.dump({"tv": body["tv"], "seed": body["seed"], "optimized": body["optimized"]}, fh, indent=2)
        fh.write("\n")
    print(f"wrote {out / 'density_grid.csv'}, {out / 'codewords.csv'}, {out / 'tv.json'}")
    return 0


def cmd_serve(args) -> int:
    import uvicorn

    from .service import create_app

    uvicorn.run(create_app(), host=args.host, port=args.port)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="softcover",
        description="Soft-covering bounds and codebook simulations.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser) -> None:
        p.add_argument("--config", help="JSON file with request fields (flags override)")
        p.add_argument("--server", help="base URL of a running service (default: in-process)")
        p.add_argument("--out", help="output directory (default: current directory)")

    p = sub.add_parser("exponent", help="decay exponent and failure bound at a fixed rate")
    p.add_argument("--channel", help="bsc:p | bec:p | noiseless:k | JSON file | inline JSON")
    p.add_argument("--rate", type=float, help="codebook rate, bits per symbol")
    p.add_argument("--delta", type=float, help="exponent slack, bits")
    p.add_argument("--n", type=int, help="blocklength for the per-n bound")
    common(p)
    p.set_defaults(func=cmd_exponent)

    p = sub.add_parser("second-order", help="rate schedule with a 1/sqrt(n) gap")
    p.add_argument("--channel")
    p.add_argument("--eps", type=float, help="target total variation in (0,1)")
    p.add_argument("--c", type=float, help="log-term coefficient, > 2")
    p.add_argument("--d", type=float, help="failure-exponent parameter, < c-1")
    p.add_argument("--r", type=float, help="slack split in (0, c-d-1); default midpoint")
    p.add_argument("--n", type=int, help="blocklength")
    common(p)
    p.set_defaults(func=cmd_second_order)

    p = sub.add_parser("simulate", help="Monte Carlo codebook sweep")
    p.add_argument("--channel")
    p.add_argument("--n-list", help="blocklengths: '4:14' or '4,6,8'")
    p.add_argument("--trials", type=int, help="codebooks per blocklength")
    p.add_argument("--delta", type=float, help="slack for the per-n bounds")
    p.add_argument("--seed", type=int, help="64-bit master seed")
    p.add_argument("--rate", type=float, help="fixed rate, bits per symbol")
    p.add_argument("--eps", type=float, help="second-order target total variation")
    p.add_argument("--c", type=float, help="second-order log-term coefficient")
    p.add_argument("--epsilon-override", type=float, help="typicality slack override")
    p.add_argument("--tail-threshold", type=float, action="append",
                   help="extra tail threshold (repeatable)")
    p.add_argument("--threads", type=int,
                   help="worker threads (default: SOFTCOVER_THREADS or all cores)")
    common(p)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("gaussian", help="Gaussian synthesis demo grids")
    p.add_argument("--snr", type=float, help="signal-to-noise ratio")
    p.add_argument("--dim", type=int, choices=(1, 2))
    p.add_argument("--b", type=int, help="codewords per dimension")
    p.add_argument("--noise-var", type=float, help="noise variance (default 1)")
    p.add_argument("--seed", type=int, help="64-bit seed")
    p.add_argument("--optimize", action="store_true", help="locally optimize the codewords")
    p.add_argument("--max-iters", type=int, help="optimizer sweep limit")
    p.add_argument("--tol", type=float, help="optimizer step tolerance")
    p.add_argument("--grid-points", type=int, help="quadrature nodes per axis")
    common(p)
    p.set_defaults(func=cmd_gaussian)

    p = sub.add_parser("serve", help="run the HTTP service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    p.set_defaults(func=cmd_serve)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code
    except (OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
