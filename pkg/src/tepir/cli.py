"""Command-line front end.

Subcommands: run, verify, bounds, figures, all-collude.  Numeric parameters
can also come from a JSON config file (keys n, k, t, e, q, seed); explicit
flags win.  TEPIR_SEED is the fallback seed source.  Exit codes: 0 success,
1 verification failure, 2 usage error, 3 invalid parameters, 4 I/O error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction

from . import bounds as bounds_mod
from . import verify as verify_mod
from .params import InvalidParameters, check_divisibilities, derive
from .scheme import (SABOTAGE_MODES, run_all_collude, run_retrieval,
                     transcript_to_json)

EXIT_OK = 0
EXIT_VERIFY_FAILED = 1
EXIT_USAGE = 2
EXIT_INVALID_PARAMS = 3
EXIT_IO = 4


class UsageError(Exception):
    pass


def _write_text(path: str, text: str):
    with open(path, "w", newline="\n") as fh:
        fh.write(text)


def _emit_json(payload, path=None):
    text = json.dumps(payload, sort_keys=True, indent=1) + "\n"
    if path:
        _write_text(path, text)
    else:
        sys.stdout.write(text)


def emit_csv(path, header, rows):
    lines = [",".join(header)]
    lines.extend(",".join(str(c) for c in row) for row in rows)
    text = "\n".join(lines) + "\n"
    if path:
        _write_text(path, text)
    else:
        sys.stdout.write(text)


def _load_config(path):
    with open(path) as fh:
        cfg = json.load(fh)
    if not isinstance(cfg, dict):
        raise UsageError(f"config {path} must hold a JSON object")
    return cfg


def _resolve(args, name, cfg, default=None, required=False):
    val = getattr(args, name, None)
    if val is None:
        val = cfg.get(name, default)
    if val is None and required:
        raise UsageError(f"missing required parameter --{name}")
    return val


def _resolve_seed(args, cfg) -> int:
    if getattr(args, "seed", None) is not None:
        return args.seed
    if "seed" in cfg:
        return int(cfg["seed"])
    env = os.environ.get("TEPIR_SEED")
    return int(env) if env else 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tepir",
        description="Private information retrieval against colluding and "
                    "eavesdropped databases: run sessions, verify the privacy "
                    "guarantees, and evaluate the rate bounds.")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p, with_t=True):
        p.add_argument("--n", type=int, help="number of databases")
        p.add_argument("--k", type=int, help="number of files")
        if with_t:
            p.add_argument("--t", type=int, help="collusion size")
        p.add_argument("--e", type=int, help="eavesdropped databases")
        p.add_argument("--q", type=int, help="field modulus override (prime)")
        p.add_argument("--seed", type=int, help="seed (fallback: TEPIR_SEED, then 0)")
        p.add_argument("--config", help="JSON config file with keys n,k,t,e,q,seed")
        p.add_argument("--json", action="store_true", help="machine-readable output")

    p_run = sub.add_parser("run", help="run one retrieval session")
    add_common(p_run)
    p_run.add_argument("--index", type=int, help="desired file index (1-based)")
    p_run.add_argument("--out", help="write the transcript JSON here")
    p_run.add_argument("--sabotage", choices=SABOTAGE_MODES, default="none")

    p_ver = sub.add_parser("verify", help="run the verification battery")
    add_common(p_ver)
    p_ver.add_argument("--trials", type=int, default=20, help="correctness trials per index")
    p_ver.add_argument("--seeds", type=int, default=20, help="system-privacy seeds")
    p_ver.add_argument("--samples", type=int, default=4000,
                       help="statistical user-privacy sessions per index")
    p_ver.add_argument("--projection-bits", type=int, default=8)
    p_ver.add_argument("--tolerance", type=float, default=0.05)
    p_ver.add_argument("--sabotage", choices=SABOTAGE_MODES, default="none")
    p_ver.add_argument("--out", help="write the report JSON here")

    p_bounds = sub.add_parser("bounds", help="evaluate all bounds at one point")
    add_common(p_bounds)
    p_bounds.add_argument("--out", help="write the report JSON here")

    p_fig = sub.add_parser("figures", help="emit the bound-sweep CSV data")
    p_fig.add_argument("--fig", type=int, choices=(1, 2), required=True)
    p_fig.add_argument("--k", type=int, required=True, help="number of files")
    p_fig.add_argument("--out", help="CSV output path (default: stdout)")

    p_all = sub.add_parser("all-collude", help="run the T = N scheme")
    add_common(p_all, with_t=False)
    p_all.add_argument("--index", type=int, help="desired file index (1-based)")
    p_all.add_argument("--out", help="write the transcript JSON here")
    return parser


def _cmd_run(args) -> int:
    cfg = _load_config(args.config) if args.config else {}
    n = int(_resolve(args, "n", cfg, required=True))
    k = int(_resolve(args, "k", cfg, required=True))
    t = int(_resolve(args, "t", cfg, required=True))
    e = int(_resolve(args, "e", cfg, required=True))
    q = _resolve(args, "q", cfg)
    index = int(_resolve(args, "index", cfg, default=1))
    seed = _resolve_seed(args, cfg)
    params = derive(n, k, t, e, q_hint=int(q) if q else None)
    if not 1 <= index <= k:
        raise InvalidParameters(f"--index must be in 1..{k}")
    result = run_retrieval(params, index - 1, seed=seed, sabotage=args.sabotage)
    payload = {
        "params": params.as_dict(),
        "divisibilities_ok": check_divisibilities(params)["ok"],
        "rate": str(result.rate),
        "secrecy_used": str(result.secrecy_used),
        "download_per_round": params.round_download,
        "file_len": params.file_len,
        "answers_total": result.transcript.total_answers,
        "recovered_ok": result.correct,
        "resample_attempts": result.attempts,
        "seed": seed,
    }
    if args.out:
        _write_text(args.out, transcript_to_json(result.transcript))
        payload["transcript"] = args.out
    if args.json:
        _emit_json(payload)
    else:
        for key, val in payload.items():
            print(f"{key}: {val}")
    if not result.correct:
        return EXIT_VERIFY_FAILED
    return EXIT_OK


def _cmd_verify(args) -> int:
    cfg = _load_config(args.config) if args.config else {}
    n = int(_resolve(args, "n", cfg, required=True))
    k = int(_resolve(args, "k", cfg, required=True))
    t = int(_resolve(args, "t", cfg, required=True))
    e = int(_resolve(args, "e", cfg, required=True))
    q = _resolve(args, "q", cfg)
    seed = _resolve_seed(args, cfg)
    params = derive(n, k, t, e, q_hint=int(q) if q else None)
    reports = verify_mod.run_all_checks(
        params, trials=args.trials, num_seeds=args.seeds, samples=args.samples,
        projection_bits=args.projection_bits, tolerance=args.tolerance,
        seed=seed, sabotage=args.sabotage)
    payload = [r.as_dict() for r in reports]
    if args.out:
        _emit_json(payload, args.out)
    if args.json:
        _emit_json(payload)
    else:
        for r in reports:
            status = "PASS" if r.passed else "FAIL"
            print(f"[{status}] {r.check}")
    return EXIT_OK if all(r.passed for r in reports) else EXIT_VERIFY_FAILED


def _cmd_bounds(args) -> int:
    cfg = _load_config(args.config) if args.config else {}
    n = int(_resolve(args, "n", cfg, required=True))
    k = int(_resolve(args, "k", cfg, required=True))
    t = int(_resolve(args, "t", cfg, required=True))
    e = int(_resolve(args, "e", cfg, required=True))
    report = bounds_mod.bound_report(n, k, t, e)
    payload = report.as_dict()
    if args.out:
        _emit_json(payload, args.out)
    if args.json:
        _emit_json(payload)
    else:
        for key, val in payload.items():
            print(f"{key}: {val}")
    return EXIT_OK


def _cmd_figures(args) -> int:
    header, rows = bounds_mod.figure_rows(args.fig, args.k)
    emit_csv(args.out, header, rows)
    return EXIT_OK


def _cmd_all_collude(args) -> int:
    cfg = _load_config(args.config) if args.config else {}
    n = int(_resolve(args, "n", cfg, required=True))
    k = int(_resolve(args, "k", cfg, required=True))
    e = int(_resolve(args, "e", cfg, required=True))
    q = _resolve(args, "q", cfg)
    index = int(_resolve(args, "index", cfg, default=1))
    seed = _resolve_seed(args, cfg)
    if not 1 <= index <= k:
        raise InvalidParameters(f"--index must be in 1..{k}")
    result = run_all_collude(n, k, e, desired=index - 1, seed=seed,
                             q_hint=int(q) if q else None)
    payload = {
        "params": {"n": n, "k": k, "t": n, "e": e, "q": result.q},
        "rate": str(result.rate),
        "file_len": n - e,
        "all_files_recovered": result.correct,
        "seed": seed,
    }
    if args.out:
        _write_text(args.out, transcript_to_json(result.transcript))
        payload["transcript"] = args.out
    if args.json:
        _emit_json(payload)
    else:
        for key, val in payload.items():
            print(f"{key}: {val}")
    return EXIT_OK if result.correct else EXIT_VERIFY_FAILED


_HANDLERS = {
    "run": _cmd_run,
    "verify": _cmd_verify,
    "bounds": _cmd_bounds,
    "figures": _cmd_figures,
    "all-collude": _cmd_all_collude,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return _HANDLERS[args.command](args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except InvalidParameters as exc:
        print(f"invalid parameters: {exc}", file=sys.stderr)
        return EXIT_INVALID_PARAMS
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
