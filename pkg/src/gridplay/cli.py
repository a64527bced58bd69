"""Command line tools: throughput benchmark and trajectory replay."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .bench import BenchReport, available_cores, bench_audit, bench_table
from .env.config import EnvConfig
from .replay import MismatchAt, verify_file

BUILTIN_ENVS = {
    "cramped_room": lambda seed: _cramped(seed),
    "search_rescue": lambda seed: _rescue(seed),
}


def _cramped(seed: int) -> EnvConfig:
    from .envs import overcooked
    return overcooked.cramped_room_config(seed=seed)


def _rescue(seed: int) -> EnvConfig:
    from .envs import search_rescue
    return search_rescue.search_rescue_config(seed=seed)


def _load_env(args) -> EnvConfig:
    if args.config:
        return EnvConfig.from_text(Path(args.config).read_text())
    try:
        return BUILTIN_ENVS[args.env](args.seed)
    except KeyError:
        raise SystemExit(f"unknown env {args.env!r}; "
                         f"choose from {sorted(BUILTIN_ENVS)}")


def bench_main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        prog="gridplay-bench",
        description="Aggregate steps/second over parallel env instances.")
    parser.add_argument("--env", default="cramped_room",
                        help=f"builtin env name ({', '.join(BUILTIN_ENVS)})")
    parser.add_argument("--config", help="env config file (overrides --env)")
    parser.add_argument("--instances", default="1,2,4,8,16,32,64,128,256",
                        help="comma-separated instance counts")
    parser.add_argument("--workers", type=int, default=available_cores())
    parser.add_argument("--seconds", type=float, default=2.0,
                        help="wall seconds per row")
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--out", help="write the table to a file")
    parser.add_argument("--audit", action="store_true",
                        help="fixed-step determinism audit vs a serial rerun")
    parser.add_argument("--audit-steps", type=int, default=200)
    args = parser.parse_args(argv)

    config = _load_env(args)
    counts = [int(v) for v in args.instances.split(",") if v.strip()]

    lines = [BenchReport.header()]
    ok = True
    if args.audit:
        for n in counts:
            report, match = bench_audit(config, n, args.workers,
                                        args.audit_steps)
            ok = ok and match
            lines.append(report.row() + ("\tdeterministic"
                                         if match else "\tMISMATCH"))
    else:
        for report in bench_table(config, counts, args.workers, args.seconds):
            lines.append(report.row())
    table = "\n".join(lines)
    print(table)
    if args.out:
        Path(args.out).write_text(table + "\n")
    return 0 if ok else 1


def replay_main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        prog="gridplay-replay",
        description="Re-simulate a trajectory log and verify its checksums.")
    parser.add_argument("--file", required=True, help="trajectory file")
    args = parser.parse_args(argv)
    try:
        report = verify_file(args.file)
    except MismatchAt as err:
        print(f"MISMATCH at episode {err.episode} tick {err.tick}: "
              f"logged {err.expected:016x} replayed {err.actual:016x}")
        return 1
    print(f"ok: session {report.session_id}, {report.episodes} episode(s), "
          f"{report.ticks_verified} ticks verified")
    return 0


if __name__ == "__main__":
    tool = sys.argv[1] if len(sys.argv) > 1 else ""
    if tool == "bench":
        raise SystemExit(bench_main(sys.argv[2:]))
    if tool == "replay":
        raise SystemExit(replay_main(sys.argv[2:]))
    raise SystemExit("usage: python -m gridplay.cli {bench|replay} ...")
