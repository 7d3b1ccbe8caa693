"""Command line entry point.

Exit codes: 0 success, 1 configuration error, 2 numerical failure, 3 I/O error.
"""

from __future__ import annotations

import argparse
import logging
import os
import sys
from pathlib import Path

import numpy as np

from .config import ExperimentConfig, load_config
from .errors import ConfigError, DomainError, NumericalError
from .experiment import Setup, replicate_rng, run_convergence_experiment
from .heavy_tail import TailLaw
from .prelimit import characteristic_gaps, vague_check
from .report import emit_report, format_float, load_raw, save_raw

EXIT_OK, EXIT_CONFIG, EXIT_NUMERIC, EXIT_IO = 0, 1, 2, 3
CHAR_GRID = np.arange(1, 51) / 50

log = logging.getLogger("stable_limits")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ConfigError(message)


def _default_threads() -> int:
    raw = os.environ.get("STABLE_LIMITS_THREADS", "1")
    try:
        return max(int(raw), 1)
    except ValueError:
        raise ConfigError(f"STABLE_LIMITS_THREADS must be an integer, got {raw!r}")


def _config(args) -> ExperimentConfig:
    if not args.config:
        raise ConfigError("--config is required for this command")
    cfg = load_config(args.config)
    if args.seed is not None:
        cfg = cfg.with_seed(args.seed)
    return cfg


def _write(text: str, output):
    if output is None:
        sys.stdout.write(text)
    else:
        Path(output).parent.mkdir(parents=True, exist_ok=True)
        Path(output).write_text(text, encoding="utf-8")


def cmd_sample(args):
    if args.config:
        cfg = _config(args)
        alpha, p, seed = cfg.alpha, cfg.p, cfg.master_seed
    else:
        if args.alpha is None or args.p is None:
            raise ConfigError("sample needs --config or both --alpha and --p")
        alpha, p, seed = args.alpha, args.p, args.seed or 0
    try:
        law = TailLaw(alpha, p)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    draws = law.sample(args.count, replicate_rng(seed, args.count, 0, 0))
    _write("".join(format_float(x) + "\n" for x in draws), args.output)


def cmd_vague_check(args):
    cfg = _config(args)
    lines = ["n,vague_sup\n"]
    for n in cfg.n_values:
        setup = Setup(cfg, n)
        lower = max(0.5, 2.0 * n ** (-1.0 / cfg.alpha))
        value = vague_check(setup.kernel, setup.measure, np.linspace(lower, max(10.0, lower), 200))
        lines.append(f"{n},{format_float(value)}\n")
    _write("".join(lines), args.output)


def cmd_chars(args):
    """Mean over ``char_paths`` replicates of |pre-limit - limit| characteristics on the grid i/50."""
    cfg = _config(args)
    lines = ["n,t,b1_gap,c11_gap,c12_gap,c22_gap\n"]
    for n in cfg.n_values:
        setup = Setup(cfg, n)
        acc = np.zeros((CHAR_GRID.size, 4))
        paths = max(cfg.char_paths, 1)
        for j in range(paths):
            samples = setup.law.sample(n, replicate_rng(cfg.master_seed, n, 0, j))
            g = characteristic_gaps(setup.kernel, setup.measure, samples, setup.f, CHAR_GRID, setup.limit_floor)
            acc += np.stack([g[k] for k in ("B1", "C11", "C12", "C22")], axis=-1)
        acc /= paths
        for t, row in zip(CHAR_GRID, acc):
            lines.append(",".join([str(n), format_float(t), *map(format_float, row)]) + "\n")
    _write("".join(lines), args.output)


def cmd_experiment(args):
    cfg = _config(args)
    report = run_convergence_experiment(cfg, threads=args.threads)
    out = Path(args.output_dir or cfg.output_dir)
    path = emit_report(report, args.format, out)
    save_raw(report, out / "raw.npz")
    log.info("wrote %s in %.1fs", path, report.wall_clock)


def cmd_report(args):
    if not args.input:
        raise ConfigError("report needs --input <raw.npz>")
    try:
        report = load_raw(args.input)
    except (KeyError, ValueError) as exc:
        raise ConfigError(f"cannot read raw results: {exc}") from exc
    emit_report(report, args.format, args.output_dir or report.config.output_dir)


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--config", help="flat key = value experiment file")
    common.add_argument("--seed", type=int, help="override master_seed")
    common.add_argument("--threads", type=int, default=None, help="worker threads (speed only)")
    common.add_argument("--format", choices=("csv", "json"), default="csv")
    common.add_argument("-v", "--verbose", action="store_true")

    parser = _Parser(prog="stable-limits", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("sample", parents=[common], help="dump heavy-tail draws")
    p.add_argument("--alpha", type=float)
    p.add_argument("--p", type=float)
    p.add_argument("--count", type=int, default=1000)
    p.add_argument("--output")
    p.set_defaults(func=cmd_sample)

    p = sub.add_parser("vague-check", parents=[common], help="tail discrepancy per n")
    p.add_argument("--output")
    p.set_defaults(func=cmd_vague_check)

    p = sub.add_parser("chars", parents=[common], help="characteristic discrepancy tables")
    p.add_argument("--output")
    p.set_defaults(func=cmd_chars)

    p = sub.add_parser("experiment", parents=[common], help="full convergence pipeline")
    p.add_argument("--output-dir")
    p.set_defaults(func=cmd_experiment)

    p = sub.add_parser("report", parents=[common], help="re-emit from stored raw results")
    p.add_argument("--input")
    p.add_argument("--output-dir")
    p.set_defaults(func=cmd_report)
    return parser


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
        if args.threads is None:
            args.threads = _default_threads()
        if args.threads < 1:
            raise ConfigError("--threads must be positive")
        args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (NumericalError, DomainError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
