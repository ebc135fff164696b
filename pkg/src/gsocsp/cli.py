"""Command-line entry point: ``gsocsp run`` and ``gsocsp compare``."""
from __future__ import annotations

import argparse
import logging
import os
import sys

from . import bench
from .exceptions import ConfigurationError, InstanceParseError
from .solver import StopCriterion

EXIT_OK, EXIT_INPUT, EXIT_CONFIG, EXIT_INTERNAL = 0, 2, 3, 4

log = logging.getLogger("gsocsp")


class _Parser(argparse.ArgumentParser):
    """Argument errors are configuration errors (exit 3), not argparse's exit 2."""

    def error(self, message):
        raise ConfigurationError(message)


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--instance", required=True, help="instance file or bundled corpus name (e.g. queens8)")
    p.add_argument("--seeds", default="0", help="a..b, a,b,c or a single seed")
    p.add_argument("--stop", default="iters", help="first | count:N | iters | exhaust[:TOTAL]")
    p.add_argument("--max-iters", type=int, default=100)
    p.add_argument("--pop-size", type=int)
    p.add_argument("--scrounger-prob", type=float)
    p.add_argument("--eta", type=float, help="polynomial-mutation distribution index")
    p.add_argument("--params", help="extra overrides, key=val,...")
    p.add_argument("--out-dir", help=f"output directory (default: ${bench.OUT_DIR_ENV} or ./runs)")
    p.add_argument("--jobs", type=int, default=1, help="seeds run in parallel")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="gsocsp", description=__doc__)
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)
    run_p = sub.add_parser("run", help="run one algorithm over a range of seeds")
    _common(run_p)
    run_p.add_argument("--algo", default="apm-cpgso", help=" | ".join(bench.ALGORITHMS))
    cmp_p = sub.add_parser("compare", help="run several algorithms with shared seeds")
    _common(cmp_p)
    cmp_p.add_argument("--algo", action="append", required=True, help="repeat for each algorithm")
    return parser


def _config(args, algorithm: str, params: dict, shared: bool = False) -> bench.RunConfig:
    # compare shares one flag set across algorithms, so GSO-only flags are dropped for pso there
    gso_only = algorithm in ("apm-cpgso", "gso") or not shared
    return bench.RunConfig(
        instance=args.instance,
        algorithm=algorithm,
        seeds=bench.parse_seeds(args.seeds),
        stop=StopCriterion.parse(args.stop),
        max_iters=args.max_iters,
        pop_size=args.pop_size,
        scrounger_prob=args.scrounger_prob if gso_only else None,
        eta=args.eta if gso_only else None,
        params=params,
        out_dir=args.out_dir,
        jobs=args.jobs,
    )


def _split_params(text, algorithms) -> dict:
    """Per-algorithm overrides; a key must belong to at least one algorithm's params."""
    out = {a: {} for a in algorithms}
    if not text:
        return out
    for item in text.split(","):
        if not item.strip():
            continue
        key = item.partition("=")[0].strip()
        targets = [a for a in algorithms if a in ("apm-cpgso", "gso", "pso") and key in bench.params_class(a).__dataclass_fields__]
        if not targets:
            raise ConfigurationError(f"parameter {key!r} applies to none of {', '.join(algorithms)}")
        for a in targets:
            out[a].update(bench.parse_params(item, bench.params_class(a)))
    return out


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except ConfigurationError as exc:
        parser.print_usage(sys.stderr)
        print(f"gsocsp: configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    try:
        if args.command == "run":
            params = _split_params(args.params, [args.algo])[args.algo]
            config = _config(args, args.algo, params)
            bench.resolve_instance(config.instance)
            row = bench.run(config)
            print(bench.summary_csv([row]), end="")
        else:
            algos = list(dict.fromkeys(args.algo))
            params = _split_params(args.params, algos)
            configs = [_config(args, a, params[a], shared=True) for a in algos]
            bench.compare(configs)
            out = args.out_dir or os.environ.get(bench.OUT_DIR_ENV, "runs")
            print(f"wrote comparison for {', '.join(algos)} to {out}")
    except (FileNotFoundError, IsADirectoryError, InstanceParseError) as exc:
        print(f"gsocsp: input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except ConfigurationError as exc:
        print(f"gsocsp: configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except Exception as exc:  # noqa: BLE001 - exit-code contract
        log.exception("internal error")
        print(f"gsocsp: internal error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
