"""Command-line entry point: ``python -m hybridfv {run,sweep,compare,alpha-scan} CONFIG``.

Exit codes: 0 success, 2 configuration error, 3 stability error, 4 invariant
violation. The output directory comes from ``--output-dir``, the config's
``output.dir`` key or the ``HYBRIDFV_OUTPUT_DIR`` environment variable.
"""
from __future__ import annotations

import argparse
import sys

from .config import apply_overrides, load_config
from .errors import ConfigurationError, InvariantViolation, NumericalError, StabilityError
from .experiments import alpha_scan, compare_schemes, convergence_sweep, format_sweep_table, run_case

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_STABILITY = 3
EXIT_INVARIANT = 4


def _list(cast):
    def parse(text):
        try:
            return [cast(s) for s in text.split(",") if s.strip()]
        except ValueError as exc:
            raise argparse.ArgumentTypeError(str(exc)) from None

    return parse


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="hybridfv", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("config", help="YAML run configuration")
        p.add_argument("--output-dir", help="directory for CSV output")
        p.add_argument("--set", action="append", default=[], metavar="KEY=VALUE", help="override a config key")
        p.add_argument("--scheme")
        p.add_argument("--n-cells", type=int)
        p.add_argument("--t-end", type=float)
        p.add_argument("--alpha", type=float)
        p.add_argument("--cfl", type=float)
        return p

    common(sub.add_parser("run", help="run one configuration"))
    common(sub.add_parser("sweep", help="grid convergence study")).add_argument(
        "--resolutions", type=_list(int), required=True, help="e.g. 200,400,800"
    )
    common(sub.add_parser("compare", help="run several schemes on one setup")).add_argument(
        "--schemes", type=_list(str), default=["adm", "weno", "hybrid"]
    )
    common(sub.add_parser("alpha-scan", help="hybrid runs over several alpha values")).add_argument(
        "--alphas", type=_list(float), default=[0.65, 0.75, 0.85]
    )
    return parser


def _config(args):
    cfg = load_config(args.config)
    overrides = list(args.set)
    for key, attr in (("scheme", "scheme"), ("n_cells", "n_cells"), ("t_end", "t_end"), ("alpha", "alpha"), ("cfl", "cfl")):
        value = getattr(args, attr)
        if value is not None:
            overrides.append(f"{key}={value}")
    return apply_overrides(cfg, overrides) if overrides else cfg


def _summary(result) -> str:
    cfg = result.config
    last = max(r.time for r in result.records)
    parts = [f"{r.metric}={r.value:.6g}" for r in result.records if r.time == last]
    return f"{cfg.label} t={last:g}: " + " ".join(parts)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = _config(args)
        out = args.output_dir
        if args.command == "run":
            print(_summary(run_case(cfg, out)))
        elif args.command == "sweep":
            rows = convergence_sweep(cfg, args.resolutions, out)
            print(format_sweep_table(rows, title=cfg.label))
        elif args.command == "compare":
            for result in compare_schemes(cfg, args.schemes, out).values():
                print(_summary(result))
        else:
            for result in alpha_scan(cfg, args.alphas, out).values():
                print(_summary(result))
    except (ConfigurationError, NumericalError) as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except StabilityError as exc:
        print(f"stability error: {exc}", file=sys.stderr)
        return EXIT_STABILITY
    except InvariantViolation as exc:
        print(f"invariant violation: {exc}", file=sys.stderr)
        return EXIT_INVARIANT
    return EXIT_OK


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
