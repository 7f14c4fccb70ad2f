"""Command line interface.

`influence-graph run` executes the whole pipeline; the stage subcommands
(ingest, reduce, cluster, net-isn, net-ssn, project, metrics, report)
execute one stage each against the shared output directory and, chained
in order with the same configuration, produce the same files as `run`.

Exit codes: 0 success, 2 validation error, 3 computation error.
"""

from __future__ import annotations

import argparse
import sys

from .errors import ComputationError, ValidationError
from .pipeline import PipelineConfig, run_pipeline, run_stage

_STAGE_ALIASES = {
    "net-csn": "net-isn",
    "net-cbn": "net-ssn",
}

_STAGE_COMMANDS = (
    "ingest",
    "reduce",
    "cluster",
    "net-isn",
    "net-ssn",
    "project",
    "metrics",
    "report",
)


def _add_common_options(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", help="JSON config file; flags override its values")
    parser.add_argument("--metadata", help="metadata CSV (artwork_id,artist_id,year)")
    parser.add_argument("--features", help="features CSV (artwork_id,f0..f{d-1})")
    parser.add_argument("--out", help="output directory shared by all stages")
    parser.add_argument("--pca-k", type=int, help="reduced feature dimension (default 100)")
    parser.add_argument("--kmeans-k", type=int, help="number of k-means clusters (default 20)")
    parser.add_argument(
        "--min-cluster-size", type=int,
        help="clusters at most this size fold into 'other' (default 3)",
    )
    parser.add_argument(
        "--percentile", type=float,
        help="similarity percentile kept as edges (default 90)",
    )
    parser.add_argument(
        "--min-works", type=int,
        help="keep only artists with at least this many works (default 100)",
    )
    parser.add_argument("--seed", type=int, help="seed for k-means and communities (default 42)")
    parser.add_argument("--ssn-mode", choices=("pairs", "chain"), help="style-network pairing rule")
    parser.add_argument(
        "--ssn-no-threshold", action="store_true", default=None,
        help="keep every admissible same-cluster pair in the style network",
    )
    parser.add_argument("--d5-window", type=int, help="successor-year window for d5 (default none)")
    parser.add_argument("--threads", type=int, help="worker threads for pair scans (default 1)")
    parser.add_argument("--min-year", type=int, help="lowest plausible year (default 1500)")
    parser.add_argument("--max-year", type=int, help="highest plausible year (default 2100)")


_FLAG_FIELDS = (
    "metadata",
    "features",
    "out",
    "pca_k",
    "kmeans_k",
    "min_cluster_size",
    "percentile",
    "min_works",
    "seed",
    "ssn_mode",
    "d5_window",
    "threads",
    "min_year",
    "max_year",
)


def build_config(args: argparse.Namespace) -> PipelineConfig:
    if args.config:
        config = PipelineConfig.from_file(args.config)
    else:
        config = PipelineConfig(metadata="", features="", out="")
    for name in _FLAG_FIELDS:
        value = getattr(args, name)
        if value is not None:
            setattr(config, name, value)
    if args.ssn_no_threshold:
        config.ssn_threshold = False
    return config


def make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="influence-graph",
        description="Artwork influence networks and disruption metrics.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    run = sub.add_parser("run", help="execute every stage and write the run manifest")
    _add_common_options(run)
    for name in _STAGE_COMMANDS:
        aliases = [a for a, target in _STAGE_ALIASES.items() if target == name]
        stage = sub.add_parser(name, aliases=aliases, help=f"run only the {name} stage")
        _add_common_options(stage)
    return parser


def main(argv=None) -> int:
    args = make_parser().parse_args(argv)
    command = _STAGE_ALIASES.get(args.command, args.command)
    try:
        config = build_config(args)
        if command == "run":
            run_pipeline(config)
        else:
            run_stage(command, config)
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ComputationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    return 0


if __name__ == "__main__":
    sys.exit(main())
