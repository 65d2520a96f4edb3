from __future__ import annotations
import argparse
import logging
from pathlib import Path
from typing import List, Optional
import pygsr
from pygsr.graph import (
    DisconnectedGraphError,
    knn_geometric_graph,
    laplacian,
    read_edge_list,
    sample_points,
    write_edge_list,
)
from pygsr.sampling import NonUniqueSamplingSetError, sample_plan
from pygsr.spectral import eigendecompose, write_spectrum_csv
from .config import ConfigError, load_experiment_config, load_sweep_config
from .experiments import run_experiment, run_real_data, run_sweep

logger = logging.getLogger(__name__)

#: The run completed.
EXIT_OK = 0
#: The configuration or the command line is invalid.
EXIT_CONFIG_ERROR = 1
#: A sampling plan is not unique or a run diverged.
EXIT_NUMERICAL_FAILURE = 2


def build_parser() -> argparse.ArgumentParser:
    """
    Builds the parser of the ``pygsr`` command.
    """
    parser = argparse.ArgumentParser(
        prog="pygsr",
        description="Distributed reconstruction of bandlimited graph signals.",
        formatter_class=argparse.ArgumentDefaultsHelpFormatter,
    )
    parser.add_argument("--quiet", action="store_true", help="Only log warnings and errors")
    commands = parser.add_subparsers(dest="command", required=True)

    gen_graph = commands.add_parser("gen-graph", help="Generate a k-nearest-neighbor graph")
    gen_graph.add_argument("--n", type=int, default=100, help="Number of vertices")
    gen_graph.add_argument("--k", type=int, default=4, help="Number of nearest neighbors")
    gen_graph.add_argument("--seed", type=int, default=0, help="Seed of the vertex locations")
    gen_graph.add_argument("--out", type=Path, required=True, help="Edge list to write")
    gen_graph.add_argument("--spectrum", type=Path, help="Optional spectrum CSV to write")

    plan = commands.add_parser("plan", help="Draw a sampling plan for a graph")
    plan.add_argument("--graph", type=Path, required=True, help="Edge list of the graph")
    plan.add_argument("--m", type=int, default=20, help="Number of representatives")
    plan.add_argument("--omega", type=float, help="Explicit cutoff frequency")
    plan.add_argument(
        "--laplacian", choices=["normalized", "unnormalized"], default="normalized"
    )
    plan.add_argument("--seed", type=int, default=0, help="Seed of the sample set")
    plan.add_argument("--max-redraws", type=int, default=10, help="Redraws of the sample set")
    plan.add_argument("--out", type=Path, required=True, help="Plan JSON to write")

    for name, help_text in (
        ("run", "Run an experiment"),
        ("real-data", "Run an experiment on the Intel Lab readings"),
    ):
        command = commands.add_parser(name, help=help_text)
        command.add_argument("config", type=Path, help="Experiment configuration")
        command.add_argument("--out", type=Path, default=Path("results"), help="Output directory")
        command.add_argument("--seed", type=int, help="Overrides the seed of the first run")
        command.add_argument(
            "--mode",
            choices=["message_passing", "closed_form", "centralized"],
            help="Overrides the execution model",
        )
        command.add_argument("--steps", type=int, help="Overrides the number of updates")
        if name == "real-data":
            command.add_argument("--readings", type=Path, help="Overrides the readings file")
            command.add_argument("--locations", type=Path, help="Overrides the locations file")

    sweep = commands.add_parser("sweep", help="Estimate convergence regions")
    sweep.add_argument("config", type=Path, help="Sweep configuration")
    sweep.add_argument("--out", type=Path, default=Path("results"), help="Output directory")
    sweep.add_argument("--seed", type=int, help="Overrides the seed of the first run")
    sweep.add_argument("--jobs", type=int, help="Overrides the number of parallel cells")
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    """
    Entry point of the ``pygsr`` command.

    Args:
        argv: The command line arguments, defaults to ``sys.argv[1:]``.

    Returns:
        The exit status.
    """
    args = build_parser().parse_args(argv)
    if args.quiet:
        pygsr.set_logging_level(logging.WARNING)

    try:
        return _dispatch(args)
    except (ConfigError, FileNotFoundError) as error:
        logger.error("Invalid configuration: %s", error)
        return EXIT_CONFIG_ERROR
    except (NonUniqueSamplingSetError, DisconnectedGraphError) as error:
        logger.error("Numerical failure: %s", error)
        return EXIT_NUMERICAL_FAILURE
    except ValueError as error:
        logger.error("Invalid input: %s", error)
        return EXIT_CONFIG_ERROR


def _dispatch(args: argparse.Namespace) -> int:
    if args.command == "gen-graph":
        graph = knn_geometric_graph(sample_points(args.n, args.seed), args.k)
        write_edge_list(graph, args.out)
        if args.spectrum is not None:
            write_spectrum_csv(eigendecompose(laplacian(graph)), args.spectrum)
        logger.info("Wrote graph with %d vertices and %d edges.", graph.n, len(graph.edges))
        return EXIT_OK

    if args.command == "plan":
        graph = read_edge_list(args.graph)
        result = sample_plan(
            graph,
            args.m,
            args.seed,
            omega=args.omega,
            laplacian_kind=args.laplacian,
            max_redraws=args.max_redraws,
        )
        result.save(args.out)
        return EXIT_OK

    if args.command == "sweep":
        config = load_sweep_config(args.config)
        if args.seed is not None:
            config.base = config.base.with_overrides(seed=args.seed)
        if args.jobs is not None:
            config.n_jobs = args.jobs
        run_sweep(config, args.out)
        return EXIT_OK

    experiment = load_experiment_config(args.config).with_overrides(
        seed=args.seed, mode=args.mode, steps=args.steps
    )
    if args.command == "real-data":
        experiment = experiment.with_overrides(
            readings=str(args.readings) if args.readings else None,
            locations=str(args.locations) if args.locations else None,
        )
        records = run_real_data(experiment, args.out)
    else:
        records = run_experiment(experiment, args.out)

    diverged = [record.label for record in records if record.diverged]
    if diverged:
        logger.error("Runs diverged: %s", ", ".join(diverged))
        return EXIT_NUMERICAL_FAILURE
    return EXIT_OK

