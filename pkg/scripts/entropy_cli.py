"""Command-line front end for the permutation entropy metrics.

    python -m scripts.entropy_cli compute mpeg --input u.csv -m 3 -L 1
    python -m scripts.entropy_cli gen henon --a 1.4 --output henon.csv
    python -m scripts.entropy_cli gen graph --kind complete -p 3 --output k3.csv
    python -m scripts.entropy_cli repro henon-sweep --output sweep.csv

``compute`` prints one JSON object on stdout; logs go to stderr.  Exit codes:
0 success, 1 usage error, 2 computation error, 3 I/O or parse error.
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path
from typing import Sequence

from prometheus_client import generate_latest

from graphpe.config import get_settings
from graphpe.logger import setup_logging
from graphpe.models import ErrorCode, RunResult, exit_code_for
from graphpe.services.dynamics import HenonParams, LorenzParams, henon, lorenz
from graphpe.services.entropy import (
    EntropyParams,
    graph_pattern_counts,
    multivariate_graph_pattern_counts,
    observe_computation,
    pattern_counts,
    pooled_pattern_counts,
)
from graphpe.services.errors import GraphPEError, UsageError
from graphpe.services.graphs import GRAPH_KINDS, graph_from_matrix, graph_from_spec
from graphpe.services.ordinal import PatternDistribution, missing_patterns, normalized_shannon
from graphpe.services.signals import (
    MultivariateSignal,
    load_adjacency,
    load_interaction_graph,
    load_signal,
    save_adjacency,
    save_signal,
)
from graphpe.services.sweeps import (
    henon_orbit_diagram,
    henon_sweep,
    lorenz_table,
    write_table,
)

logger = logging.getLogger("entropy_cli")

METRICS = ("pe", "peg", "mmspe", "mpeg")


class _Parser(argparse.ArgumentParser):
    """ArgumentParser reporting usage problems with exit code 1."""

    def error(self, message: str) -> None:  # type: ignore[override]
        self.print_usage(sys.stderr)
        self.exit(
            exit_code_for(ErrorCode.USAGE_ERROR),
            f"error[{ErrorCode.USAGE_ERROR.value}]: {message}\n",
        )


# --------------------------------------------------------------------------- #
# compute
# --------------------------------------------------------------------------- #
def _interaction_graph(args: argparse.Namespace, signal: MultivariateSignal):
    if args.graph and args.graph_kind:
        raise UsageError("--graph and --graph-kind are mutually exclusive")
    if args.graph_kind:
        return graph_from_spec(args.graph_kind, signal.channels), f"kind:{args.graph_kind}"
    if args.graph:
        return load_interaction_graph(args.graph, signal.channels), str(args.graph)
    return load_interaction_graph(None, signal.channels), "complete (default)"


def _pattern_distribution(
    args: argparse.Namespace,
    signal: MultivariateSignal,
    params: EntropyParams,
    metadata: dict[str, str],
) -> PatternDistribution:
    if args.metric == "pe":
        if args.channel is None:
            if signal.channels > 1:
                raise UsageError(
                    f"pe needs --channel for a signal with {signal.channels} channels"
                )
            selector: str | int = 1
        else:
            selector = args.channel
        index = signal.channel_index(selector)
        metadata["channel"] = str(index + 1)
        return pattern_counts(signal.channel(index), params)
    if args.metric == "peg":
        if not args.graph:
            raise UsageError("peg needs --graph with an adjacency over all samples")
        graph = graph_from_matrix(load_adjacency(args.graph))
        metadata["graph"] = str(args.graph)
        return graph_pattern_counts(graph, signal.vertex_signal(), params)
    if args.metric == "mmspe":
        return pooled_pattern_counts(signal, params)
    interaction, label = _interaction_graph(args, signal)
    metadata["graph"] = label
    return multivariate_graph_pattern_counts(signal, interaction, params)


def cmd_compute(args: argparse.Namespace) -> RunResult:
    params = EntropyParams(m=args.m, L=args.L)
    signal = load_signal(args.input)
    metadata = {
        "input": str(args.input),
        "channels": str(signal.channels),
        "samples": str(signal.length),
    }

    with observe_computation(args.metric):
        dist = _pattern_distribution(args, signal, params, metadata)
        value = normalized_shannon(dist, params.m)

    metadata["missing_patterns"] = str(missing_patterns(dist))
    result = RunResult(
        metric=args.metric,
        m=params.m,
        L=params.L,
        value=value,
        pattern_count=dist.total,
        metadata=metadata,
    )
    logger.info(
        "compute.done metric=%s m=%s L=%s value=%.6f patterns=%s",
        result.metric,
        result.m,
        result.L,
        result.value,
        result.pattern_count,
    )
    return result


# --------------------------------------------------------------------------- #
# gen
# --------------------------------------------------------------------------- #
def _henon_params(args: argparse.Namespace, *, a: float | None = None) -> HenonParams:
    return HenonParams(
        a=args.a if a is None else a,
        b=args.b,
        x0=args.x0,
        y0=args.y0,
        n=args.n,
        transient=args.transient,
    )


def _lorenz_params(args: argparse.Namespace, *, rho: float | None = None) -> LorenzParams:
    return LorenzParams(
        sigma=args.sigma,
        rho=args.rho if rho is None else rho,
        beta=args.beta,
        init=tuple(args.init),
        dt=args.dt,
        steps=args.steps,
        transient=args.transient,
    )


def cmd_gen(args: argparse.Namespace) -> Path:
    if args.system == "graph":
        graph = graph_from_spec(args.kind, args.p)
        path = save_adjacency(graph, args.output)
        logger.info(
            "gen.done system=graph kind=%s vertices=%s arcs=%s output=%s",
            args.kind,
            graph.num_vertices,
            graph.num_arcs,
            path,
        )
        return path
    if args.system == "henon":
        signal = henon(_henon_params(args))
    else:
        signal = lorenz(_lorenz_params(args))
    path = save_signal(signal, args.output)
    logger.info(
        "gen.done system=%s channels=%s samples=%s output=%s",
        args.system,
        signal.channels,
        signal.length,
        path,
    )
    return path


# --------------------------------------------------------------------------- #
# repro
# --------------------------------------------------------------------------- #
def cmd_repro_henon(args: argparse.Namespace) -> Path:
    frame = henon_sweep(
        a_min=args.a_min,
        a_max=args.a_max,
        step=args.step,
        params=EntropyParams(m=args.m, L=args.L),
        base=_henon_params(args, a=args.a_min),
        workers=args.workers,
    )
    return write_table(frame, args.output)


def cmd_repro_orbit(args: argparse.Namespace) -> Path:
    frame = henon_orbit_diagram(
        a_min=args.a_min,
        a_max=args.a_max,
        step=args.step,
        keep=args.keep,
        base=_henon_params(args, a=args.a_min),
    )
    return write_table(frame, args.output)


def cmd_repro_lorenz(args: argparse.Namespace) -> Path:
    frame = lorenz_table(
        rhos=args.rhos,
        ms=args.ms,
        L=args.L,
        base=_lorenz_params(args, rho=args.rhos[0]),
        workers=args.workers,
    )
    return write_table(frame, args.output)


# --------------------------------------------------------------------------- #
# Parser
# --------------------------------------------------------------------------- #
def _add_henon_flags(parser: argparse.ArgumentParser, *, with_a: bool) -> None:
    if with_a:
        parser.add_argument("--a", type=float, default=1.4, help="map parameter a")
    parser.add_argument("--b", type=float, default=0.3, help="map parameter b")
    parser.add_argument("--x0", type=float, default=0.5, help="initial x")
    parser.add_argument("--y0", type=float, default=0.1, help="initial y")
    parser.add_argument("-n", type=int, default=100, help="samples per orbit")
    parser.add_argument(
        "--transient", type=int, default=0, help="iterates discarded before sampling"
    )


def _add_lorenz_flags(parser: argparse.ArgumentParser, *, with_rho: bool) -> None:
    settings = get_settings()
    parser.add_argument("--sigma", type=float, default=10.0)
    if with_rho:
        parser.add_argument("--rho", type=float, default=28.0)
    parser.add_argument("--beta", type=float, default=8.0 / 3.0)
    parser.add_argument(
        "--init",
        type=float,
        nargs=3,
        default=[1.0, 1.0, 1.0],
        metavar=("X", "Y", "Z"),
        help="initial state",
    )
    parser.add_argument("--dt", type=float, default=settings.lorenz_dt, help="RK4 step")
    parser.add_argument(
        "--steps", type=int, default=settings.lorenz_steps, help="samples including transient"
    )
    parser.add_argument(
        "--transient",
        type=int,
        default=settings.lorenz_transient,
        help="leading samples discarded",
    )


def _add_grid_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--a-min", type=float, default=1.0)
    parser.add_argument("--a-max", type=float, default=1.4)
    parser.add_argument("--step", type=float, default=0.0001)


def _build_parser() -> argparse.ArgumentParser:
    settings = get_settings()
    parser = _Parser(description="Permutation entropy for time series and graph signals")
    parser.add_argument("--log-level", default=settings.log_level, help="logging level")
    parser.add_argument(
        "--metrics",
        action="store_true",
        help="dump prometheus metrics to stderr after the command",
    )
    commands = parser.add_subparsers(dest="command", required=True)

    compute = commands.add_parser("compute", help="evaluate one metric on a signal file")
    compute.add_argument("metric", choices=METRICS)
    compute.add_argument("--input", type=Path, required=True, help="signal CSV")
    compute.add_argument("--graph", type=Path, help="adjacency CSV")
    compute.add_argument(
        "--graph-kind",
        choices=GRAPH_KINDS,
        help="built-in interaction graph for mpeg",
    )
    compute.add_argument("--channel", help="channel number (1-based) or name for pe")
    compute.add_argument("-m", type=int, default=3, help="embedding dimension")
    compute.add_argument("-L", type=int, default=1, help="delay")
    compute.set_defaults(handler=cmd_compute)

    gen = commands.add_parser("gen", help="write a synthetic signal CSV")
    systems = gen.add_subparsers(dest="system", required=True)
    gen_henon = systems.add_parser("henon", help="Hénon map orbit")
    _add_henon_flags(gen_henon, with_a=True)
    gen_henon.add_argument("--output", type=Path, required=True)
    gen_lorenz = systems.add_parser("lorenz", help="Lorenz trajectory (RK4)")
    _add_lorenz_flags(gen_lorenz, with_rho=True)
    gen_lorenz.add_argument("--output", type=Path, required=True)
    gen_graph = systems.add_parser("graph", help="adjacency CSV of a built-in graph")
    gen_graph.add_argument("--kind", choices=GRAPH_KINDS, default="complete")
    gen_graph.add_argument("-p", type=int, required=True, help="number of vertices")
    gen_graph.add_argument("--output", type=Path, required=True)
    gen.set_defaults(handler=cmd_gen)

    repro = commands.add_parser("repro", help="run a reproduction experiment")
    experiments = repro.add_subparsers(dest="experiment", required=True)

    sweep = experiments.add_parser("henon-sweep", help="entropies over a grid of a")
    _add_grid_flags(sweep)
    _add_henon_flags(sweep, with_a=False)
    sweep.add_argument("-m", type=int, default=3)
    sweep.add_argument("-L", type=int, default=1)
    sweep.add_argument("--workers", type=int, default=settings.sweep_workers)
    sweep.add_argument("--output", type=Path, required=True)
    sweep.set_defaults(handler=cmd_repro_henon)

    orbit = experiments.add_parser("henon-orbit", help="orbit diagram point cloud")
    _add_grid_flags(orbit)
    _add_henon_flags(orbit, with_a=False)
    orbit.add_argument("--keep", type=int, default=50, help="iterates kept per a")
    orbit.add_argument("--output", type=Path, required=True)
    orbit.set_defaults(handler=cmd_repro_orbit)

    table = experiments.add_parser("lorenz-table", help="MPE_G table over rho and m")
    table.add_argument("--rhos", type=float, nargs="+", default=[0.8, 0.9, 1.2, 1.3])
    table.add_argument("--ms", type=int, nargs="+", default=[3, 4, 5, 6, 7])
    table.add_argument("-L", type=int, default=1)
    _add_lorenz_flags(table, with_rho=False)
    table.add_argument("--workers", type=int, default=settings.sweep_workers)
    table.add_argument("--output", type=Path, required=True)
    table.set_defaults(handler=cmd_repro_lorenz)

    return parser


def main(argv: Sequence[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    setup_logging(args.log_level, json_format=get_settings().log_json)
    try:
        outcome = args.handler(args)
    except GraphPEError as exc:
        logger.debug("command failed", exc_info=True)
        print(f"error[{exc.code.value}]: {exc}", file=sys.stderr)
        return exit_code_for(exc.code)
    except OSError as exc:
        print(f"error[{ErrorCode.IO_ERROR.value}]: {exc}", file=sys.stderr)
        return exit_code_for(ErrorCode.IO_ERROR)
    finally:
        if args.metrics:
            sys.stderr.write(generate_latest().decode("utf-8"))

    if isinstance(outcome, RunResult):
        print(outcome.to_json())
    else:
        logger.info("output written path=%s", outcome)
    return 0


if __name__ == "__main__":
    sys.exit(main())
