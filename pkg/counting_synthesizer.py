#!/usr/bin/env python3
"""
Counting Synthesizer.

Synthesizes controllers for two-player games with window counting
constraints ("at least / at most k out of l own turns") by incremental
synthesis: constraint lengths grow one step at a time and winning
situations found on the way are reused.

Usage:
    python counting_synthesizer.py [--verbose] [--log-dir DIR] <command> [options]

Examples:
    # Check a game and the adversary's rationality
    python counting_synthesizer.py validate games/iteration_example.json

    # Incremental synthesis, saving the report and the strategy
    python counting_synthesizer.py solve games/iteration_example.json \\
        --report-out out/report.json --strategy-out out/strategy.json

    # Direct synthesis at full lengths for comparison
    python counting_synthesizer.py solve games/iteration_example.json --mode direct

    # Play a saved strategy against the random compliant adversary
    python counting_synthesizer.py simulate games/iteration_example.json \\
        --strategy out/strategy.json --steps 1000 --runs 100 --seed 7

    # Benchmark 20 random games in 4 worker processes
    python counting_synthesizer.py bench --states 8 --constraints 2 --count 20 \\
        --min-l 5 --max-l 7 --workers 4 --out out/bench.csv

    # Dump the situation graph at chosen lengths
    python counting_synthesizer.py dump games/iteration_example.json --lengths c1=2 \\
        --out out/graph.json
"""

import argparse
import logging
import sys
from concurrent.futures import ProcessPoolExecutor
from datetime import datetime
from pathlib import Path

from counting_synth.core import (
    IncrementalSynthesizer,
    LiftedGameSolver,
    SynthesisOptions,
    ZielonkaSolver,
    build_situation_graph,
    validate_graph,
    validate_rationality,
)
from counting_synth.core.store import IncrementCertificate
from counting_synth.domain.models import (
    BenchRow,
    IncrementMode,
    InitMode,
    SynthesisResult,
    WinKind,
)
from counting_synth.errors import GenerationError, InputError, SynthesisError
from counting_synth.io import (
    GeneratorParams,
    PlaySimulator,
    SimulationParams,
    bench_row,
    dump_situation_graph,
    generate_random_game,
    load_game,
    load_strategy,
    save_strategy,
    summarize_reduction,
    write_report,
)

logger = logging.getLogger(__name__)

RULE = "=" * 80


def configure_logging(verbose: bool, log_dir: Path | None) -> None:
    """Configure console (and optional file) logging for the CLI."""
    formatter = logging.Formatter('%(asctime)s - %(levelname)s - %(message)s')

    console_handler = logging.StreamHandler()
    console_handler.setLevel(logging.DEBUG if verbose else logging.INFO)
    console_handler.setFormatter(formatter)
    handlers: list[logging.Handler] = [console_handler]

    if log_dir is not None:
        log_dir.mkdir(parents=True, exist_ok=True)
        log_filename = f"counting_synth_{datetime.now().strftime('%Y%m%d_%H%M%S')}.log"
        file_handler = logging.FileHandler(log_dir / log_filename, encoding='utf-8')
        file_handler.setLevel(logging.DEBUG)
        file_handler.setFormatter(formatter)
        handlers.append(file_handler)

    logging.basicConfig(level=logging.DEBUG, handlers=handlers, force=True)
    if log_dir is not None:
        logger.info(f"Log file: {log_dir / log_filename}")


def build_parser() -> argparse.ArgumentParser:
    """Build the argument parser."""
    parser = argparse.ArgumentParser(
        description='Incremental synthesis for games with window counting constraints',
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog=__doc__,
    )
    parser.add_argument('--verbose', action='store_true', help='Log debug details')
    parser.add_argument('--log-dir', type=Path, default=None, help='Also log to a file here')
    commands = parser.add_subparsers(dest='command', required=True)

    validate = commands.add_parser('validate', help='Check a game file')
    validate.add_argument('game', type=Path, help='Game file')

    solve = commands.add_parser('solve', help='Synthesize a strategy')
    solve.add_argument('game', type=Path, help='Game file')
    solve.add_argument('--mode', choices=['incremental', 'direct'], default='incremental')
    solve.add_argument(
        '--order',
        choices=[m.value for m in IncrementMode],
        default=IncrementMode.SEQUENTIAL.value,
        help='Which constraint grows next (default: sequential)',
    )
    solve.add_argument(
        '--init',
        choices=[m.value for m in InitMode],
        default=InitMode.MINIMAL.value,
        help='Starting lengths (default: minimal)',
    )
    solve.add_argument(
        '--no-translate',
        action='store_true',
        help='Keep EGO max constraints at full length instead of translating them',
    )
    solve.add_argument(
        '--solver',
        choices=['dedicated', 'zielonka'],
        default='dedicated',
        help='Region solver for Büchi, co-Büchi and parity games (default: dedicated)',
    )
    solve.add_argument('--report-out', type=Path, default=None, help='JSON report path')
    solve.add_argument('--strategy-out', type=Path, default=None, help='Strategy JSON path')
    solve.add_argument(
        '--graph-out', type=Path, default=None, help='Directory for per-increment graph dumps'
    )

    simulate = commands.add_parser('simulate', help='Simulate plays of a strategy')
    simulate.add_argument('game', type=Path, help='Game file')
    simulate.add_argument(
        '--strategy',
        type=Path,
        default=None,
        help='Strategy file (omit to synthesize one incrementally)',
    )
    simulate.add_argument('--steps', type=int, default=200, help='Turns per play (default: 200)')
    simulate.add_argument('--runs', type=int, default=1, help='Number of plays (default: 1)')
    simulate.add_argument('--seed', type=int, default=0, help='Random seed (default: 0)')

    bench = commands.add_parser('bench', help='Benchmark random games')
    bench.add_argument('--states', type=int, default=8, help='States per game (default: 8)')
    bench.add_argument(
        '--constraints', type=int, default=2, help='EGO constraints per game (default: 2)'
    )
    bench.add_argument('--seed', type=int, default=0, help='Seed of the first game (default: 0)')
    bench.add_argument('--count', type=int, default=10, help='Number of games (default: 10)')
    bench.add_argument('--branching', type=int, default=2, help='Moves per state (default: 2)')
    bench.add_argument('--min-l', type=int, default=1, help='Smallest window length')
    bench.add_argument('--max-l', type=int, default=4, help='Largest window length')
    bench.add_argument('--max-k', type=int, default=2, help='Largest count bound')
    bench.add_argument(
        '--win',
        choices=[k.value for k in WinKind],
        default=None,
        help='Winning condition kind (default: random per game)',
    )
    bench.add_argument('--workers', type=int, default=1, help='Worker processes (default: 1)')
    bench.add_argument('--out', type=Path, default=None, help='CSV output path')

    dump = commands.add_parser('dump', help='Dump a situation graph')
    dump.add_argument('game', type=Path, help='Game file')
    dump.add_argument(
        '--lengths',
        nargs='*',
        default=[],
        metavar='ID=L',
        help='Window lengths to use (others stay at full length)',
    )
    dump.add_argument('--out', type=Path, required=True, help='Node-link JSON output path')
    return parser


def print_result(result: SynthesisResult) -> None:
    """Print a run summary."""
    report = result.report
    print(RULE)
    print(f"Decision: {result.decision.value}")
    print(f"  Mode: {report.mode}")
    if report.translated:
        print(f"  Translated: {', '.join(report.translated)}")
    for stats in report.increments:
        lengths = ", ".join(f"{cid}={length}" for cid, length in stats.lengths.items())
        marker = " (under-approximation)" if stats.under_approximation else ""
        print(
            f"  [{stats.index}] {lengths or '-'}: {stats.situations} situations, "
            f"{stats.edges} edges, region {stats.region_size}{marker}, "
            f"store {stats.store_size}, {stats.elapsed_ms:.1f} ms"
        )
    print(f"  Total: {len(report.increments)} increment(s), {report.total_seconds:.3f} s")
    if result.strategy is not None:
        print(
            f"  Strategy: {result.strategy.size} states, "
            f"{len(result.strategy.switches)} switch rule(s)"
        )
    print(RULE)


def command_validate(args: argparse.Namespace) -> int:
    game, win, constraints = load_game(args.game)
    graph_report = validate_graph(game)
    rational = validate_rationality(game, constraints)
    print(RULE)
    print(f"Game: {args.game}")
    print(f"  States: {game.state_count}")
    print(f"  Transitions: {game.transition_count}")
    print(f"  Constraints: {len(constraints)}")
    print(f"  Winning condition: {win.kind.value}")
    print(f"  Graph: {graph_report.summary()}")
    print(f"  Rationality: {'valid' if rational.valid else 'invalid'}")
    for violation in rational.violations:
        print(f"    - {violation.rule}: {violation.message}")
    print(RULE)
    if not rational.valid:
        logger.error(f"Game {args.game} violates adversary rationality")
        return 1
    return 0


def command_solve(args: argparse.Namespace) -> int:
    game, win, constraints = load_game(args.game)
    options = SynthesisOptions(
        translate=not args.no_translate,
        init=InitMode(args.init),
        mode=IncrementMode(args.order),
    )
    solver = ZielonkaSolver() if args.solver == 'zielonka' else LiftedGameSolver()

    graph_dir: Path | None = args.graph_out

    def dump_increment(certificate: IncrementCertificate) -> None:
        assert graph_dir is not None
        dump_situation_graph(
            certificate.graph, graph_dir / f"increment_{certificate.index:03d}.json"
        )

    synthesizer = IncrementalSynthesizer(
        solver, on_increment=dump_increment if graph_dir is not None else None
    )
    if args.mode == 'direct':
        result = synthesizer.run_direct(game, win, constraints, options)
    else:
        result = synthesizer.run(game, win, constraints, options)

    print_result(result)
    if args.report_out is not None:
        write_report(result, args.report_out)
    if args.strategy_out is not None:
        if result.strategy is None:
            logger.warning("No strategy to save: game is not winnable")
        else:
            save_strategy(result.strategy, args.strategy_out)
    return 0


def command_simulate(args: argparse.Namespace) -> int:
    game, win, constraints = load_game(args.game)
    if args.strategy is not None:
        strategy = load_strategy(args.strategy)
    else:
        result = IncrementalSynthesizer().run(game, win, constraints)
        if result.strategy is None:
            logger.error(f"Game {args.game} is not winnable; nothing to simulate")
            return 1
        strategy = result.strategy

    params = SimulationParams(args.steps, args.runs, args.seed)
    report = PlaySimulator(game, win, constraints).run(strategy, params)
    print(RULE)
    print("Simulation:")
    print(f"  Runs: {len(report.runs)} x {report.steps} steps (seed {report.seed})")
    print(f"  EGO constraint violations: {report.ego_violation_count}")
    print(f"  ADV constraint violations: {report.adv_violation_count}")
    print(f"  Unsafe visits: {report.unsafe_visits}")
    print(f"  Region exits: {report.region_exits}")
    print(RULE)
    return 0 if report.ego_violation_count == 0 else 1


def bench_game(job: tuple[str, GeneratorParams]) -> list[BenchRow]:
    """Run one generated game in all three modes."""
    name, params = job
    game, win, constraints = generate_random_game(params)
    synthesizer = IncrementalSynthesizer()
    rows = []
    for mode in IncrementMode:
        result = synthesizer.run(game, win, constraints, SynthesisOptions(mode=mode))
        rows.append(bench_row(name, result))
    rows.append(bench_row(name, synthesizer.run_direct(game, win, constraints)))
    return rows


def command_bench(args: argparse.Namespace) -> int:
    jobs = [
        (
            f"game_{args.seed + i:04d}",
            GeneratorParams(
                state_count=args.states,
                branching=args.branching,
                constraint_count=args.constraints,
                max_k=args.max_k,
                min_l=args.min_l,
                max_l=args.max_l,
                win_kind=WinKind(args.win) if args.win else None,
                seed=args.seed + i,
            ),
        )
        for i in range(args.count)
    ]

    rows: list[BenchRow] = []
    failed = 0
    if args.workers > 1:
        with ProcessPoolExecutor(max_workers=args.workers) as pool:
            futures = [(name, pool.submit(bench_game, (name, p))) for name, p in jobs]
            for name, future in futures:
                try:
                    rows.extend(future.result())
                except GenerationError as e:
                    logger.warning(f"Skipping {name}: {e}")
                    failed += 1
    else:
        for job in jobs:
            try:
                rows.extend(bench_game(job))
            except GenerationError as e:
                logger.warning(f"Skipping {job[0]}: {e}")
                failed += 1

    if args.out is not None:
        write_report(rows, args.out)

    summary = summarize_reduction(rows)
    print(RULE)
    print("Benchmark:")
    print(f"  Games: {len(jobs) - failed} ({failed} skipped)")
    print(f"  Rows: {len(rows)}")
    for (game_name, mode), ratio in sorted(summary.ratios.items()):
        print(
            f"  {game_name} {mode}: {ratio:.2f}x smaller, "
            f"{summary.saved[(game_name, mode)]} increment(s) saved"
        )
    if summary.median_ratio is None:
        print("  Median reduction: n/a (no run stopped two increments early)")
    else:
        print(f"  Median reduction: {summary.median_ratio:.2f}x over {summary.early_runs} run(s)")
    print(RULE)
    return 0


def parse_lengths(items: list[str]) -> dict[str, int]:
    """Parse ID=L pairs."""
    lengths = {}
    for item in items:
        cid, sep, value = item.partition('=')
        if not sep or not value.isdigit():
            raise InputError(f"expected ID=L, got {item!r}", '--lengths')
        lengths[cid] = int(value)
    return lengths


def command_dump(args: argparse.Namespace) -> int:
    game, _, constraints = load_game(args.game)
    lengths = parse_lengths(args.lengths)
    known = {c.id for c in constraints}
    unknown = set(lengths) - known
    if unknown:
        raise InputError(f"unknown constraint ids: {sorted(unknown)}", '--lengths')
    current = [c.with_length(lengths[c.id]) if c.id in lengths else c for c in constraints]
    graph = build_situation_graph(game, current)
    dump_situation_graph(graph, args.out)
    print(RULE)
    print(f"Situation graph: {graph.situation_count} situations, {graph.edge_count} edges")
    print(f"  Written to: {args.out}")
    print(RULE)
    return 0


COMMANDS = {
    'validate': command_validate,
    'solve': command_solve,
    'simulate': command_simulate,
    'bench': command_bench,
    'dump': command_dump,
}


def main(argv: list[str] | None = None) -> int:
    """Main entry point."""
    args = build_parser().parse_args(argv)
    configure_logging(args.verbose, args.log_dir)
    sys.setrecursionlimit(max(sys.getrecursionlimit(), 100000))

    try:
        return COMMANDS[args.command](args)
    except SynthesisError as e:
        logger.error(str(e))
        return 1


if __name__ == '__main__':
    sys.exit(main())
