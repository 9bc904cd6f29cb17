"""
Reports, Strategy Files and Graph Dumps.

Synthesis results are written as JSON ("counting-synth-report/1"),
benchmark rows as CSV, strategies as JSON ("counting-strategy/1") and
situation graphs as networkx node-link JSON.
"""

import csv
import json
import logging
import statistics
from collections.abc import Sequence
from dataclasses import asdict, dataclass
from pathlib import Path
from typing import Any

import networkx as nx

from ..core.situations import SituationGraph
from ..domain.models import (
    BenchRow,
    MachineState,
    Player,
    StrategyMachine,
    SwitchRecord,
    SynthesisResult,
)
from ..errors import InputError

logger = logging.getLogger(__name__)

REPORT_FORMAT = "counting-synth-report/1"
STRATEGY_FORMAT = "counting-strategy/1"
BENCH_FIELDS = ["game", "mode", "decision", "states", "edges", "region", "store", "ms"]


def report_document(result: SynthesisResult) -> dict[str, Any]:
    """Build the JSON report of a synthesis run."""
    report = result.report
    strategy = result.strategy
    return {
        "format": REPORT_FORMAT,
        "decision": result.decision.value,
        "mode": report.mode,
        "final_lengths": dict(result.final_lengths),
        "translated": list(report.translated),
        "ego_constraints": report.ego_constraints,
        "increments": [
            {
                "index": s.index,
                "lengths": dict(s.lengths),
                "situations": s.situations,
                "sink_states": s.sink_states,
                "edges": s.edges,
                "region_size": s.region_size,
                "region_edges": s.region_edges,
                "violating": s.violating,
                "covered": s.covered,
                "store_size": s.store_size,
                "elapsed_ms": round(s.elapsed_ms, 3),
                "elapsed_seconds": round(s.elapsed_seconds, 6),
                "under_approximation": s.under_approximation,
            }
            for s in report.increments
        ],
        "totals": {
            "increments": len(report.increments),
            "full_increments": report.full_increments,
            "elapsed_ms": round(report.total_ms, 3),
            "elapsed_seconds": round(report.total_seconds, 6),
            "final_situations": report.final_situations,
            "final_store_size": report.final_store_size,
        },
        "strategy": (
            None
            if strategy is None
            else {"states": strategy.size, "switches": len(strategy.switches)}
        ),
    }


def _write_text(path: Path, text: str) -> None:
    path = Path(path)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text, encoding="utf-8")
    except OSError as e:
        raise InputError(f"cannot write file: {e.strerror}", str(path)) from None


def write_report(result: SynthesisResult | Sequence[BenchRow], path: Path) -> None:
    """
    Write a synthesis report (JSON) or benchmark rows (CSV).

    Raises:
        InputError: If the path cannot be written.
    """
    path = Path(path)
    if isinstance(result, SynthesisResult):
        _write_text(path, json.dumps(report_document(result), indent=2) + "\n")
        logger.info(f"Report written to {path}")
        return
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, "w", newline="", encoding="utf-8") as f:
            writer = csv.DictWriter(f, fieldnames=BENCH_FIELDS, extrasaction="ignore")
            writer.writeheader()
            for row in result:
                values = asdict(row)
                values["ms"] = f"{row.ms:.3f}"
                writer.writerow(values)
    except OSError as e:
        raise InputError(f"cannot write file: {e.strerror}", str(path)) from None
    logger.info(f"{len(result)} benchmark row(s) written to {path}")


def bench_row(game: str, result: SynthesisResult) -> BenchRow:
    """Summarize a run as a benchmark row."""
    report = result.report
    last = report.increments[-1]
    return BenchRow(
        game=game,
        mode=report.mode,
        decision=result.decision.value,
        states=last.situations,
        edges=last.edges,
        region=last.region_size,
        store=report.final_store_size,
        ms=report.total_ms,
        increments=len(report.increments),
        full_increments=report.full_increments,
    )


@dataclass(frozen=True)
class ReductionSummary:
    """
    State-space reduction of incremental runs against direct runs.

    Attributes:
        ratios: Direct graph size over final incremental graph size,
            per (game, mode)
        saved: Increments saved against running to full length, per (game, mode)
        median_ratio: Median ratio over runs that stopped at least two
            increments before full length (None if there are none)
        early_runs: Number of runs counted in the median
    """

    ratios: dict[tuple[str, str], float]
    saved: dict[tuple[str, str], int]
    median_ratio: float | None
    early_runs: int


def summarize_reduction(rows: Sequence[BenchRow]) -> ReductionSummary:
    """Compare every incremental row with the direct row of its game."""
    direct = {row.game: row for row in rows if row.mode == "direct"}
    ratios: dict[tuple[str, str], float] = {}
    saved: dict[tuple[str, str], int] = {}
    early: list[float] = []
    for row in rows:
        base = direct.get(row.game)
        if row.mode == "direct" or base is None:
            continue
        ratio = base.states / max(row.states, 1)
        ratios[(row.game, row.mode)] = ratio
        saved[(row.game, row.mode)] = row.full_increments - row.increments
        if row.full_increments - row.increments >= 2:
            early.append(ratio)
    median = statistics.median(early) if early else None
    return ReductionSummary(ratios, saved, median, len(early))


def _history_json(history: Sequence[tuple[str, Sequence[int | None]]]) -> list[list[Any]]:
    return [[cid, list(vector)] for cid, vector in history]


def _history_from(entries: list[list[Any]]) -> tuple[tuple[str, tuple[int | None, ...]], ...]:
    return tuple((str(cid), tuple(vector)) for cid, vector in entries)


def strategy_document(machine: StrategyMachine) -> dict[str, Any]:
    """Build the JSON document of a strategy machine."""
    return {
        "format": STRATEGY_FORMAT,
        "initial": machine.initial,
        "lengths": {str(i): dict(lengths) for i, lengths in machine.lengths.items()},
        "states": [
            {
                "id": s.id,
                "owner": s.owner.value,
                "increment": s.increment,
                "state": s.state,
                "history": _history_json(s.history),
                "emit": None if s.emit is None else sorted(s.emit),
                "successors": [
                    {"action": sorted(act), "to": target}
                    for act, target in sorted(
                        s.successors.items(), key=lambda item: (sorted(item[0]), item[1])
                    )
                ],
                "certified": s.certified,
            }
            for s in machine.states
        ],
        "switches": [
            {
                "from_increment": r.from_increment,
                "to_increment": r.to_increment,
                "state": r.state,
                "from_history": _history_json(r.from_history),
                "to_history": _history_json(r.to_history),
            }
            for r in machine.switches
        ],
    }


def save_strategy(machine: StrategyMachine, path: Path) -> None:
    """Write a strategy machine as JSON."""
    _write_text(Path(path), json.dumps(strategy_document(machine), indent=2) + "\n")
    logger.info(f"Strategy with {machine.size} states written to {path}")


def parse_strategy(text: str) -> StrategyMachine:
    """
    Read a strategy machine from its JSON document.

    Raises:
        InputError: On malformed documents.
    """
    try:
        doc = json.loads(text)
        if doc.get("format") != STRATEGY_FORMAT:
            raise InputError(f"unsupported strategy format {doc.get('format')!r}", "format")
        states = []
        for i, entry in enumerate(doc["states"]):
            if entry["id"] != i:
                raise InputError(f"state ids must be dense, got {entry['id']}", f"states[{i}].id")
            emit = entry["emit"]
            states.append(
                MachineState(
                    id=i,
                    owner=Player(entry["owner"]),
                    increment=int(entry["increment"]),
                    state=str(entry["state"]),
                    history=_history_from(entry["history"]),
                    emit=None if emit is None else frozenset(emit),
                    successors={
                        frozenset(move["action"]): int(move["to"])
                        for move in entry["successors"]
                    },
                    certified=bool(entry.get("certified", True)),
                )
            )
        switches = tuple(
            SwitchRecord(
                from_increment=int(r["from_increment"]),
                to_increment=int(r["to_increment"]),
                state=str(r["state"]),
                from_history=_history_from(r["from_history"]),
                to_history=_history_from(r["to_history"]),
            )
            for r in doc.get("switches", [])
        )
        lengths = {int(i): dict(v) for i, v in doc.get("lengths", {}).items()}
        initial = int(doc.get("initial", 0))
    except json.JSONDecodeError as e:
        raise InputError(e.msg, f"line {e.lineno}, column {e.colno}") from None
    except (KeyError, TypeError, ValueError) as e:
        if isinstance(e, InputError):
            raise
        raise InputError(f"malformed strategy document: {e}") from None
    for s in states:
        for target in s.successors.values():
            if not 0 <= target < len(states):
                raise InputError(f"state {s.id} points to unknown state {target}")
    return StrategyMachine(tuple(states), switches, lengths, initial)


def load_strategy(path: Path) -> StrategyMachine:
    """Read a strategy file."""
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise InputError(f"cannot read strategy file: {e.strerror}", str(path)) from None
    return parse_strategy(text)


def dump_situation_graph(graph: SituationGraph, path: Path) -> None:
    """Write a situation graph as node-link JSON."""
    data = nx.node_link_data(graph.to_networkx(), edges="edges")
    _write_text(Path(path), json.dumps(data, indent=2) + "\n")
    logger.info(f"Situation graph with {graph.size} nodes written to {path}")
