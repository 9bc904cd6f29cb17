"""Core package - synthesis algorithms."""

from .arena import Arena, Edge
from .constraints import (
    WindowMonitor,
    check_constraints,
    monitor_prefix,
    translate_max_to_min,
    window_satisfied,
)
from .engine import (
    IncrementalSynthesizer,
    IncrementSchedule,
    SynthesisOptions,
    advance_lengths,
    full_schedule,
    initialize_lengths,
    run_direct,
    run_incremental,
)
from .formula import eval_formula, parse_formula
from .lifting import LiftedGame, lift_winning_condition
from .situations import (
    ConstraintLayout,
    SituationGraph,
    SituationGraphBuilder,
    build_situation_graph,
    is_extension,
    situation_satisfies,
    update_history,
)
from .solvers import (
    Attractor,
    LiftedGameSolver,
    Region,
    RegionSolver,
    ZielonkaSolver,
    attractor,
    parity_partition,
    solve_lifted,
    strategy_is_closed,
)
from .store import IncrementCertificate, WinningStore, store_insert
from .strategy import StrategyExtractor, extract_strategy
from .validator import validate_graph, validate_rationality

__all__ = [
    'Arena',
    'Attractor',
    'ConstraintLayout',
    'Edge',
    'IncrementCertificate',
    'IncrementSchedule',
    'IncrementalSynthesizer',
    'LiftedGame',
    'LiftedGameSolver',
    'Region',
    'RegionSolver',
    'SituationGraph',
    'SituationGraphBuilder',
    'StrategyExtractor',
    'SynthesisOptions',
    'WindowMonitor',
    'WinningStore',
    'ZielonkaSolver',
    'advance_lengths',
    'attractor',
    'build_situation_graph',
    'check_constraints',
    'eval_formula',
    'extract_strategy',
    'full_schedule',
    'initialize_lengths',
    'is_extension',
    'lift_winning_condition',
    'monitor_prefix',
    'parity_partition',
    'parse_formula',
    'run_direct',
    'run_incremental',
    'situation_satisfies',
    'solve_lifted',
    'store_insert',
    'strategy_is_closed',
    'translate_max_to_min',
    'update_history',
    'validate_graph',
    'validate_rationality',
]
