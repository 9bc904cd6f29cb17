"""Domain package - immutable value objects."""

from .formula import FALSE, TRUE, And, Const, Formula, Not, Or, Var
from .models import (
    Action,
    BenchRow,
    ConstraintKind,
    CountingConstraint,
    Decision,
    Entry,
    Flag,
    GameGraph,
    HistoryVector,
    IncrementMode,
    IncrementStats,
    InitMode,
    MachineState,
    Player,
    Prefix,
    RunOutcome,
    RunReport,
    SimulationReport,
    Sink,
    Situation,
    StrategyMachine,
    SwitchRecord,
    SynthesisResult,
    Transition,
    ValidationReport,
    Verdict,
    Violation,
    WindowVerdict,
    WinKind,
    WinningCondition,
)

__all__ = [
    'Action',
    'And',
    'BenchRow',
    'Const',
    'ConstraintKind',
    'CountingConstraint',
    'Decision',
    'Entry',
    'FALSE',
    'Flag',
    'Formula',
    'GameGraph',
    'HistoryVector',
    'IncrementMode',
    'IncrementStats',
    'InitMode',
    'MachineState',
    'Not',
    'Or',
    'Player',
    'Prefix',
    'RunOutcome',
    'RunReport',
    'SimulationReport',
    'Sink',
    'Situation',
    'StrategyMachine',
    'SwitchRecord',
    'SynthesisResult',
    'TRUE',
    'Transition',
    'ValidationReport',
    'Var',
    'Verdict',
    'Violation',
    'WindowVerdict',
    'WinKind',
    'WinningCondition',
]
