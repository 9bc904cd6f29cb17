"""
Counting Synth - incremental synthesis for games with window counting constraints.

Solves two-player turn-based games in which the players must respect
"at least / at most k out of l own turns" constraints, by growing the
window lengths step by step and reusing winning situations across steps.

Public API:
    - parse_game / load_game: Read game files
    - validate_graph / validate_rationality: Check games
    - run_incremental / run_direct: Synthesize strategies
    - simulate: Play strategies against a random compliant adversary
"""

from .core import (
    IncrementalSynthesizer,
    SynthesisOptions,
    run_direct,
    run_incremental,
    validate_graph,
    validate_rationality,
)
from .domain.models import (
    CountingConstraint,
    Decision,
    GameGraph,
    StrategyMachine,
    SynthesisResult,
    WinningCondition,
)
from .errors import InputError, RationalityError, StateError, SynthesisError
from .io import load_game, parse_game, simulate

__all__ = [
    'CountingConstraint',
    'Decision',
    'GameGraph',
    'IncrementalSynthesizer',
    'InputError',
    'RationalityError',
    'StateError',
    'StrategyMachine',
    'SynthesisError',
    'SynthesisOptions',
    'SynthesisResult',
    'WinningCondition',
    'load_game',
    'parse_game',
    'run_direct',
    'run_incremental',
    'simulate',
    'validate_graph',
    'validate_rationality',
]

__version__ = '1.0.0'
