"""IO package - file formats, generation, simulation and reporting."""

from .game_file import GameFile, load_game, parse_game, serialize_game
from .generator import GeneratorParams, RandomGameGenerator, generate_random_game
from .reporting import (
    ReductionSummary,
    bench_row,
    dump_situation_graph,
    load_strategy,
    parse_strategy,
    save_strategy,
    summarize_reduction,
    write_report,
)
from .simulator import PlaySimulator, SimulationParams, UniformAdversary, simulate

__all__ = [
    'GameFile',
    'GeneratorParams',
    'PlaySimulator',
    'RandomGameGenerator',
    'ReductionSummary',
    'SimulationParams',
    'UniformAdversary',
    'bench_row',
    'dump_situation_graph',
    'generate_random_game',
    'load_game',
    'load_strategy',
    'parse_game',
    'parse_strategy',
    'save_strategy',
    'serialize_game',
    'simulate',
    'summarize_reduction',
    'write_report',
]
