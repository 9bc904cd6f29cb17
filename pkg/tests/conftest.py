"""Shared fixtures: example games and small hand-built arenas."""

from pathlib import Path

import pytest

from counting_synth.core.lifting import lift_winning_condition
from counting_synth.core.situations import build_situation_graph
from counting_synth.core.solvers import solve_lifted
from counting_synth.core.store import IncrementCertificate, WinningStore
from counting_synth.domain.formula import Var
from counting_synth.domain.models import (
    ConstraintKind,
    CountingConstraint,
    GameGraph,
    Player,
    Transition,
)
from counting_synth.io import GameFile, load_game

GAMES_DIR = Path(__file__).parent.parent / "games"


def make_game(
    ego: list[str],
    adv: list[str],
    moves: list[tuple[str, str, str]],
    ego_letters: str = "",
    adv_letters: str = "",
    initial: str | None = None,
) -> GameGraph:
    """
    Build a game graph from compact move triples.

    Moves are (source, letters, target) with letters as a string, one
    character per letter ("" for the empty action).
    """
    states = tuple(sorted(ego + adv, key=lambda s: (len(s), s)))
    owner = {s: Player.EGO for s in ego} | {s: Player.ADV for s in adv}
    transitions = tuple(Transition(s, frozenset(letters), t) for s, letters, t in moves)
    return GameGraph(
        states,
        owner,
        initial or ego[0],
        frozenset(ego_letters),
        frozenset(adv_letters),
        transitions,
    )


def cc(
    cid: str,
    player: Player,
    kind: ConstraintKind,
    letter: str,
    k: int,
    length: int,
) -> CountingConstraint:
    """Constraint on a single letter."""
    return CountingConstraint(cid, player, kind, Var(letter), k, length)


def at_length(
    constraints: tuple[CountingConstraint, ...],
    length: int,
) -> tuple[CountingConstraint, ...]:
    return tuple(c.with_length(length) for c in constraints)


def solved(
    game_file: GameFile,
    length: int,
    store: WinningStore | None = None,
    index: int = 1,
) -> IncrementCertificate:
    """Build and solve one increment with every constraint at `length`."""
    constraints = at_length(game_file.constraints, length)
    graph = build_situation_graph(game_file.game, constraints, store)
    region = solve_lifted(lift_winning_condition(graph, game_file.win))
    return IncrementCertificate(index, graph, region)


@pytest.fixture
def games_dir() -> Path:
    return GAMES_DIR


@pytest.fixture
def iteration_example() -> GameFile:
    """Ten-state safety game with min(ego, a, 1, 7), solved in three increments."""
    return load_game(GAMES_DIR / "iteration_example.json")


@pytest.fixture
def small_game() -> GameFile:
    """Five-state game with three EGO constraints and one ADV constraint."""
    return load_game(GAMES_DIR / "small_game.json")


@pytest.fixture
def forced_violation() -> GameFile:
    """Game in which the adversary can be forced to break min(adv, b, 1, 1)."""
    return load_game(GAMES_DIR / "forced_violation.json")


@pytest.fixture
def adversary_budget() -> GameFile:
    """Rational game with min(adv, b, 1, 3)."""
    return load_game(GAMES_DIR / "adversary_budget.json")


@pytest.fixture
def adversary_budget_short() -> GameFile:
    """Same arena with min(adv, b, 1, 2), which the adversary cannot keep."""
    return load_game(GAMES_DIR / "adversary_budget_short.json")
