"""
Winning Condition Lifting.

Carries the base game's winning condition over to a situation graph so
that a standard solver for the base condition applies. Winning sink states
are always favorable for EGO, losing sink states never are.
"""

import logging
from dataclasses import dataclass

from ..domain.models import Sink, WinKind, WinningCondition
from ..errors import InputError
from .arena import Arena
from .situations import SituationGraph

logger = logging.getLogger(__name__)

WIN_SINK_COLOR = 0
LOSE_SINK_COLOR = 1


@dataclass(frozen=True)
class LiftedGame:
    """
    Arena plus a winning condition over its nodes.

    Attributes:
        arena: Game arena
        kind: Condition type
        marked: Safe set (safety), target set (reachability), accepting
            set (Büchi) or allowed set (co-Büchi); unused for parity
        safe: Reachability only: safe set of the preliminary safety game
        colors: Parity only: color of every node
        initial: Initial node
        graph: Situation graph the game was lifted from, if any
    """

    arena: Arena
    kind: WinKind
    marked: frozenset[int] = frozenset()
    safe: frozenset[int] = frozenset()
    colors: tuple[int, ...] = ()
    initial: int = 0
    graph: SituationGraph | None = None


def lift_winning_condition(graph: SituationGraph, win: WinningCondition) -> LiftedGame:
    """
    Lift a base winning condition to a situation graph.

    Args:
        graph: Situation graph with sinks attached
        win: Winning condition of the base game

    Returns:
        Lifted game of the same kind

    Raises:
        InputError: If the condition mentions unknown states or a parity
            coloring is not total.
    """
    game = graph.game
    unknown = win.states - set(game.states)
    if unknown:
        raise InputError(f"winning condition mentions unknown states: {sorted(unknown)}")

    win_sinks = {graph.sinks[s] for s in (Sink.WIN_EGO, Sink.WIN_ADV) if s in graph.sinks}
    lose_sinks = {graph.sinks[s] for s in (Sink.LOSE_EGO, Sink.LOSE_ADV) if s in graph.sinks}
    members = {game.index[s] for s in win.states}
    in_set = frozenset(
        node
        for node, key in enumerate(graph.keys)
        if not isinstance(key, Sink) and key[0] in members
    )

    if win.kind is WinKind.PARITY:
        missing = set(game.states) - set(win.coloring)
        if missing:
            raise InputError(f"parity coloring misses states: {sorted(missing)}")
        if any(c < 0 for c in win.coloring.values()):
            raise InputError("parity colors must be non-negative")
        by_index = [win.coloring[s] for s in game.states]
        colors = []
        for key in graph.keys:
            if isinstance(key, Sink):
                colors.append(WIN_SINK_COLOR if key.winning else LOSE_SINK_COLOR)
            else:
                colors.append(by_index[key[0]])
        return LiftedGame(graph.arena, win.kind, colors=tuple(colors), graph=graph)

    marked = in_set | win_sinks
    safe: frozenset[int] = frozenset()
    if win.kind is WinKind.REACHABILITY:
        safe = frozenset(range(graph.size)) - lose_sinks
    logger.debug(
        f"Lifted {win.kind.value} condition: {len(marked)} marked of {graph.size} nodes"
    )
    return LiftedGame(graph.arena, win.kind, frozenset(marked), safe, graph=graph)
