"""
Region Solvers.

Winning regions and positional strategies for EGO on explicit arenas:
attractors, safety, reachability, Büchi, co-Büchi and Zielonka's
recursive parity algorithm (minimal color seen infinitely often even means
EGO wins). Strategies map an EGO node to the position of the chosen edge
in its edge list; among equally good edges the smallest action code wins.
"""

import logging
import sys
from abc import ABC, abstractmethod
from collections import deque
from collections.abc import Iterable
from dataclasses import dataclass, field

from typing_extensions import override

from ..domain.models import Player, WinKind
from .arena import Arena
from .lifting import LiftedGame

logger = logging.getLogger(__name__)

STACK_HEADROOM = 1000


@dataclass(frozen=True)
class Attractor:
    """
    Attractor set with witnessing moves.

    Attributes:
        nodes: Nodes from which the player forces a visit to the target
        strategy: Edge position per player-owned non-target node
        rank: Distance layer per node (target nodes have rank 0)
    """

    nodes: frozenset[int]
    strategy: dict[int, int]
    rank: dict[int, int]


@dataclass(frozen=True)
class Region:
    """
    Winning region of EGO with a positional strategy.

    Attributes:
        nodes: Winning nodes
        strategy: Edge position per EGO node the strategy may visit
        closure: Nodes the strategy may visit from the region; equals
            `nodes` except for reachability, where plays continue in the
            safe region after the target was reached
    """

    nodes: frozenset[int]
    strategy: dict[int, int] = field(default_factory=dict)
    closure: frozenset[int] = frozenset()

    def __contains__(self, node: object) -> bool:
        return node in self.nodes

    def __len__(self) -> int:
        return len(self.nodes)


def attractor(
    arena: Arena,
    target: Iterable[int],
    player: Player,
    within: bytearray | None = None,
) -> Attractor:
    """
    Compute the attractor of `player` to `target` inside a sub-arena.

    A player node joins once some successor is inside, an opponent node once
    all of its successors (inside the sub-arena) are.

    Args:
        arena: Game arena
        target: Target nodes
        player: Attracting player
        within: Membership mask of the sub-arena (None for the whole arena)
    """
    alive = within if within is not None else arena.full_mask()
    owners, edges, preds = arena.owners, arena.edges, arena.predecessors
    rank: dict[int, int] = {}
    queue: deque[int] = deque()
    for v in target:
        if alive[v] and v not in rank:
            rank[v] = 0
            queue.append(v)
    remaining: dict[int, int] = {}
    while queue:
        v = queue.popleft()
        for u in preds[v]:
            if not alive[u] or u in rank:
                continue
            if owners[u] is player:
                rank[u] = rank[v] + 1
                queue.append(u)
                continue
            left = remaining.get(u)
            if left is None:
                left = sum(1 for e in edges[u] if alive[e.target])
            left -= 1
            remaining[u] = left
            if left == 0:
                rank[u] = rank[v] + 1
                queue.append(u)

    strategy: dict[int, int] = {}
    for u, r in rank.items():
        if r == 0 or owners[u] is not player:
            continue
        for pos, e in enumerate(edges[u]):
            if alive[e.target] and rank.get(e.target, r) < r:
                strategy[u] = pos
                break
    return Attractor(frozenset(rank), strategy, rank)


def _stay_move(arena: Arena, node: int, inside: bytearray) -> int | None:
    for pos, e in enumerate(arena.edges[node]):
        if inside[e.target]:
            return pos
    return None


def _alive_nodes(mask: bytearray) -> list[int]:
    return [v for v, m in enumerate(mask) if m]


def solve_safety(
    arena: Arena,
    safe: Iterable[int],
    within: bytearray | None = None,
) -> Region:
    """Safety: the complement of the adversary's attractor to the unsafe nodes."""
    alive = within if within is not None else arena.full_mask()
    safe_mask = arena.mask_of(set(safe))
    unsafe = [v for v in _alive_nodes(alive) if not safe_mask[v]]
    bad = attractor(arena, unsafe, Player.ADV, alive)
    inside = bytearray(alive)
    for v in bad.nodes:
        inside[v] = 0
    nodes = frozenset(_alive_nodes(inside))
    strategy = {}
    for v in nodes:
        if arena.owners[v] is Player.EGO:
            pos = _stay_move(arena, v, inside)
            assert pos is not None
            strategy[v] = pos
    return Region(nodes, strategy, nodes)


def solve_reachability(arena: Arena, safe: Iterable[int], target: Iterable[int]) -> Region:
    """
    Reachability with a safety side condition.

    First solve the safety game on `safe`, then attract to the target nodes
    that lie in its region. After the target is reached the strategy keeps
    the play inside the safety region.
    """
    kept = solve_safety(arena, safe)
    inside = arena.mask_of(kept.nodes)
    goal = [v for v in target if inside[v]]
    attr = attractor(arena, goal, Player.EGO, inside)
    strategy = dict(kept.strategy)
    strategy.update(attr.strategy)
    logger.debug(
        f"Reachability: safety region {len(kept.nodes)}, attractor {len(attr.nodes)}"
    )
    return Region(attr.nodes, strategy, kept.nodes)


def solve_buchi(
    arena: Arena,
    accepting: Iterable[int],
    within: bytearray | None = None,
) -> Region:
    """
    Büchi by iterated attractors.

    Repeatedly removes the adversary's attractor to the nodes from which EGO
    cannot reach an accepting node, until every remaining node can.
    """
    alive = bytearray(within if within is not None else arena.full_mask())
    accepting_mask = arena.mask_of(set(accepting))
    rounds = 0
    while True:
        rounds += 1
        goal = [v for v in _alive_nodes(alive) if accepting_mask[v]]
        reach = attractor(arena, goal, Player.EGO, alive)
        rest = [v for v in _alive_nodes(alive) if v not in reach.nodes]
        if not rest:
            break
        trap = attractor(arena, rest, Player.ADV, alive)
        for v in trap.nodes:
            alive[v] = 0
    nodes = frozenset(_alive_nodes(alive))
    strategy = {}
    for v in nodes:
        if arena.owners[v] is not Player.EGO:
            continue
        if v in reach.strategy:
            strategy[v] = reach.strategy[v]
        else:
            pos = _stay_move(arena, v, alive)
            assert pos is not None
            strategy[v] = pos
    logger.debug(f"Büchi: region {len(nodes)} after {rounds} round(s)")
    return Region(nodes, strategy, nodes)


def solve_co_buchi(
    arena: Arena,
    allowed: Iterable[int],
    within: bytearray | None = None,
) -> Region:
    """
    Co-Büchi: eventually stay in the allowed nodes forever.

    Grows the region in layers: attract to the current region, then add the
    nodes from which EGO can stay among allowed or attracted nodes. Inside a
    layer the strategy either descends to a lower layer or stays on allowed
    nodes, so only finitely many disallowed nodes are visited.
    """
    alive = within if within is not None else arena.full_mask()
    allowed_set = set(allowed)
    won: frozenset[int] = frozenset()
    strategy: dict[int, int] = {}
    layers = 0
    while True:
        attr = attractor(arena, won, Player.EGO, alive)
        stay = solve_safety(arena, allowed_set | attr.nodes, alive)
        if stay.nodes == won:
            break
        layers += 1
        inside = arena.mask_of(stay.nodes)
        for v in stay.nodes - won:
            if arena.owners[v] is not Player.EGO:
                continue
            if v in attr.strategy:
                strategy[v] = attr.strategy[v]
            else:
                pos = _stay_move(arena, v, inside)
                assert pos is not None
                strategy[v] = pos
        won = stay.nodes
    logger.debug(f"Co-Büchi: region {len(won)} in {layers} layer(s)")
    return Region(won, strategy, won)


def _zielonka(
    arena: Arena,
    colors: tuple[int, ...],
    alive: bytearray,
) -> tuple[bytearray, dict[int, int]]:
    """
    Zielonka's recursion on the sub-arena selected by `alive`.

    Returns the mask of nodes won by EGO (the rest of `alive` is won by ADV)
    and a strategy for every node owned by the player that wins it.
    """
    nodes = _alive_nodes(alive)
    won_ego = bytearray(arena.size)
    if not nodes:
        return won_ego, {}
    owners = arena.owners
    d = min(colors[v] for v in nodes)
    p = Player.EGO if d % 2 == 0 else Player.ADV
    opp = p.opponent
    top = attractor(arena, [v for v in nodes if colors[v] == d], p, alive)

    sub = bytearray(alive)
    for v in top.nodes:
        sub[v] = 0
    sub_ego, sub_strategy = _zielonka(arena, colors, sub)

    def wins(mask: bytearray, v: int, player: Player) -> bool:
        return bool(mask[v]) == (player is Player.EGO)

    opp_sub = [v for v in _alive_nodes(sub) if wins(sub_ego, v, opp)]
    if not opp_sub:
        strategy = dict(sub_strategy)
        for v in top.nodes:
            if owners[v] is not p:
                continue
            if v in top.strategy:
                strategy[v] = top.strategy[v]
            else:
                pos = _stay_move(arena, v, alive)
                assert pos is not None
                strategy[v] = pos
        if p is Player.EGO:
            won_ego = bytearray(alive)
        return won_ego, strategy

    lost = attractor(arena, opp_sub, opp, alive)
    rest = bytearray(alive)
    for v in lost.nodes:
        rest[v] = 0
    rest_ego, rest_strategy = _zielonka(arena, colors, rest)

    strategy = dict(rest_strategy)
    opp_sub_set = set(opp_sub)
    for v in lost.nodes:
        if owners[v] is not opp:
            continue
        if v in opp_sub_set:
            if v in sub_strategy:
                strategy[v] = sub_strategy[v]
        else:
            strategy[v] = lost.strategy[v]
    for v in nodes:
        if v in lost.nodes:
            won_ego[v] = 1 if opp is Player.EGO else 0
        else:
            won_ego[v] = rest_ego[v]
    return won_ego, strategy


def parity_partition(
    arena: Arena,
    colors: tuple[int, ...],
) -> tuple[frozenset[int], frozenset[int], dict[int, int]]:
    """Split the arena into EGO's and ADV's parity regions with both players' strategies."""
    # one recursion level per removed attractor
    sys.setrecursionlimit(max(sys.getrecursionlimit(), arena.size + STACK_HEADROOM))
    won_ego, strategy = _zielonka(arena, colors, arena.full_mask())
    ego = frozenset(v for v in range(arena.size) if won_ego[v])
    adv = frozenset(range(arena.size)) - ego
    return ego, adv, strategy


def solve_parity(arena: Arena, colors: tuple[int, ...]) -> Region:
    """Parity (minimal color seen infinitely often is even) with Zielonka's algorithm."""
    ego, _, strategy = parity_partition(arena, colors)
    own = {v: pos for v, pos in strategy.items() if v in ego and arena.owners[v] is Player.EGO}
    return Region(ego, own, ego)


def solve_lifted(game: LiftedGame) -> Region:
    """Solve a lifted game with the dedicated algorithm for its condition kind."""
    arena = game.arena
    if game.kind is WinKind.SAFETY:
        return solve_safety(arena, game.marked)
    if game.kind is WinKind.REACHABILITY:
        return solve_reachability(arena, game.safe, game.marked)
    if game.kind is WinKind.BUCHI:
        return solve_buchi(arena, game.marked)
    if game.kind is WinKind.CO_BUCHI:
        return solve_co_buchi(arena, game.marked)
    return solve_parity(arena, game.colors)


def two_color(game: LiftedGame) -> tuple[int, ...]:
    """Parity coloring of a Büchi (0/1) or co-Büchi (2/1) lifted game."""
    if game.kind is WinKind.BUCHI:
        return tuple(0 if v in game.marked else 1 for v in range(game.arena.size))
    if game.kind is WinKind.CO_BUCHI:
        return tuple(2 if v in game.marked else 1 for v in range(game.arena.size))
    return game.colors


def strategy_is_closed(arena: Arena, region: Region) -> bool:
    """
    Check that the strategy never leaves the region's closure.

    From every closure node, the strategy edge (EGO) or every edge (ADV)
    must stay inside the closure.
    """
    closure = region.closure or region.nodes
    for v in closure:
        if arena.owners[v] is Player.EGO:
            pos = region.strategy.get(v)
            if pos is None or arena.edges[v][pos].target not in closure:
                return False
        elif any(e.target not in closure for e in arena.edges[v]):
            return False
    return True


class RegionSolver(ABC):
    """Computes EGO's winning region of a lifted game."""

    name = "abstract"

    @abstractmethod
    def solve(self, game: LiftedGame) -> Region:
        """Solve a lifted game."""


class LiftedGameSolver(RegionSolver):
    """
    Dispatches to the dedicated solver of each condition kind.

    Following Single Responsibility Principle.
    """

    name = "dedicated"

    @override
    def solve(self, game: LiftedGame) -> Region:
        return solve_lifted(game)


class ZielonkaSolver(RegionSolver):
    """
    Solves Büchi, co-Büchi and parity games with Zielonka's algorithm.

    Safety and reachability games go to the dedicated solvers.
    The recursion nests once per removed attractor, so the interpreter's
    recursion limit is raised to the arena size plus a fixed headroom.
    """

    name = "zielonka"

    @override
    def solve(self, game: LiftedGame) -> Region:
        if game.kind in (WinKind.SAFETY, WinKind.REACHABILITY):
            return solve_lifted(game)
        return solve_parity(game.arena, two_color(game))
