"""
Situation Graph Construction.

A situation pairs a base state with one history vector per constraint. The
builder explores situations breadth-first from the initial situation and
prunes while it goes: situations covered by the winning store are routed to
the winning sink, situations violating an EGO constraint to the losing sink,
and adversary moves that break an ADV constraint are dropped.
"""

from __future__ import annotations

import logging
from collections import deque
from collections.abc import Sequence
from dataclasses import dataclass, field
from functools import cached_property
from typing import TYPE_CHECKING, NamedTuple, Union

import networkx as nx

from ..domain.models import (
    Action,
    ConstraintKind,
    CountingConstraint,
    Flag,
    GameGraph,
    HistoryVector,
    Player,
    Sink,
    Situation,
)
from ..errors import InputError, RationalityError, StateError
from . import history as codec
from .arena import Arena, Edge
from .constraints import window_satisfied

if TYPE_CHECKING:
    from .store import WinningStore

logger = logging.getLogger(__name__)

History = tuple[tuple[str, HistoryVector], ...]
SituationKey = tuple[int, tuple[int, ...]]
NodeKey = Union[SituationKey, Sink]


class CompiledMove(NamedTuple):
    """Base transition with its precomputed history updates."""

    code: int
    target: int
    transition: int
    updates: tuple[tuple[int, int], ...]  # (constraint position, entry code)


@dataclass(frozen=True)
class ConstraintLayout:
    """
    Packed-history layout of an ordered constraint set.

    Attributes:
        constraints: Constraints at their current lengths, in a fixed order
    """

    constraints: tuple[CountingConstraint, ...]

    @cached_property
    def ids(self) -> tuple[str, ...]:
        return tuple(c.id for c in self.constraints)

    @cached_property
    def lengths(self) -> tuple[int, ...]:
        return tuple(c.l for c in self.constraints)

    @cached_property
    def masks(self) -> tuple[int, ...]:
        return tuple(codec.length_mask(c.l) for c in self.constraints)

    @cached_property
    def incrementable(self) -> tuple[bool, ...]:
        return tuple(c.incrementable for c in self.constraints)

    def positions(self, player: Player) -> tuple[int, ...]:
        return tuple(i for i, c in enumerate(self.constraints) if c.player is player)

    @cached_property
    def ego_positions(self) -> tuple[int, ...]:
        return self.positions(Player.EGO)

    @cached_property
    def adv_positions(self) -> tuple[int, ...]:
        return self.positions(Player.ADV)

    def satisfied(self, codes: Sequence[int], positions: Sequence[int]) -> bool:
        """True if every constraint at `positions` holds on its packed vector."""
        for i in positions:
            c = self.constraints[i]
            if not codec.code_satisfies(codes[i], c.kind, c.k, c.l):
                return False
        return True

    def compile_moves(self, game: GameGraph) -> tuple[tuple[CompiledMove, ...], ...]:
        """Per base state, its moves with the history updates they cause."""
        transition_index = {t: i for i, t in enumerate(game.transitions)}
        compiled = []
        for state in game.states:
            mover = game.owner[state]
            owned = [i for i, c in enumerate(self.constraints) if c.player is mover]
            moves = []
            for t in game.outgoing.get(state, ()):
                updates = tuple(
                    (i, codec.entry_code(self.constraints[i].formula.holds(t.action)))
                    for i in owned
                )
                moves.append(
                    CompiledMove(
                        game.action_code(t.action),
                        game.index[t.target],
                        transition_index[t],
                        updates,
                    )
                )
            compiled.append(tuple(moves))
        return tuple(compiled)

    def initial_codes(self) -> tuple[int, ...]:
        return (codec.NONE_CODE,) * len(self.constraints)

    def apply(self, codes: tuple[int, ...], move: CompiledMove) -> tuple[int, ...]:
        if not move.updates:
            return codes
        new = list(codes)
        masks = self.masks
        for i, entry in move.updates:
            new[i] = ((new[i] << 2) | entry) & masks[i]
        return tuple(new)

    def encode(self, situation: Situation) -> tuple[int, ...]:
        """Packed codes of a situation's histories, in layout order."""
        if situation.constraint_ids != self.ids:
            raise InputError(
                f"situation constraints {situation.constraint_ids} do not match {self.ids}"
            )
        return tuple(codec.encode(vector) for _, vector in situation.history)

    def decode(self, codes: Sequence[int]) -> History:
        return tuple(
            (c.id, codec.decode(code, c.l)) for c, code in zip(self.constraints, codes)
        )


def update_history(
    history: History,
    act: Action,
    constraints: Sequence[CountingConstraint],
    mover: Player,
) -> History:
    """
    Record one move in a history.

    Vectors of constraints owned by the mover are shifted: the newest entry
    (1 if the formula holds on `act`, else 0) is prepended and the oldest
    dropped. All other vectors are unchanged.
    """
    by_id = {c.id: c for c in constraints}
    updated = []
    for cid, vector in history:
        c = by_id.get(cid)
        if c is None:
            raise InputError(f"history references unknown constraint {cid!r}")
        if c.player is mover:
            vector = (1 if c.formula.holds(act) else 0,) + vector[:-1]
        updated.append((cid, vector))
    return tuple(updated)


def situation_satisfies(situation: Situation, constraint: CountingConstraint) -> bool:
    """Check a situation's history vector for one constraint."""
    vector = situation.vector(constraint.id)
    return window_satisfied(vector, constraint.k, constraint.kind, constraint.l)


def is_extension(
    longer: Situation,
    shorter: Situation,
    constraints: Sequence[CountingConstraint],
) -> bool:
    """
    Check whether `longer` extends `shorter`.

    Both must carry the same constraint ids. EGO-MIN vectors of `longer` may
    be longer and must start with `shorter`'s vector; every other vector must
    be identical. `constraints` supplies player and kind per id.

    Raises:
        InputError: On mismatched constraint id sets.
    """
    if set(longer.constraint_ids) != set(shorter.constraint_ids):
        raise InputError(
            f"cannot compare situations over {sorted(longer.constraint_ids)} "
            f"and {sorted(shorter.constraint_ids)}"
        )
    if longer.state != shorter.state:
        return False
    by_id = {c.id: c for c in constraints}
    for cid, short_vector in shorter.history:
        c = by_id.get(cid)
        if c is None:
            raise InputError(f"no constraint definition for {cid!r}")
        long_vector = longer.vector(cid)
        if c.player is Player.EGO and c.kind is ConstraintKind.MIN:
            if len(long_vector) < len(short_vector):
                return False
            if long_vector[: len(short_vector)] != short_vector:
                return False
        elif long_vector != short_vector:
            return False
    return True


@dataclass(frozen=True)
class SituationGraph:
    """
    Pruned situation graph with sinks attached.

    Attributes:
        game: Base arena
        layout: Constraint layout at the graph's lengths
        arena: Solver view; node 0 is the initial situation
        keys: Packed key (or sink tag) of every node
        flags: Construction flag of every node
        covers: Store entry (increment, key) covering each TO_WIN_SINK node
    """

    game: GameGraph
    layout: ConstraintLayout
    arena: Arena
    keys: tuple[NodeKey, ...]
    flags: tuple[Flag, ...]
    covers: dict[int, tuple[int, SituationKey]] = field(default_factory=dict)
    initial: int = 0

    @property
    def constraints(self) -> tuple[CountingConstraint, ...]:
        return self.layout.constraints

    @property
    def lengths(self) -> dict[str, int]:
        return {c.id: c.l for c in self.layout.constraints}

    @cached_property
    def index(self) -> dict[NodeKey, int]:
        return {key: node for node, key in enumerate(self.keys)}

    @cached_property
    def sinks(self) -> dict[Sink, int]:
        return {key: node for node, key in enumerate(self.keys) if isinstance(key, Sink)}

    @property
    def size(self) -> int:
        return self.arena.size

    @property
    def situation_count(self) -> int:
        """Non-sink situations."""
        return self.arena.size - len(self.sinks)

    @property
    def sink_count(self) -> int:
        return len(self.sinks)

    @property
    def edge_count(self) -> int:
        return self.arena.edge_count

    def is_sink(self, node: int) -> bool:
        return isinstance(self.keys[node], Sink)

    def flagged(self, flag: Flag) -> list[int]:
        return [node for node, f in enumerate(self.flags) if f is flag]

    def owner(self, node: int) -> Player:
        return self.arena.owners[node]

    def situation(self, node: int) -> Situation:
        """Decode a node into a situation."""
        key = self.keys[node]
        if isinstance(key, Sink):
            return Situation(key)
        state, codes = key
        return Situation(self.game.states[state], self.layout.decode(codes))

    def node_of(self, situation: Situation) -> int | None:
        """Find the node of a situation, if it was constructed."""
        if isinstance(situation.state, Sink):
            return self.sinks.get(situation.state)
        state = self.game.index.get(situation.state)
        if state is None:
            return None
        return self.index.get((state, self.layout.encode(situation)))

    def action(self, edge: Edge) -> Action | None:
        """Base action set of an edge; None for sink edges."""
        if edge.transition < 0:
            return None
        return self.game.transitions[edge.transition].action

    def to_networkx(self) -> nx.MultiDiGraph:
        """Export for dumps: node and edge attributes are JSON-friendly."""
        g = nx.MultiDiGraph(lengths=self.lengths)
        for node in range(self.size):
            situation = self.situation(node)
            g.add_node(
                node,
                label=str(situation),
                state=situation.state.value if situation.is_sink else situation.state,
                owner=self.owner(node).value,
                flag=self.flags[node].value,
                history={cid: list(vector) for cid, vector in situation.history},
            )
        for node, out in enumerate(self.arena.edges):
            for edge in out:
                act = self.action(edge)
                g.add_edge(node, edge.target, action=None if act is None else sorted(act))
        return g


class SituationGraphBuilder:
    """
    Builds pruned situation graphs.

    Construction is breadth-first with a FIFO frontier, so node numbering is
    reproducible. Each dequeued situation is:
    (a) flagged TO_WIN_SINK if it extends a stored winning situation,
    (b) else flagged TO_LOSE_SINK if it violates an EGO constraint,
    (c) else expanded along every base move whose successor keeps all ADV
        constraints satisfied.
    """

    def __init__(self, game: GameGraph, constraints: Sequence[CountingConstraint]):
        """
        Initialize builder.

        Args:
            game: Validated arena
            constraints: Constraints at the lengths to build for
        """
        self.game = game
        self.layout = ConstraintLayout(tuple(constraints))
        self._moves = self.layout.compile_moves(game)

    def build(self, store: WinningStore | None = None) -> SituationGraph:
        """
        Build the situation graph.

        Args:
            store: Winning situations of earlier increments (None for none)

        Returns:
            Situation graph with sinks attached

        Raises:
            RationalityError: If the adversary has no compliant move somewhere.
        """
        game, layout = self.game, self.layout
        owners_of_state = [game.owner[s] for s in game.states]
        ego_positions = layout.ego_positions

        initial: SituationKey = (game.index[game.initial], layout.initial_codes())
        keys: list[NodeKey] = [initial]
        index: dict[NodeKey, int] = {initial: 0}
        flags: list[Flag] = [Flag.NORMAL]
        owners: list[Player] = [owners_of_state[initial[0]]]
        edges: list[list[Edge]] = [[]]
        covers: dict[int, tuple[int, SituationKey]] = {}
        frontier: deque[int] = deque([0])
        use_store = store is not None and store.size > 0

        while frontier:
            node = frontier.popleft()
            key = keys[node]
            assert not isinstance(key, Sink)
            state, codes = key

            if use_store:
                assert store is not None
                hit = store.find(state, codes, layout)
                if hit is not None:
                    if not layout.satisfied(codes, ego_positions):
                        raise StateError(
                            f"stored winner covers {self._describe(key)}, "
                            "which violates an EGO constraint"
                        )
                    flags[node] = Flag.TO_WIN_SINK
                    covers[node] = hit
                    continue

            if not layout.satisfied(codes, ego_positions):
                flags[node] = Flag.TO_LOSE_SINK
                continue

            mover = owners_of_state[state]
            out = edges[node]
            for move in self._moves[state]:
                succ_codes = layout.apply(codes, move)
                if mover is Player.ADV and move.updates:
                    if not layout.satisfied(succ_codes, [i for i, _ in move.updates]):
                        continue
                succ: SituationKey = (move.target, succ_codes)
                target = index.get(succ)
                if target is None:
                    target = len(keys)
                    index[succ] = target
                    keys.append(succ)
                    flags.append(Flag.NORMAL)
                    owners.append(owners_of_state[move.target])
                    edges.append([])
                    frontier.append(target)
                out.append(Edge(move.code, target, move.transition))

            if not out:
                if mover is Player.ADV:
                    raise RationalityError(
                        f"adversary has no constraint-compliant move at {self._describe(key)}"
                    )
                raise InputError(f"state {game.states[state]} has no outgoing transition")

        covered = [n for n, f in enumerate(flags) if f is Flag.TO_WIN_SINK]
        violating = [n for n, f in enumerate(flags) if f is Flag.TO_LOSE_SINK]
        for nodes, (ego_sink, adv_sink) in (
            (covered, (Sink.WIN_EGO, Sink.WIN_ADV)),
            (violating, (Sink.LOSE_EGO, Sink.LOSE_ADV)),
        ):
            if not nodes:
                continue
            ego_node, adv_node = len(keys), len(keys) + 1
            keys.extend((ego_sink, adv_sink))
            flags.extend((Flag.SINK, Flag.SINK))
            owners.extend((Player.EGO, Player.ADV))
            edges.append([Edge(0, adv_node)])
            edges.append([Edge(0, ego_node)])
            for n in nodes:
                sink = adv_node if owners[n] is Player.EGO else ego_node
                edges[n].append(Edge(0, sink))

        graph = SituationGraph(
            game=game,
            layout=layout,
            arena=Arena(tuple(owners), tuple(tuple(out) for out in edges)),
            keys=tuple(keys),
            flags=tuple(flags),
            covers=covers,
        )
        logger.debug(
            f"Situation graph at lengths {graph.lengths}: {graph.situation_count} situations, "
            f"{graph.sink_count} sink states, {graph.edge_count} edges, "
            f"{len(covered)} covered, {len(violating)} violating"
        )
        return graph

    def _describe(self, key: SituationKey) -> str:
        state, codes = key
        return str(Situation(self.game.states[state], self.layout.decode(codes)))


def build_situation_graph(
    game: GameGraph,
    constraints: Sequence[CountingConstraint],
    store: WinningStore | None = None,
) -> SituationGraph:
    """Build the pruned situation graph for `constraints` at their current lengths."""
    return SituationGraphBuilder(game, constraints).build(store)
