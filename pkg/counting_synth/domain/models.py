"""
Counting Synthesis Domain Models.

Immutable value objects for arenas, window counting constraints,
situations, strategies and run reports.
"""

from __future__ import annotations

from collections.abc import Iterator, Mapping
from dataclasses import dataclass, field, replace
from enum import Enum
from functools import cached_property
from typing import Optional

import networkx as nx

from ..errors import InputError, StrategyError
from .formula import Formula

# One history entry: 1 (formula held), 0 (it did not), None (turn not taken yet)
Entry = Optional[int]
HistoryVector = tuple[Entry, ...]
Action = frozenset[str]


class Player(Enum):
    """The two players of a turn-based game."""

    EGO = "ego"
    ADV = "adv"

    @property
    def opponent(self) -> Player:
        return Player.ADV if self is Player.EGO else Player.EGO


class ConstraintKind(Enum):
    """Direction of a window counting constraint."""

    MIN = "min"  # at least k out of l
    MAX = "max"  # at most k out of l


class WinKind(Enum):
    """Supported winning conditions."""

    SAFETY = "safety"
    REACHABILITY = "reachability"
    BUCHI = "buchi"
    CO_BUCHI = "co-buchi"
    PARITY = "parity"


class Flag(Enum):
    """Construction status of a node in a situation graph."""

    NORMAL = "normal"
    TO_WIN_SINK = "to-win-sink"
    TO_LOSE_SINK = "to-lose-sink"
    SINK = "sink"


class Sink(Enum):
    """Tags of the four sink states."""

    WIN_EGO = "w_E"
    WIN_ADV = "w_A"
    LOSE_EGO = "l_E"
    LOSE_ADV = "l_A"

    @property
    def owner(self) -> Player:
        return Player.EGO if self in (Sink.WIN_EGO, Sink.LOSE_EGO) else Player.ADV

    @property
    def winning(self) -> bool:
        return self in (Sink.WIN_EGO, Sink.WIN_ADV)


class Verdict(Enum):
    """Monitor status of one constraint on a finite prefix."""

    SATISFIABLE_SO_FAR = "satisfiable-so-far"
    VIOLATED = "violated"


class IncrementMode(Enum):
    """How constraint lengths grow between increments."""

    SEQUENTIAL = "sequential"
    ALTERNATING = "alternating"


class InitMode(Enum):
    """Starting lengths of the incremented constraints."""

    MINIMAL = "minimal"
    SUM_K = "sum-k"


class Decision(Enum):
    """Outcome of a synthesis run."""

    WINNABLE = "winnable"
    NOT_WINNABLE = "not-winnable"


@dataclass(frozen=True)
class Transition:
    """
    Labeled move of the arena.

    Attributes:
        source: State the move leaves
        action: Letters played by the owner of the source state
        target: State the move enters
    """

    source: str
    action: Action
    target: str

    def __str__(self) -> str:
        letters = ",".join(sorted(self.action))
        return f"{self.source} -{{{letters}}}-> {self.target}"


@dataclass(frozen=True)
class GameGraph:
    """
    Bipartite arena with labeled deterministic transitions.

    The graph accepts raw input; use `validate_graph` to check the arena
    conditions before handing it to the engine.

    Attributes:
        states: State identifiers in declaration order
        owner: Which player controls each state
        initial: Initial state (EGO-owned in a valid graph)
        alphabet_ego: Letters EGO may play
        alphabet_adv: Letters ADV may play
        transitions: Moves in declaration order
    """

    states: tuple[str, ...]
    owner: Mapping[str, Player]
    initial: str
    alphabet_ego: frozenset[str]
    alphabet_adv: frozenset[str]
    transitions: tuple[Transition, ...]

    def alphabet(self, player: Player) -> frozenset[str]:
        """Get the alphabet of a player."""
        return self.alphabet_ego if player is Player.EGO else self.alphabet_adv

    @cached_property
    def index(self) -> dict[str, int]:
        """Dense integer index of every state."""
        return {state: i for i, state in enumerate(self.states)}

    @cached_property
    def letter_bits(self) -> dict[str, int]:
        """Bit position of every letter in canonical action codes."""
        letters = set(self.alphabet_ego) | set(self.alphabet_adv)
        for t in self.transitions:
            letters |= t.action
        return {letter: i for i, letter in enumerate(sorted(letters))}

    def action_code(self, act: Action) -> int:
        """Canonical integer encoding of an action set."""
        bits = self.letter_bits
        return sum(1 << bits[letter] for letter in act)

    @cached_property
    def outgoing(self) -> dict[str, tuple[Transition, ...]]:
        """Outgoing transitions per state, ordered by canonical action code."""
        grouped: dict[str, list[Transition]] = {state: [] for state in self.states}
        for t in self.transitions:
            grouped.setdefault(t.source, []).append(t)
        return {
            state: tuple(sorted(moves, key=lambda t: (self.action_code(t.action), t.target)))
            for state, moves in grouped.items()
        }

    def successor(self, state: str, act: Action) -> str | None:
        """Get the target of the move labeled `act` out of `state`."""
        for t in self.outgoing.get(state, ()):
            if t.action == act:
                return t.target
        return None

    @cached_property
    def arena(self) -> nx.MultiDiGraph:
        """The arena as a networkx multigraph (one edge per transition)."""
        g = nx.MultiDiGraph()
        for state in self.states:
            owner = self.owner.get(state)
            g.add_node(state, owner=owner.value if owner else None)
        for t in self.transitions:
            g.add_edge(t.source, t.target, action=tuple(sorted(t.action)))
        return g

    @property
    def state_count(self) -> int:
        return len(self.states)

    @property
    def transition_count(self) -> int:
        return len(self.transitions)


@dataclass(frozen=True)
class WinningCondition:
    """
    Winning condition of EGO on the arena.

    Attributes:
        kind: Condition type
        states: The set R (safe / target / accepting / allowed states)
        coloring: State colors, parity only; the minimal color seen
            infinitely often must be even for EGO to win
    """

    kind: WinKind
    states: frozenset[str] = frozenset()
    coloring: Mapping[str, int] = field(default_factory=dict)

    @classmethod
    def safety(cls, states: frozenset[str] | set[str]) -> WinningCondition:
        return cls(WinKind.SAFETY, frozenset(states))

    @classmethod
    def reachability(cls, states: frozenset[str] | set[str]) -> WinningCondition:
        return cls(WinKind.REACHABILITY, frozenset(states))

    @classmethod
    def buchi(cls, states: frozenset[str] | set[str]) -> WinningCondition:
        return cls(WinKind.BUCHI, frozenset(states))

    @classmethod
    def co_buchi(cls, states: frozenset[str] | set[str]) -> WinningCondition:
        return cls(WinKind.CO_BUCHI, frozenset(states))

    @classmethod
    def parity(cls, coloring: Mapping[str, int]) -> WinningCondition:
        return cls(WinKind.PARITY, frozenset(), dict(coloring))


@dataclass(frozen=True)
class Prefix:
    """
    Finite play prefix: states and the action sets played between them.

    Attributes:
        states: Visited states, first one included
        actions: Action set played in each state but the last
    """

    states: tuple[str, ...]
    actions: tuple[Action, ...] = ()

    def __post_init__(self) -> None:
        if len(self.states) != len(self.actions) + 1:
            raise InputError(
                f"prefix has {len(self.states)} states but {len(self.actions)} actions"
            )

    @property
    def length(self) -> int:
        """Length in states."""
        return len(self.states)

    def steps(self) -> Iterator[tuple[str, Action, str]]:
        """Iterate over (state, action, next state) triples."""
        for i, act in enumerate(self.actions):
            yield self.states[i], act, self.states[i + 1]

    @classmethod
    def from_moves(cls, start: str, moves: list[tuple[Action, str]]) -> Prefix:
        """Build a prefix from a start state and (action, target) pairs."""
        states = [start] + [target for _, target in moves]
        return cls(tuple(states), tuple(frozenset(act) for act, _ in moves))


@dataclass(frozen=True)
class Violation:
    """
    One violated validation rule with its witness.

    Attributes:
        rule: Rule name (e.g. "Determinacy")
        message: Human-readable explanation
        state: Offending state, if the witness is a state
        transition: Offending transition, if the witness is a move
        histories: Constraint histories at the witness (rationality only)
    """

    rule: str
    message: str
    state: str | None = None
    transition: Transition | None = None
    histories: Mapping[str, HistoryVector] = field(default_factory=dict)


@dataclass(frozen=True)
class ValidationReport:
    """Outcome of a validation pass; valid exactly when nothing was violated."""

    violations: tuple[Violation, ...] = ()

    @property
    def valid(self) -> bool:
        return not self.violations

    @property
    def rules(self) -> tuple[str, ...]:
        """Distinct violated rule names in report order."""
        return tuple(dict.fromkeys(v.rule for v in self.violations))

    def by_rule(self, rule: str) -> tuple[Violation, ...]:
        return tuple(v for v in self.violations if v.rule == rule)

    def summary(self) -> str:
        if self.valid:
            return "valid"
        return "; ".join(f"{v.rule}: {v.message}" for v in self.violations)


@dataclass(frozen=True)
class CountingConstraint:
    """
    Window counting constraint on one player's own turns.

    MIN requires the formula to hold at least k times in every window of l
    consecutive own turns; MAX requires it to hold at most k times.

    Attributes:
        id: Stable identifier, preserved across increments
        player: Player whose turns are counted
        kind: MIN or MAX
        formula: Action formula over the player's alphabet
        k: Count bound
        l: Window length in own turns
        origin: Id of the constraint this one was translated from
    """

    id: str
    player: Player
    kind: ConstraintKind
    formula: Formula
    k: int
    l: int  # noqa: E741
    origin: str | None = None

    def __post_init__(self) -> None:
        if self.l < 1:
            raise InputError(f"window length must be positive, got {self.l}", self.id)
        if self.k < 0:
            raise InputError(f"count bound must be non-negative, got {self.k}", self.id)
        if self.k > self.l:
            raise InputError(f"count bound {self.k} exceeds window length {self.l}", self.id)

    def with_length(self, length: int) -> CountingConstraint:
        """Copy of the constraint with another window length."""
        return replace(self, l=length)

    @property
    def incrementable(self) -> bool:
        """True for EGO-MIN constraints, the only ones whose length is grown."""
        return self.player is Player.EGO and self.kind is ConstraintKind.MIN

    def __str__(self) -> str:
        return f"{self.kind.value}({self.player.value}, {self.formula}, {self.k}, {self.l})"


@dataclass(frozen=True)
class WindowVerdict:
    """
    Monitor verdict for one constraint.

    Attributes:
        status: SATISFIABLE_SO_FAR or VIOLATED
        window: Own-turn index range (first, last) of the witnessing window
    """

    status: Verdict
    window: tuple[int, int] | None = None

    @property
    def violated(self) -> bool:
        return self.status is Verdict.VIOLATED


@dataclass(frozen=True)
class Situation:
    """
    Base state paired with per-constraint history vectors.

    Vectors list the most recent own turn first.

    Attributes:
        state: Base state, or a sink tag
        history: (constraint id, vector) pairs in constraint order
    """

    state: str | Sink
    history: tuple[tuple[str, HistoryVector], ...] = ()

    @property
    def is_sink(self) -> bool:
        return isinstance(self.state, Sink)

    @property
    def constraint_ids(self) -> tuple[str, ...]:
        return tuple(cid for cid, _ in self.history)

    def vector(self, constraint_id: str) -> HistoryVector:
        """Get the history vector of a constraint."""
        for cid, vector in self.history:
            if cid == constraint_id:
                return vector
        raise InputError(f"situation carries no history for constraint {constraint_id!r}")

    def __str__(self) -> str:
        if isinstance(self.state, Sink):
            return self.state.value
        vectors = ", ".join(
            "(" + ",".join("-" if e is None else str(e) for e in vector) + ")"
            for _, vector in self.history
        )
        return f"({self.state}, {vectors})"


@dataclass(frozen=True)
class MachineState:
    """
    One state of an extracted strategy machine.

    Attributes:
        id: Dense machine state id
        owner: Player owning the underlying situation
        increment: Increment whose situation graph the state belongs to
        state: Base state of the underlying situation
        history: History vectors of the underlying situation
        emit: Action set EGO plays here (EGO states only)
        successors: Next machine state per action set
        certified: True if the situation lies in its increment's certified region
    """

    id: int
    owner: Player
    increment: int
    state: str
    history: tuple[tuple[str, HistoryVector], ...]
    emit: Action | None
    successors: Mapping[Action, int]
    certified: bool = True


@dataclass(frozen=True)
class SwitchRecord:
    """
    Switch rule applied when a play reaches a store-covered situation.

    Attributes:
        from_increment: Increment in which the covered situation was reached
        to_increment: Increment whose stored strategy takes over
        state: Base state of the situation
        from_history: Histories at the reaching increment's lengths
        to_history: Truncated histories at the stored increment's lengths
    """

    from_increment: int
    to_increment: int
    state: str
    from_history: tuple[tuple[str, HistoryVector], ...]
    to_history: tuple[tuple[str, HistoryVector], ...]


@dataclass(frozen=True)
class StrategyMachine:
    """
    Finite-state controller for EGO.

    Memory is a machine state id. At EGO states the machine emits an action
    set; every move (own or adversarial) advances the memory.

    Attributes:
        states: Machine states indexed by id
        switches: Switch rules used while the machine was built
        lengths: Constraint lengths per increment referenced by the machine
        initial: Initial machine state id
    """

    states: tuple[MachineState, ...]
    switches: tuple[SwitchRecord, ...] = ()
    lengths: Mapping[int, Mapping[str, int]] = field(default_factory=dict)
    initial: int = 0

    @property
    def size(self) -> int:
        return len(self.states)

    def initial_state(self) -> int:
        return self.initial

    def choose(self, memory: int, state: str) -> Action:
        """Get the action set EGO plays in `state`."""
        node = self._at(memory, state)
        if node.emit is None:
            raise StrategyError(f"machine state {memory} at {state} emits no action")
        return node.emit

    def advance(self, memory: int, state: str, action: Action) -> int:
        """Follow the move labeled `action` out of `state`."""
        node = self._at(memory, state)
        nxt = node.successors.get(action)
        if nxt is None:
            letters = ",".join(sorted(action))
            raise StrategyError(f"machine state {memory} at {state} has no move {{{letters}}}")
        return nxt

    def in_region(self, memory: int) -> bool:
        return self.states[memory].certified

    def _at(self, memory: int, state: str) -> MachineState:
        node = self.states[memory]
        if node.state != state:
            raise StrategyError(f"machine state {memory} tracks {node.state}, play is at {state}")
        return node


@dataclass(frozen=True)
class IncrementStats:
    """
    Statistics of one increment.

    Attributes:
        index: Increment number, starting at 1
        lengths: Constraint lengths used in the increment
        situations: Non-sink situations constructed
        sink_states: Sink states attached
        edges: Edges of the situation graph, sink edges included
        region_size: Non-sink situations in the winning region
        region_edges: Edges between non-sink region situations
        violating: Situations flagged as violating an EGO constraint
        covered: Situations flagged as extensions of stored winners
        store_size: Stored winning situations after the increment
        elapsed_ms: Wall-clock time of build, lift and solve
        under_approximation: True if the store pruned the construction
    """

    index: int
    lengths: Mapping[str, int]
    situations: int
    sink_states: int
    edges: int
    region_size: int
    region_edges: int
    violating: int
    covered: int
    store_size: int
    elapsed_ms: float
    under_approximation: bool = False

    @property
    def elapsed_seconds(self) -> float:
        return self.elapsed_ms / 1000.0


@dataclass(frozen=True)
class RunReport:
    """
    Report of a synthesis run.

    Attributes:
        mode: "sequential", "alternating" or "direct"
        increments: Per-increment statistics in order
        translated: Ids of EGO-MAX constraints translated to MIN form
        ego_constraints: Number of EGO constraints in the input
        full_increments: Increments needed to reach full lengths from the
            starting lengths
    """

    mode: str
    increments: tuple[IncrementStats, ...] = ()
    translated: tuple[str, ...] = ()
    ego_constraints: int = 0
    full_increments: int = 1

    @property
    def total_ms(self) -> float:
        return sum(stats.elapsed_ms for stats in self.increments)

    @property
    def total_seconds(self) -> float:
        return self.total_ms / 1000.0

    @property
    def final_situations(self) -> int:
        return self.increments[-1].situations if self.increments else 0

    @property
    def final_store_size(self) -> int:
        return self.increments[-1].store_size if self.increments else 0


@dataclass(frozen=True)
class SynthesisResult:
    """
    Result of a synthesis run.

    Attributes:
        decision: WINNABLE or NOT_WINNABLE
        final_lengths: Constraint lengths of the last increment
        report: Run statistics
        strategy: Extracted controller (WINNABLE only)
    """

    decision: Decision
    final_lengths: Mapping[str, int]
    report: RunReport
    strategy: StrategyMachine | None = None

    @property
    def winnable(self) -> bool:
        return self.decision is Decision.WINNABLE

    @property
    def increments(self) -> int:
        return len(self.report.increments)


@dataclass(frozen=True)
class BenchRow:
    """
    One benchmark row per (game, mode).

    Attributes:
        game: Game identifier
        mode: sequential, alternating or direct
        decision: Decision value
        states: Situations in the last situation graph
        edges: Edges in the last situation graph
        region: Region size of the last increment
        store: Store size at the end of the run
        ms: Total elapsed milliseconds
        increments: Increments performed
        full_increments: Increments a run to full length would have needed
    """

    game: str
    mode: str
    decision: str
    states: int
    edges: int
    region: int
    store: int
    ms: float
    increments: int = 1
    full_increments: int = 1


@dataclass(frozen=True)
class RunOutcome:
    """
    Observables of one simulated play.

    Attributes:
        run: Run number
        steps: Turns played
        ego_violations: EGO constraints the play violated
        adv_violations: ADV constraints the play violated
        unsafe_visits: Visits to states outside the condition's state set
        target_reached_at: First turn at a state of the set, if any
        max_accepting_gap: Longest stretch between visits to the set
        rejecting_visits: Visits outside the set (co-Büchi)
        cycle_min_color: Minimal color on the last closed memory cycle
        region_exits: Turns spent at uncertified machine states
    """

    run: int
    steps: int
    ego_violations: tuple[str, ...] = ()
    adv_violations: tuple[str, ...] = ()
    unsafe_visits: int = 0
    target_reached_at: int | None = None
    max_accepting_gap: int | None = None
    rejecting_visits: int = 0
    cycle_min_color: int | None = None
    region_exits: int = 0


@dataclass(frozen=True)
class SimulationReport:
    """Sampled plays of a strategy against the random compliant adversary."""

    runs: tuple[RunOutcome, ...] = ()
    steps: int = 0
    seed: int = 0

    @property
    def ego_violation_count(self) -> int:
        return sum(len(r.ego_violations) for r in self.runs)

    @property
    def adv_violation_count(self) -> int:
        return sum(len(r.adv_violations) for r in self.runs)

    @property
    def unsafe_visits(self) -> int:
        return sum(r.unsafe_visits for r in self.runs)

    @property
    def region_exits(self) -> int:
        return sum(r.region_exits for r in self.runs)
