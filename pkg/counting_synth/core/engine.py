"""
Incremental Synthesis Engine.

Grows the window lengths of EGO-MIN constraints one step at a time. Each
increment builds the pruned situation graph, lifts the winning condition,
solves the lifted game and either stops with a decision or stores the
winning situations it found for the next increment.
"""

import logging
import time
from collections.abc import Callable, Sequence
from dataclasses import dataclass, replace

from ..domain.models import (
    ConstraintKind,
    CountingConstraint,
    Decision,
    Flag,
    GameGraph,
    IncrementMode,
    IncrementStats,
    InitMode,
    Player,
    RunReport,
    SynthesisResult,
    WinningCondition,
)
from ..errors import InputError, RationalityError, StateError
from ..protocols import RegionSolverProtocol
from .constraints import check_constraints, translate_max_to_min
from .lifting import lift_winning_condition
from .situations import SituationGraph, SituationGraphBuilder
from .solvers import LiftedGameSolver, Region
from .store import IncrementCertificate, WinningStore
from .strategy import StrategyExtractor
from .validator import validate_graph, validate_rationality

logger = logging.getLogger(__name__)

DIRECT_MODE = "direct"


@dataclass(frozen=True)
class SynthesisOptions:
    """
    Options of a synthesis run.

    Attributes:
        translate: Rewrite EGO-MAX constraints to EGO-MIN form first
        init: Starting lengths of the incremented constraints
        mode: Which constraint grows next
        check_rationality: Refuse games violating adversary rationality
    """

    translate: bool = True
    init: InitMode = InitMode.MINIMAL
    mode: IncrementMode = IncrementMode.SEQUENTIAL
    check_rationality: bool = True


@dataclass(frozen=True)
class IncrementSchedule:
    """
    Current and full lengths of the incremented constraints.

    Attributes:
        order: Ids of the EGO-MIN constraints in input order
        full: Full length per constraint in `order`
        current: Current length per constraint in `order`
        mode: SEQUENTIAL or ALTERNATING growth
        cursor: Position that grew last (ALTERNATING only; -1 before the first step)
    """

    order: tuple[str, ...]
    full: tuple[int, ...]
    current: tuple[int, ...]
    mode: IncrementMode = IncrementMode.SEQUENTIAL
    cursor: int = -1

    @property
    def is_final(self) -> bool:
        return self.current == self.full

    @property
    def lengths(self) -> dict[str, int]:
        return dict(zip(self.order, self.current))

    def length(self, constraint_id: str) -> int | None:
        """Current length of an incremented constraint, None for any other id."""
        return self.lengths.get(constraint_id)

    @property
    def remaining_steps(self) -> int:
        """Increments left until every constraint reaches full length."""
        return sum(f - c for f, c in zip(self.full, self.current))

    def apply(self, constraints: Sequence[CountingConstraint]) -> tuple[CountingConstraint, ...]:
        """Constraints at the schedule's current lengths."""
        lengths = self.lengths
        return tuple(
            c.with_length(lengths[c.id]) if c.id in lengths else c for c in constraints
        )


def initialize_lengths(
    constraints: Sequence[CountingConstraint],
    init: InitMode = InitMode.MINIMAL,
    mode: IncrementMode = IncrementMode.SEQUENTIAL,
    game: GameGraph | None = None,
) -> IncrementSchedule:
    """
    Build the starting schedule.

    MINIMAL starts every EGO-MIN constraint at length k (at least 1).
    SUM_K starts each at the sum of all their k values, capped at full
    length; it is only sound when EGO plays exactly one letter per move.

    Args:
        constraints: Constraints in input order
        init: Initialization mode
        mode: Growth mode carried by the schedule
        game: Arena, required for SUM_K

    Raises:
        InputError: If SUM_K is requested for a game where some EGO move
            plays zero or several letters.
    """
    incremented = [c for c in constraints if c.incrementable]
    order = tuple(c.id for c in incremented)
    full = tuple(c.l for c in incremented)
    if init is InitMode.SUM_K:
        if game is None:
            raise InputError("sum-k initialization needs the game graph")
        for t in game.transitions:
            if game.owner.get(t.source) is Player.EGO and len(t.action) != 1:
                raise InputError(
                    f"sum-k initialization requires single-letter EGO moves, got {t}"
                )
        total = max(sum(c.k for c in incremented), 1)
        current = tuple(min(c.l, total) for c in incremented)
    else:
        current = tuple(max(c.k, 1) for c in incremented)
    return IncrementSchedule(order, full, current, mode)


def advance_lengths(schedule: IncrementSchedule) -> IncrementSchedule:
    """
    Grow one constraint by one turn.

    Raises:
        StateError: If every constraint already has its full length.
    """
    if schedule.is_final:
        raise StateError("schedule already at full lengths")
    count = len(schedule.order)
    if schedule.mode is IncrementMode.SEQUENTIAL:
        candidates = range(count)
    else:
        candidates = range(schedule.cursor + 1, schedule.cursor + 1 + count)
    for step in candidates:
        i = step % count
        if schedule.current[i] < schedule.full[i]:
            current = list(schedule.current)
            current[i] += 1
            return replace(schedule, current=tuple(current), cursor=i)
    raise StateError("no constraint below full length")


def full_schedule(constraints: Sequence[CountingConstraint]) -> IncrementSchedule:
    """Schedule that is final from the start, for direct solving."""
    incremented = [c for c in constraints if c.incrementable]
    full = tuple(c.l for c in incremented)
    return IncrementSchedule(tuple(c.id for c in incremented), full, full)


class IncrementalSynthesizer:
    """
    Runs incremental and direct synthesis.

    Following Single Responsibility Principle: graph construction, lifting,
    solving, storing and strategy extraction are delegated.
    """

    def __init__(
        self,
        solver: RegionSolverProtocol | None = None,
        extractor: StrategyExtractor | None = None,
        on_increment: Callable[[IncrementCertificate], None] | None = None,
    ):
        """
        Initialize synthesizer.

        Args:
            solver: Solver for lifted games
            extractor: Strategy extractor
            on_increment: Called with every solved increment (graph dumps)
        """
        self.solver = solver or LiftedGameSolver()
        self.extractor = extractor or StrategyExtractor()
        self.on_increment = on_increment

    def prepare(
        self,
        game: GameGraph,
        constraints: Sequence[CountingConstraint],
        options: SynthesisOptions,
    ) -> tuple[tuple[CountingConstraint, ...], tuple[str, ...]]:
        """
        Validate inputs and translate EGO-MAX constraints.

        Returns:
            Working constraints and the ids of translated constraints

        Raises:
            InputError: If the graph or a constraint is invalid.
            RationalityError: If the adversary can be forced into a violation.
        """
        report = validate_graph(game)
        if not report.valid:
            raise InputError(f"invalid game graph: {report.summary()}")
        check_constraints(game, constraints)
        if options.check_rationality:
            rational = validate_rationality(game, constraints)
            if not rational.valid:
                raise RationalityError(rational.summary(), rational)

        if not options.translate:
            return tuple(constraints), ()
        working = []
        translated = []
        for c in constraints:
            if c.player is Player.EGO and c.kind is ConstraintKind.MAX:
                working.append(translate_max_to_min(c))
                translated.append(c.id)
            else:
                working.append(c)
        if translated:
            logger.info(f"Translated max constraints to min form: {', '.join(translated)}")
        return tuple(working), tuple(translated)

    def run(
        self,
        game: GameGraph,
        win: WinningCondition,
        constraints: Sequence[CountingConstraint],
        options: SynthesisOptions | None = None,
    ) -> SynthesisResult:
        """
        Run incremental synthesis.

        Args:
            game: Arena
            win: EGO's winning condition
            constraints: Counting constraints in input order
            options: Run options

        Returns:
            Decision, run report and (when winnable) a strategy machine
        """
        options = options or SynthesisOptions()
        working, translated = self.prepare(game, constraints, options)
        schedule = initialize_lengths(working, options.init, options.mode, game)
        return self._loop(game, win, working, schedule, options.mode.value, translated)

    def run_direct(
        self,
        game: GameGraph,
        win: WinningCondition,
        constraints: Sequence[CountingConstraint],
        options: SynthesisOptions | None = None,
    ) -> SynthesisResult:
        """Solve once at full lengths with an empty store."""
        options = options or SynthesisOptions()
        working, translated = self.prepare(game, constraints, options)
        return self._loop(game, win, working, full_schedule(working), DIRECT_MODE, translated)

    def _loop(
        self,
        game: GameGraph,
        win: WinningCondition,
        working: tuple[CountingConstraint, ...],
        schedule: IncrementSchedule,
        mode: str,
        translated: tuple[str, ...],
    ) -> SynthesisResult:
        store = WinningStore()
        increments: list[IncrementStats] = []
        planned = schedule.remaining_steps + 1
        ego_count = sum(1 for c in working if c.player is Player.EGO)
        index = 0

        while True:
            index += 1
            current = schedule.apply(working)
            pruned = store.size > 0
            started = time.perf_counter()
            graph = SituationGraphBuilder(game, current).build(store)
            region = self.solver.solve(lift_winning_condition(graph, win))
            elapsed_ms = (time.perf_counter() - started) * 1000.0

            certificate = IncrementCertificate(index, graph, region)
            if self.on_increment is not None:
                self.on_increment(certificate)
            won = graph.initial in region
            if not won and not schedule.is_final:
                store.insert(certificate)

            stats = self._stats(index, graph, region, store.size, elapsed_ms, pruned)
            increments.append(stats)
            logger.info(
                f"Increment {index} at lengths {stats.lengths}: {stats.situations} situations, "
                f"region {stats.region_size}, store {stats.store_size} ({elapsed_ms:.1f} ms)"
            )

            if won or schedule.is_final:
                break
            schedule = advance_lengths(schedule)

        report = RunReport(mode, tuple(increments), translated, ego_count, planned)
        final_lengths = {c.id: c.l for c in current}
        if not won:
            logger.info(f"Not winnable after {index} increment(s) ({report.total_ms:.1f} ms)")
            return SynthesisResult(Decision.NOT_WINNABLE, final_lengths, report)

        strategy = self.extractor.extract(certificate, store)
        logger.info(
            f"Winnable after {index} increment(s) at lengths {final_lengths}; "
            f"strategy has {strategy.size} states ({report.total_ms:.1f} ms)"
        )
        return SynthesisResult(Decision.WINNABLE, final_lengths, report, strategy)

    @staticmethod
    def _stats(
        index: int,
        graph: SituationGraph,
        region: Region,
        store_size: int,
        elapsed_ms: float,
        pruned: bool,
    ) -> IncrementStats:
        inner = {v for v in region.nodes if not graph.is_sink(v)}
        region_edges = sum(
            1 for v in inner for e in graph.arena.edges[v] if e.target in inner
        )
        return IncrementStats(
            index=index,
            lengths=graph.lengths,
            situations=graph.situation_count,
            sink_states=graph.sink_count,
            edges=graph.edge_count,
            region_size=len(inner),
            region_edges=region_edges,
            violating=len(graph.flagged(Flag.TO_LOSE_SINK)),
            covered=len(graph.flagged(Flag.TO_WIN_SINK)),
            store_size=store_size,
            elapsed_ms=elapsed_ms,
            under_approximation=pruned,
        )


def run_incremental(
    game: GameGraph,
    win: WinningCondition,
    constraints: Sequence[CountingConstraint],
    options: SynthesisOptions | None = None,
    solver: RegionSolverProtocol | None = None,
) -> SynthesisResult:
    """Run incremental synthesis with the given options and solver."""
    return IncrementalSynthesizer(solver).run(game, win, constraints, options)


def run_direct(
    game: GameGraph,
    win: WinningCondition,
    constraints: Sequence[CountingConstraint],
    options: SynthesisOptions | None = None,
    solver: RegionSolverProtocol | None = None,
) -> SynthesisResult:
    """Solve at full lengths in a single increment."""
    return IncrementalSynthesizer(solver).run_direct(game, win, constraints, options)
