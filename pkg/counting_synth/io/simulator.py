"""
Play Simulator.

Plays a strategy against a random adversary that only takes moves keeping
its own constraints satisfied, monitors every constraint along the play and
collects observables of the winning condition.
"""

import logging
from dataclasses import dataclass
from random import Random

from ..core.constraints import WindowMonitor
from ..domain.models import (
    Action,
    CountingConstraint,
    GameGraph,
    Player,
    RunOutcome,
    SimulationReport,
    WinKind,
    WinningCondition,
)
from ..errors import StateError, StrategyError
from ..protocols import AdversaryPolicyProtocol, StrategyProtocol

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SimulationParams:
    """
    Parameters of a simulation.

    Attributes:
        steps: Turns per play
        runs: Number of plays
        seed: Base seed; play r uses the seed string "<seed>-<r>"
    """

    steps: int = 200
    runs: int = 1
    seed: int = 0


class UniformAdversary:
    """Picks uniformly among the compliant moves."""

    def pick(self, rng: Random, options: list[tuple[Action, str]]) -> tuple[Action, str]:
        return options[rng.randrange(len(options))]


class PlaySimulator:
    """
    Simulates plays of EGO's strategy.

    Following Single Responsibility Principle: move selection for the
    adversary is delegated to a policy.
    """

    def __init__(
        self,
        game: GameGraph,
        win: WinningCondition,
        constraints: tuple[CountingConstraint, ...] | list[CountingConstraint],
        adversary: AdversaryPolicyProtocol | None = None,
    ):
        """
        Initialize simulator.

        Args:
            game: Arena
            win: EGO's winning condition
            constraints: Constraints as given in the input (untranslated)
            adversary: Adversary move policy
        """
        self.game = game
        self.win = win
        self.constraints = tuple(constraints)
        self.adversary = adversary or UniformAdversary()

    def run(self, strategy: StrategyProtocol, params: SimulationParams) -> SimulationReport:
        """Play `params.runs` plays of `params.steps` turns each."""
        outcomes = tuple(self.play(strategy, run, params) for run in range(params.runs))
        report = SimulationReport(outcomes, params.steps, params.seed)
        logger.info(
            f"Simulated {params.runs} run(s) x {params.steps} steps: "
            f"{report.ego_violation_count} EGO violation(s), "
            f"{report.adv_violation_count} ADV violation(s), "
            f"{report.unsafe_visits} unsafe visit(s), {report.region_exits} region exit(s)"
        )
        return report

    def play(self, strategy: StrategyProtocol, run: int, params: SimulationParams) -> RunOutcome:
        """
        Play one run.

        Raises:
            StrategyError: If the strategy has no decision at a reached state.
            StateError: If the adversary has no compliant move.
        """
        game, win = self.game, self.win
        rng = Random(f"{params.seed}-{run}")
        monitors = [WindowMonitor(c, game.alphabet(c.player)) for c in self.constraints]
        adv_monitors = [m for m in monitors if m.constraint.player is Player.ADV]

        state = game.initial
        memory = strategy.initial_state()
        visited = [state]
        memories = [memory]
        region_exits = 0 if strategy.in_region(memory) else 1

        for _ in range(params.steps):
            mover = game.owner[state]
            if mover is Player.EGO:
                act = strategy.choose(memory, state)
                target = game.successor(state, act)
                if target is None:
                    letters = ",".join(sorted(act))
                    raise StrategyError(f"strategy plays {{{letters}}} at {state}, not a move")
            else:
                options = [
                    (t.action, t.target)
                    for t in game.outgoing[state]
                    if not any(m.copy().observe(t.action).violated for m in adv_monitors)
                ]
                if not options:
                    raise StateError(f"adversary has no compliant move at {state}")
                act, target = self.adversary.pick(rng, options)

            for monitor in monitors:
                if monitor.constraint.player is mover:
                    monitor.observe(act)
            memory = strategy.advance(memory, state, act)
            state = target
            visited.append(state)
            memories.append(memory)
            if not strategy.in_region(memory):
                region_exits += 1

        return self._outcome(run, params.steps, monitors, visited, memories, region_exits)

    def _outcome(
        self,
        run: int,
        steps: int,
        monitors: list[WindowMonitor],
        visited: list[str],
        memories: list[int],
        region_exits: int,
    ) -> RunOutcome:
        win = self.win
        violated = [m.constraint for m in monitors if m.verdict.violated]
        marks = [s in win.states for s in visited]

        unsafe = sum(1 for m in marks if not m) if win.kind is WinKind.SAFETY else 0
        rejecting = sum(1 for m in marks if not m) if win.kind is WinKind.CO_BUCHI else 0
        reached = None
        if win.kind in (WinKind.REACHABILITY, WinKind.BUCHI):
            reached = next((i for i, m in enumerate(marks) if m), None)
        gap = None
        if win.kind is WinKind.BUCHI:
            gap, last = 0, 0
            for i, m in enumerate(marks):
                if m:
                    gap = max(gap, i - last)
                    last = i
            gap = max(gap, len(marks) - 1 - last)
        cycle_color = None
        if win.kind is WinKind.PARITY:
            end = len(memories) - 1
            start = next(
                (j for j in range(end - 1, -1, -1) if memories[j] == memories[end]), None
            )
            if start is not None:
                cycle_color = min(win.coloring[s] for s in visited[start:end])

        return RunOutcome(
            run=run,
            steps=steps,
            ego_violations=tuple(c.id for c in violated if c.player is Player.EGO),
            adv_violations=tuple(c.id for c in violated if c.player is Player.ADV),
            unsafe_visits=unsafe,
            target_reached_at=reached,
            max_accepting_gap=gap,
            rejecting_visits=rejecting,
            cycle_min_color=cycle_color,
            region_exits=region_exits,
        )


def simulate(
    game: GameGraph,
    win: WinningCondition,
    constraints: tuple[CountingConstraint, ...] | list[CountingConstraint],
    strategy: StrategyProtocol,
    steps: int = 200,
    seed: int = 0,
    runs: int = 1,
) -> SimulationReport:
    """Simulate `runs` plays of `steps` turns against the uniform compliant adversary."""
    simulator = PlaySimulator(game, win, constraints)
    return simulator.run(strategy, SimulationParams(steps, runs, seed))
