"""
Window Counting Constraints.

Window satisfaction semantics, the max-to-min translation and a streaming
sliding-window monitor for finite play prefixes.
"""

import logging
from collections import deque
from collections.abc import Iterable, Sequence
from dataclasses import replace

from ..domain.formula import Not
from ..domain.models import (
    Action,
    ConstraintKind,
    CountingConstraint,
    Entry,
    GameGraph,
    HistoryVector,
    Player,
    Prefix,
    Verdict,
    WindowVerdict,
)
from ..errors import InputError
from .formula import eval_formula

logger = logging.getLogger(__name__)


def translate_max_to_min(constraint: CountingConstraint) -> CountingConstraint:
    """
    Rewrite an EGO-MAX constraint as the equivalent EGO-MIN constraint.

    "a at most k times out of l" holds exactly when "not a at least l-k
    times out of l" holds.

    Raises:
        InputError: If the constraint is not an EGO-MAX constraint.
    """
    if constraint.kind is not ConstraintKind.MAX or constraint.player is not Player.EGO:
        raise InputError(f"only EGO max constraints can be translated, got {constraint}")
    return replace(
        constraint,
        id=f"{constraint.id}.neg",
        kind=ConstraintKind.MIN,
        formula=Not(constraint.formula),
        k=constraint.l - constraint.k,
        origin=constraint.id,
    )


def window_satisfied(
    entries: Sequence[Entry],
    k: int,
    kind: ConstraintKind,
    length: int | None = None,
) -> bool:
    """
    Check one window given as a history vector.

    Args:
        entries: Window entries over {1, 0, None}, most recent first;
            None entries form a suffix
        k: Count bound
        kind: MIN counts None optimistically, MAX counts only explicit 1s
        length: Expected window length (defaults to len(entries))

    Raises:
        InputError: On a length mismatch.
    """
    if length is not None and len(entries) != length:
        raise InputError(f"window has {len(entries)} entries, expected {length}")
    if kind is ConstraintKind.MIN:
        return sum(1 for e in entries if e != 0) >= k
    return sum(1 for e in entries if e == 1) <= k


class WindowMonitor:
    """
    Streaming monitor of one constraint over a player's own turns.

    Keeps the last l own turns and re-checks the window ending at every new
    turn. Partial windows at the end of a prefix are covered by the same
    check: padding a short window with empty slots counts them as satisfying
    for MIN and as not counting for MAX, which is exactly "can still be
    completed in some way". Once violated, the verdict stays violated.
    """

    def __init__(self, constraint: CountingConstraint, alphabet: frozenset[str] | None = None):
        self.constraint = constraint
        self.alphabet = alphabet
        self._window: deque[bool] = deque(maxlen=constraint.l)
        self._turns = 0
        self._verdict = WindowVerdict(Verdict.SATISFIABLE_SO_FAR)

    @property
    def verdict(self) -> WindowVerdict:
        return self._verdict

    @property
    def turns(self) -> int:
        return self._turns

    @property
    def vector(self) -> HistoryVector:
        """Current window as a history vector, most recent turn first."""
        recent: list[Entry] = [1 if held else 0 for held in reversed(self._window)]
        return tuple(recent + [None] * (self.constraint.l - len(recent)))

    def observe(self, act: Action) -> WindowVerdict:
        """Record an own turn given its played action set."""
        if self.alphabet is None:
            held = self.constraint.formula.holds(act)
        else:
            held = eval_formula(act, self.constraint.formula, self.alphabet)
        return self.record(held)

    def record(self, held: bool) -> WindowVerdict:
        """Record whether the formula held in the next own turn."""
        self._window.append(held)
        self._turns += 1
        if self._verdict.violated:
            return self._verdict
        c = self.constraint
        if not window_satisfied(self.vector, c.k, c.kind, c.l):
            first = max(0, self._turns - c.l)
            self._verdict = WindowVerdict(Verdict.VIOLATED, (first, self._turns - 1))
            logger.debug(f"Constraint {c.id} violated in own turns {first}..{self._turns - 1}")
        return self._verdict

    def copy(self) -> "WindowMonitor":
        twin = WindowMonitor(self.constraint, self.alphabet)
        twin._window = deque(self._window, maxlen=self.constraint.l)
        twin._turns = self._turns
        twin._verdict = self._verdict
        return twin


def _check_prefix(prefix: Prefix, game: GameGraph) -> None:
    if prefix.states[0] not in game.index:
        raise InputError(f"prefix starts at unknown state {prefix.states[0]!r}")
    for i, (state, act, nxt) in enumerate(prefix.steps()):
        if game.successor(state, act) != nxt:
            letters = ",".join(sorted(act))
            raise InputError(f"step {i} ({state} -{{{letters}}}-> {nxt}) is not a transition")


def monitor_prefix(
    prefix: Prefix,
    constraints: Iterable[CountingConstraint],
    game: GameGraph,
) -> dict[str, WindowVerdict]:
    """
    Check a finite prefix against window counting constraints.

    Raises:
        InputError: If the prefix does not follow the game's transitions.
    """
    _check_prefix(prefix, game)
    monitors = [WindowMonitor(c, game.alphabet(c.player)) for c in constraints]
    for state, act, _ in prefix.steps():
        mover = game.owner[state]
        for monitor in monitors:
            if monitor.constraint.player is mover:
                monitor.observe(act)
    return {m.constraint.id: m.verdict for m in monitors}


def check_constraints(game: GameGraph, constraints: Sequence[CountingConstraint]) -> None:
    """
    Check constraints against the arena's alphabets.

    Raises:
        InputError: On duplicate ids or formula letters outside the owning
            player's alphabet.
    """
    seen: set[str] = set()
    for c in constraints:
        if c.id in seen:
            raise InputError(f"duplicate constraint id {c.id!r}")
        seen.add(c.id)
        stray = c.formula.atoms() - game.alphabet(c.player)
        if stray:
            raise InputError(
                f"formula {c.formula} uses letters outside the {c.player.value} alphabet: "
                f"{', '.join(sorted(stray))}",
                c.id,
            )
        if (c.kind is ConstraintKind.MIN and c.k == 0) or (
            c.kind is ConstraintKind.MAX and c.k == c.l
        ):
            logger.warning(f"Constraint {c.id} ({c}) never restricts play")
