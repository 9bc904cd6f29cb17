"""
Game Validator.

Checks arenas against the game-graph conditions and checks that the
adversary can never be forced into violating its own counting constraints.
Violations are reported as data; nothing here raises for an invalid game.
"""

import logging
from collections import deque
from collections.abc import Sequence

import networkx as nx

from ..domain.models import (
    CountingConstraint,
    GameGraph,
    Player,
    Transition,
    ValidationReport,
    Violation,
)
from ..errors import InputError
from .constraints import check_constraints
from .situations import ConstraintLayout

logger = logging.getLogger(__name__)

BIPARTITION = "Bipartition"
DEADLOCK = "Absence of deadlock"
ALPHABET = "Alphabet restriction"
DETERMINACY = "Determinacy"
INITIAL = "Initial ownership"
UNKNOWN_STATE = "Unknown state"
RATIONALITY = "Rationality"


def validate_graph(game: GameGraph) -> ValidationReport:
    """
    Check the arena conditions.

    Rules: every transition alternates owners (Bipartition), every state
    has a move (Absence of deadlock), moves use their owner's letters
    (Alphabet restriction), a state never has two moves with the same
    action set and different targets (Determinacy), and the initial state
    belongs to EGO (Initial ownership). References to undeclared states are
    reported as Unknown state.

    Returns:
        Report listing every violation with its witness
    """
    violations: list[Violation] = []
    known = set(game.states)

    for state in game.states:
        if state not in game.owner:
            violations.append(Violation(UNKNOWN_STATE, f"state {state} has no owner", state=state))

    if game.initial not in known:
        violations.append(
            Violation(INITIAL, f"initial state {game.initial} is not declared", state=game.initial)
        )
    elif game.owner.get(game.initial) is not Player.EGO:
        violations.append(
            Violation(INITIAL, f"initial state {game.initial} is not EGO-owned", state=game.initial)
        )

    targets: dict[tuple[str, frozenset[str]], Transition] = {}
    for t in game.transitions:
        if t.source not in known or t.target not in known:
            violations.append(
                Violation(
                    UNKNOWN_STATE,
                    f"transition {t} references an undeclared state",
                    transition=t,
                )
            )
            continue
        source_owner, target_owner = game.owner.get(t.source), game.owner.get(t.target)
        if source_owner is None or target_owner is None:
            continue
        if source_owner is target_owner:
            violations.append(
                Violation(
                    BIPARTITION, f"transition {t} stays with {source_owner.value}", transition=t
                )
            )
        stray = t.action - game.alphabet(source_owner)
        if stray:
            violations.append(
                Violation(
                    ALPHABET,
                    f"transition {t} uses letters outside the {source_owner.value} alphabet: "
                    f"{', '.join(sorted(stray))}",
                    transition=t,
                )
            )
        seen = targets.get((t.source, t.action))
        if seen is None:
            targets[(t.source, t.action)] = t
        elif seen.target != t.target:
            violations.append(
                Violation(DETERMINACY, f"transitions {seen} and {t} share a label", transition=t)
            )

    for state in game.states:
        if not game.outgoing.get(state):
            violations.append(
                Violation(DEADLOCK, f"state {state} has no outgoing transition", state=state)
            )

    report = ValidationReport(tuple(violations))
    if report.valid:
        reachable = nx.descendants(game.arena, game.initial) | {game.initial}
        unreachable = known - reachable
        if unreachable:
            logger.warning(f"States unreachable from {game.initial}: {sorted(unreachable)}")
    else:
        logger.debug(f"Graph validation failed: {report.summary()}")
    return report


def validate_rationality(
    game: GameGraph,
    constraints: Sequence[CountingConstraint],
) -> ValidationReport:
    """
    Check that the adversary can always keep its constraints satisfiable.

    Explores pairs (state, ADV histories) reachable along plays in which the
    adversary only takes constraint-compliant moves (EGO moves freely) and
    reports every ADV-owned pair without a compliant move.

    Raises:
        InputError: If the graph is invalid or a constraint is malformed.
    """
    graph_report = validate_graph(game)
    if not graph_report.valid:
        raise InputError(f"invalid game graph: {graph_report.summary()}")
    check_constraints(game, constraints)

    layout = ConstraintLayout(tuple(c for c in constraints if c.player is Player.ADV))
    moves = layout.compile_moves(game)
    owners = [game.owner[s] for s in game.states]
    start = (game.index[game.initial], layout.initial_codes())
    seen = {start}
    frontier = deque([start])
    violations: list[Violation] = []

    while frontier:
        state, codes = frontier.popleft()
        compliant = 0
        for move in moves[state]:
            succ_codes = layout.apply(codes, move)
            if owners[state] is Player.ADV and not layout.satisfied(
                succ_codes, [i for i, _ in move.updates]
            ):
                continue
            compliant += 1
            succ = (move.target, succ_codes)
            if succ not in seen:
                seen.add(succ)
                frontier.append(succ)
        if compliant == 0:
            name = game.states[state]
            histories = dict(layout.decode(codes))
            violations.append(
                Violation(
                    RATIONALITY,
                    f"adversary at {name} with histories {histories} has only violating moves",
                    state=name,
                    histories=histories,
                )
            )

    logger.debug(
        f"Rationality check explored {len(seen)} pairs, {len(violations)} violation(s)"
    )
    return ValidationReport(tuple(violations))
