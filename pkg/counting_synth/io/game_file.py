"""
Game File Codec.

Games are stored as JSON documents tagged with the format
"counting-game/1":

    {
      "format": "counting-game/1",
      "alphabets": {"ego": ["a"], "adv": ["u", "d"]},
      "states": [{"id": "1", "owner": "ego"}, {"id": "2", "owner": "adv"}],
      "initial": "1",
      "transitions": [{"from": "1", "action": [], "to": "2"}],
      "winning": {"kind": "safety", "states": ["1", "2"]},
      "constraints": [
        {"id": "c1", "player": "ego", "kind": "min", "formula": "a", "k": 1, "l": 7}
      ]
    }

Parity conditions carry "coloring" (state -> color) instead of "states".
Diagnostics name the JSON path of the offending value; JSON syntax errors
give line and column.
"""

import json
import logging
from pathlib import Path
from typing import Any, NamedTuple

from ..core.constraints import check_constraints
from ..core.formula import parse_formula
from ..core.validator import validate_graph
from ..domain.models import (
    ConstraintKind,
    CountingConstraint,
    GameGraph,
    Player,
    Transition,
    WinKind,
    WinningCondition,
)
from ..errors import InputError, ParseError

logger = logging.getLogger(__name__)

GAME_FORMAT = "counting-game/1"


class GameFile(NamedTuple):
    """Parsed game document: arena, winning condition and constraints."""

    game: GameGraph
    win: WinningCondition
    constraints: tuple[CountingConstraint, ...]

    def to_text(self) -> str:
        return serialize_game(self.game, self.win, self.constraints)


def _field(obj: dict[str, Any], key: str, path: str, kind: type | tuple[type, ...]) -> Any:
    if key not in obj:
        raise InputError(f"missing field {key!r}", path)
    value = obj[key]
    if not isinstance(value, kind) or (kind is int and isinstance(value, bool)):
        names = kind.__name__ if isinstance(kind, type) else "/".join(k.__name__ for k in kind)
        raise InputError(f"expected {names}, got {type(value).__name__}", f"{path}.{key}")
    return value


def _enum(enum_type: Any, value: str, path: str) -> Any:
    try:
        return enum_type(value)
    except ValueError:
        allowed = ", ".join(m.value for m in enum_type)
        raise InputError(f"unknown value {value!r} (expected one of {allowed})", path) from None


def _letters(values: list[Any], path: str) -> frozenset[str]:
    for i, letter in enumerate(values):
        if not isinstance(letter, str) or not letter:
            raise InputError("letters must be non-empty strings", f"{path}[{i}]")
    return frozenset(values)


def _parse_states(doc: dict[str, Any]) -> tuple[tuple[str, ...], dict[str, Player]]:
    states: list[str] = []
    owner: dict[str, Player] = {}
    for i, entry in enumerate(_field(doc, "states", "$", list)):
        path = f"states[{i}]"
        if not isinstance(entry, dict):
            raise InputError("expected object", path)
        state = str(_field(entry, "id", path, (str, int)))
        if state in owner:
            raise InputError(f"duplicate state {state!r}", f"{path}.id")
        states.append(state)
        owner[state] = _enum(Player, _field(entry, "owner", path, str), f"{path}.owner")
    return tuple(states), owner


def _parse_transitions(
    doc: dict[str, Any],
    known: set[str],
    letters: frozenset[str],
) -> tuple[Transition, ...]:
    transitions = []
    for i, entry in enumerate(_field(doc, "transitions", "$", list)):
        path = f"transitions[{i}]"
        if not isinstance(entry, dict):
            raise InputError("expected object", path)
        source = str(_field(entry, "from", path, (str, int)))
        target = str(_field(entry, "to", path, (str, int)))
        for key, state in (("from", source), ("to", target)):
            if state not in known:
                raise InputError(f"unknown state {state!r}", f"{path}.{key}")
        action = _letters(_field(entry, "action", path, list), f"{path}.action")
        stray = action - letters
        if stray:
            raise InputError(f"unknown letters {sorted(stray)}", f"{path}.action")
        transitions.append(Transition(source, action, target))
    return tuple(transitions)


def _parse_winning(doc: dict[str, Any], known: set[str]) -> WinningCondition:
    winning = _field(doc, "winning", "$", dict)
    kind = _enum(WinKind, _field(winning, "kind", "winning", str), "winning.kind")
    if kind is WinKind.PARITY:
        coloring = _field(winning, "coloring", "winning", dict)
        for state, color in coloring.items():
            if state not in known:
                raise InputError(f"unknown state {state!r}", f"winning.coloring.{state}")
            if not isinstance(color, int) or isinstance(color, bool) or color < 0:
                raise InputError(
                    "colors must be non-negative integers", f"winning.coloring.{state}"
                )
        return WinningCondition.parity({str(s): c for s, c in coloring.items()})
    states = [str(s) for s in _field(winning, "states", "winning", list)]
    for i, state in enumerate(states):
        if state not in known:
            raise InputError(f"unknown state {state!r}", f"winning.states[{i}]")
    return WinningCondition(kind, frozenset(states))


def _parse_constraints(doc: dict[str, Any]) -> tuple[CountingConstraint, ...]:
    constraints = []
    for i, entry in enumerate(doc.get("constraints", [])):
        path = f"constraints[{i}]"
        if not isinstance(entry, dict):
            raise InputError("expected object", path)
        cid = str(entry.get("id", f"c{i + 1}"))
        player = _enum(Player, _field(entry, "player", path, str), f"{path}.player")
        kind = _enum(ConstraintKind, _field(entry, "kind", path, str), f"{path}.kind")
        formula = parse_formula(_field(entry, "formula", path, str), f"{path}.formula")
        k = _field(entry, "k", path, int)
        length = _field(entry, "l", path, int)
        try:
            constraints.append(CountingConstraint(cid, player, kind, formula, k, length))
        except InputError as e:
            raise InputError(e.message, path) from None
    return tuple(constraints)


def parse_game(text: str) -> GameFile:
    """
    Parse and validate a game document.

    Args:
        text: JSON game document

    Returns:
        Validated (game, winning condition, constraints)

    Raises:
        ParseError: On JSON or formula syntax errors.
        InputError: On unknown states or letters, malformed fields or an
            arena that fails validation (the message names the rule).
    """
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError(
            e.msg, f"line {e.lineno}, column {e.colno}", line=e.lineno, column=e.colno
        ) from None
    if not isinstance(doc, dict):
        raise InputError("game document must be a JSON object", "$")
    tag = doc.get("format", GAME_FORMAT)
    if tag != GAME_FORMAT:
        raise InputError(f"unsupported format {tag!r} (expected {GAME_FORMAT})", "format")

    alphabets = _field(doc, "alphabets", "$", dict)
    ego_letters = _letters(_field(alphabets, "ego", "alphabets", list), "alphabets.ego")
    adv_letters = _letters(_field(alphabets, "adv", "alphabets", list), "alphabets.adv")
    states, owner = _parse_states(doc)
    known = set(states)
    initial = str(_field(doc, "initial", "$", (str, int)))
    if initial not in known:
        raise InputError(f"unknown state {initial!r}", "initial")
    transitions = _parse_transitions(doc, known, ego_letters | adv_letters)

    game = GameGraph(states, owner, initial, ego_letters, adv_letters, transitions)
    report = validate_graph(game)
    if not report.valid:
        first = report.violations[0]
        location = None
        if first.transition is not None:
            location = f"transitions[{transitions.index(first.transition)}]"
        elif first.state is not None:
            location = f"states[{states.index(first.state)}]" if first.state in known else "initial"
        raise InputError(f"{first.rule}: {first.message}", location)

    win = _parse_winning(doc, known)
    constraints = _parse_constraints(doc)
    check_constraints(game, constraints)
    logger.debug(
        f"Parsed game: {game.state_count} states, {game.transition_count} transitions, "
        f"{len(constraints)} constraint(s), {win.kind.value} condition"
    )
    return GameFile(game, win, constraints)


def load_game(path: Path) -> GameFile:
    """
    Read and parse a game file.

    Raises:
        InputError: If the file cannot be read or is not a valid game.
    """
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise InputError(f"cannot read game file: {e.strerror}", str(path)) from None
    return parse_game(text)


def game_document(
    game: GameGraph,
    win: WinningCondition,
    constraints: tuple[CountingConstraint, ...] | list[CountingConstraint],
) -> dict[str, Any]:
    """Build the JSON document of a game."""
    winning: dict[str, Any] = {"kind": win.kind.value}
    if win.kind is WinKind.PARITY:
        winning["coloring"] = {s: win.coloring[s] for s in game.states if s in win.coloring}
    else:
        winning["states"] = [s for s in game.states if s in win.states]
    return {
        "format": GAME_FORMAT,
        "alphabets": {"ego": sorted(game.alphabet_ego), "adv": sorted(game.alphabet_adv)},
        "states": [{"id": s, "owner": game.owner[s].value} for s in game.states],
        "initial": game.initial,
        "transitions": [
            {"from": t.source, "action": sorted(t.action), "to": t.target}
            for t in game.transitions
        ],
        "winning": winning,
        "constraints": [
            {
                "id": c.id,
                "player": c.player.value,
                "kind": c.kind.value,
                "formula": str(c.formula),
                "k": c.k,
                "l": c.l,
            }
            for c in constraints
        ],
    }


def serialize_game(
    game: GameGraph,
    win: WinningCondition,
    constraints: tuple[CountingConstraint, ...] | list[CountingConstraint],
) -> str:
    """Render a game as a JSON document that `parse_game` reads back."""
    return json.dumps(game_document(game, win, constraints), indent=2) + "\n"
