"""
Random Game Generator.

Seeded generator of valid games for benchmark and property suites. All
randomness comes from one `random.Random` (Mersenne Twister) seeded with
`GeneratorParams.seed`, so equal parameters give byte-equal game files.
"""

import logging
from dataclasses import dataclass
from itertools import combinations
from random import Random

from ..core.validator import validate_graph, validate_rationality
from ..domain.formula import Formula, Not, Var
from ..domain.models import (
    Action,
    ConstraintKind,
    CountingConstraint,
    GameGraph,
    Player,
    Transition,
    WinKind,
    WinningCondition,
)
from ..errors import GenerationError
from .game_file import GameFile

logger = logging.getLogger(__name__)

EGO_LETTERS = "abcdefgh"
ADV_LETTERS = "pqrstuvw"


@dataclass(frozen=True)
class GeneratorParams:
    """
    Parameters of a random game.

    Attributes:
        state_count: Number of states (even indices are EGO-owned)
        branching: Maximal number of moves per state
        ego_alphabet_size: Letters EGO may play
        adv_alphabet_size: Letters ADV may play
        constraint_count: EGO constraints
        max_k: Largest count bound
        max_l: Largest window length
        min_l: Smallest window length
        adv_constraint_count: ADV constraints
        win_kind: Winning condition kind (None picks one at random)
        max_color: Largest parity color
        single_letter_ego: EGO moves play exactly one letter
        min_ratio: Share of EGO constraints generated as MIN (the rest are MAX)
        seed: Random seed
    """

    state_count: int = 6
    branching: int = 2
    ego_alphabet_size: int = 2
    adv_alphabet_size: int = 2
    constraint_count: int = 1
    max_k: int = 2
    max_l: int = 4
    min_l: int = 1
    adv_constraint_count: int = 0
    win_kind: WinKind | None = None
    max_color: int = 3
    single_letter_ego: bool = False
    min_ratio: float = 0.75
    seed: int = 0


def _subsets(letters: list[str]) -> list[Action]:
    """All subsets of `letters`, smallest first."""
    return [
        frozenset(combo)
        for size in range(len(letters) + 1)
        for combo in combinations(letters, size)
    ]


def _check_params(params: GeneratorParams) -> None:
    if params.state_count < 2:
        raise GenerationError("a game needs at least two states")
    if params.branching < 1:
        raise GenerationError("branching must be positive")
    if not 1 <= params.ego_alphabet_size <= len(EGO_LETTERS):
        raise GenerationError(f"EGO alphabet size must lie in 1..{len(EGO_LETTERS)}")
    if not 1 <= params.adv_alphabet_size <= len(ADV_LETTERS):
        raise GenerationError(f"ADV alphabet size must lie in 1..{len(ADV_LETTERS)}")
    if not 1 <= params.min_l <= params.max_l:
        raise GenerationError("window lengths need 1 <= min_l <= max_l")
    if params.max_k < 0 or params.constraint_count < 0 or params.adv_constraint_count < 0:
        raise GenerationError("counts and bounds must be non-negative")


class RandomGameGenerator:
    """Generates valid, rational games from seeded parameters."""

    def __init__(self, params: GeneratorParams):
        _check_params(params)
        self.params = params
        self.rng = Random(params.seed)

    def generate(self) -> GameFile:
        """
        Generate one game.

        Raises:
            GenerationError: If the ADV constraints admit no action set that
                keeps all of them satisfied, or the result fails validation.
        """
        p, rng = self.params, self.rng
        ego_letters = list(EGO_LETTERS[: p.ego_alphabet_size])
        adv_letters = list(ADV_LETTERS[: p.adv_alphabet_size])

        ego_constraints = [
            self._constraint(f"c{i + 1}", Player.EGO, ego_letters)
            for i in range(p.constraint_count)
        ]
        adv_constraints = [
            self._constraint(f"a{i + 1}", Player.ADV, adv_letters)
            for i in range(p.adv_constraint_count)
        ]
        compliant = [
            act
            for act in _subsets(adv_letters)
            if all(
                c.formula.holds(act) == (c.kind is ConstraintKind.MIN) for c in adv_constraints
            )
        ]
        if not compliant:
            raise GenerationError(
                "no ADV action set satisfies every ADV min formula and falsifies every max formula"
            )

        states = tuple(f"s{i}" for i in range(p.state_count))
        owner = {s: Player.EGO if i % 2 == 0 else Player.ADV for i, s in enumerate(states)}
        ego_states = [s for s in states if owner[s] is Player.EGO]
        adv_states = [s for s in states if owner[s] is Player.ADV]
        if p.single_letter_ego:
            ego_actions = [frozenset((letter,)) for letter in ego_letters]
        else:
            ego_actions = _subsets(ego_letters)
        adv_actions = _subsets(adv_letters)

        transitions: list[Transition] = []
        for state in states:
            if owner[state] is Player.EGO:
                actions, targets, required = ego_actions, adv_states, None
            else:
                actions, targets, required = adv_actions, ego_states, rng.choice(compliant)
            count = min(rng.randint(1, p.branching), len(actions))
            chosen = [] if required is None else [required]
            others = [a for a in actions if a != required]
            chosen += rng.sample(others, min(count - len(chosen), len(others)))
            for act in chosen:
                transitions.append(Transition(state, act, rng.choice(targets)))

        game = GameGraph(
            states,
            owner,
            states[0],
            frozenset(ego_letters),
            frozenset(adv_letters),
            tuple(transitions),
        )
        win = self._winning(states)
        constraints = tuple(ego_constraints + adv_constraints)

        report = validate_graph(game)
        if not report.valid:
            raise GenerationError(f"generated graph is invalid: {report.summary()}")
        rational = validate_rationality(game, constraints)
        if not rational.valid:
            raise GenerationError(f"generated game violates rationality: {rational.summary()}")
        logger.debug(
            f"Generated game (seed {p.seed}): {len(states)} states, {len(transitions)} "
            f"transitions, {len(constraints)} constraint(s), {win.kind.value}"
        )
        return GameFile(game, win, constraints)

    def _constraint(self, cid: str, player: Player, letters: list[str]) -> CountingConstraint:
        p, rng = self.params, self.rng
        formula: Formula = Var(rng.choice(letters))
        if player is Player.EGO and rng.random() < 0.25:
            formula = Not(formula)
        if player is Player.EGO:
            kind = ConstraintKind.MIN if rng.random() < p.min_ratio else ConstraintKind.MAX
        else:
            kind = rng.choice([ConstraintKind.MIN, ConstraintKind.MAX])
        length = rng.randint(p.min_l, p.max_l)
        upper = min(p.max_k, length)
        k = rng.randint(min(1, upper), upper)
        return CountingConstraint(cid, player, kind, formula, k, length)

    def _winning(self, states: tuple[str, ...]) -> WinningCondition:
        p, rng = self.params, self.rng
        kind = p.win_kind or rng.choice(list(WinKind))
        if kind is WinKind.PARITY:
            return WinningCondition.parity({s: rng.randint(0, p.max_color) for s in states})
        chosen = frozenset(s for s in states if rng.random() < 0.7)
        return WinningCondition(kind, chosen)


def generate_random_game(params: GeneratorParams) -> GameFile:
    """Generate a valid random game; equal parameters give equal games."""
    return RandomGameGenerator(params).generate()
