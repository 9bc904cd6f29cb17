"""Protocol interfaces for dependency injection."""

from __future__ import annotations

from random import Random
from typing import TYPE_CHECKING, Protocol

from .domain.models import Action

if TYPE_CHECKING:
    from .core.lifting import LiftedGame
    from .core.solvers import Region


class RegionSolverProtocol(Protocol):
    """Interface for solvers of lifted games."""

    name: str

    def solve(self, game: LiftedGame) -> Region:
        """
        Compute EGO's winning region of a lifted game.

        Args:
            game: Lifted game

        Returns:
            Winning region with a positional strategy for EGO
        """
        ...


class StrategyProtocol(Protocol):
    """Interface for EGO controllers driven by the simulator."""

    def initial_state(self) -> int:
        """Get the initial memory."""
        ...

    def choose(self, memory: int, state: str) -> Action:
        """
        Pick EGO's action set.

        Args:
            memory: Current memory
            state: Current base state (EGO-owned)

        Returns:
            Action set to play
        """
        ...

    def advance(self, memory: int, state: str, action: Action) -> int:
        """
        Update memory after a move.

        Args:
            memory: Current memory
            state: State the move left
            action: Action set played

        Returns:
            Next memory
        """
        ...

    def in_region(self, memory: int) -> bool:
        """Check whether the memory lies in a certified winning region."""
        ...


class AdversaryPolicyProtocol(Protocol):
    """Interface for adversary move selection during simulation."""

    def pick(self, rng: Random, options: list[tuple[Action, str]]) -> tuple[Action, str]:
        """
        Choose one of the compliant adversary moves.

        Args:
            rng: Run-local random source
            options: Compliant (action, target) pairs, in canonical order

        Returns:
            The chosen pair
        """
        ...
