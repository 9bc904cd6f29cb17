"""
Strategy Extraction.

Turns the positional strategy of the winning increment into a finite-state
machine for EGO. Where a play reaches a situation covered by a stored
winner, the machine switches to the stored increment's situation graph
(histories truncated to its lengths) and follows that increment's strategy.
Stored strategies may switch again to older increments; lengths only
shrink along a chain of switches, so every chain is finite.
"""

import logging
from collections import deque

from ..domain.models import (
    Action,
    Flag,
    MachineState,
    Player,
    StrategyMachine,
    SwitchRecord,
)
from ..errors import StateError, StrategyError
from .store import IncrementCertificate, WinningStore

logger = logging.getLogger(__name__)

MachineKey = tuple[int, int]  # (increment, node)


class StrategyExtractor:
    """Builds strategy machines from solved increments."""

    def extract(self, final: IncrementCertificate, store: WinningStore) -> StrategyMachine:
        """
        Extract the stitched strategy.

        Args:
            final: Certificate of the increment whose region holds the
                initial situation
            store: Store holding the certificates of earlier increments

        Returns:
            Machine whose initial state tracks the initial situation

        Raises:
            StateError: If the initial situation is not winning.
            StrategyError: If a reached EGO situation has no strategy move.
        """
        graph = final.graph
        if graph.initial not in final.region:
            raise StateError("initial situation is not in the winning region")

        certificates = dict(store.certificates)
        certificates[final.index] = final
        switches: dict[MachineKey, SwitchRecord] = {}

        def resolve(key: MachineKey) -> MachineKey:
            increment, node = key
            while True:
                cert = certificates[increment]
                if cert.graph.flags[node] is not Flag.TO_WIN_SINK:
                    return increment, node
                target_increment, stored_key = cert.graph.covers[node]
                target = certificates.get(target_increment)
                if target is None:
                    raise StrategyError(f"no certificate for increment {target_increment}")
                target_node = target.graph.index[stored_key]
                if (increment, node) not in switches:
                    situation = cert.graph.situation(node)
                    switches[(increment, node)] = SwitchRecord(
                        from_increment=increment,
                        to_increment=target_increment,
                        state=str(situation.state),
                        from_history=situation.history,
                        to_history=target.graph.situation(target_node).history,
                    )
                increment, node = target_increment, target_node

        ids: dict[MachineKey, int] = {}
        order: list[MachineKey] = []

        def identify(key: MachineKey) -> int:
            machine_id = ids.get(key)
            if machine_id is None:
                machine_id = len(order)
                ids[key] = machine_id
                order.append(key)
                frontier.append(key)
            return machine_id

        frontier: deque[MachineKey] = deque()
        identify(resolve((final.index, graph.initial)))
        states: list[MachineState] = []

        while frontier:
            increment, node = frontier.popleft()
            cert = certificates[increment]
            g = cert.graph
            owner = g.owner(node)
            situation = g.situation(node)
            if g.flags[node] is not Flag.NORMAL:
                raise StrategyError(f"strategy reaches {situation} in increment {increment}")

            successors: dict[Action, int] = {}
            emit: Action | None = None
            if owner is Player.EGO:
                pos = cert.region.strategy.get(node)
                if pos is None:
                    raise StrategyError(
                        f"no strategy move at {situation} in increment {increment}"
                    )
                edge = g.arena.edges[node][pos]
                emit = g.action(edge)
                if emit is None:
                    raise StrategyError(f"strategy at {situation} picks a sink edge")
                successors[emit] = identify(resolve((increment, edge.target)))
            else:
                for edge in g.arena.edges[node]:
                    act = g.action(edge)
                    if act is None:
                        raise StrategyError(f"adversary at {situation} reaches a sink")
                    successors[act] = identify(resolve((increment, edge.target)))

            states.append(
                MachineState(
                    id=ids[(increment, node)],
                    owner=owner,
                    increment=increment,
                    state=str(situation.state),
                    history=situation.history,
                    emit=emit,
                    successors=successors,
                    certified=node in (cert.region.closure or cert.region.nodes),
                )
            )

        used = sorted({increment for increment, _ in order})
        machine = StrategyMachine(
            states=tuple(states),
            switches=tuple(switches.values()),
            lengths={i: certificates[i].graph.lengths for i in used},
        )
        logger.debug(
            f"Strategy machine: {machine.size} states over increments {used}, "
            f"{len(machine.switches)} switch rule(s)"
        )
        return machine


def extract_strategy(final: IncrementCertificate, store: WinningStore) -> StrategyMachine:
    """Extract the stitched strategy machine of a winning increment."""
    return StrategyExtractor().extract(final, store)
