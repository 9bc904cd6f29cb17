"""
Solver Arena.

Dense integer view of a game graph: node owners and, per node, outgoing
edges ordered by canonical action code. Situation graphs and hand-built
test games both reach the solvers through this type.
"""

from collections.abc import Sequence
from dataclasses import dataclass
from functools import cached_property
from typing import NamedTuple

from ..domain.models import Player


class Edge(NamedTuple):
    """Outgoing edge: canonical action code, target node, base transition index."""

    code: int
    target: int
    transition: int = -1


@dataclass(frozen=True)
class Arena:
    """
    Immutable game arena over nodes 0..n-1.

    Attributes:
        owners: Owner of each node
        edges: Outgoing edges of each node, sorted by action code
    """

    owners: tuple[Player, ...]
    edges: tuple[tuple[Edge, ...], ...]

    @classmethod
    def from_successors(
        cls,
        owners: Sequence[Player],
        successors: Sequence[Sequence[int]],
    ) -> "Arena":
        """Build an arena whose edge codes are the successor positions."""
        return cls(
            tuple(owners),
            tuple(
                tuple(Edge(i, target) for i, target in enumerate(targets))
                for targets in successors
            ),
        )

    @property
    def size(self) -> int:
        return len(self.owners)

    @property
    def edge_count(self) -> int:
        return sum(len(out) for out in self.edges)

    @cached_property
    def predecessors(self) -> tuple[tuple[int, ...], ...]:
        """Predecessors of every node, listed once per edge."""
        preds: list[list[int]] = [[] for _ in range(self.size)]
        for source, out in enumerate(self.edges):
            for edge in out:
                preds[edge.target].append(source)
        return tuple(tuple(p) for p in preds)

    def full_mask(self) -> bytearray:
        """Membership mask selecting every node."""
        return bytearray(b"\x01") * self.size

    def mask_of(self, nodes: Sequence[int] | frozenset[int] | set[int]) -> bytearray:
        mask = bytearray(self.size)
        for v in nodes:
            mask[v] = 1
        return mask
