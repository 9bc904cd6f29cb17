"""
Winning Store.

Antichain of winning situations collected over earlier increments. Entries
are grouped by the length vector of the increment that certified them, so
checking whether a new situation extends a stored one is one truncation
and one hash lookup per group.
"""

import logging
from collections.abc import Iterator
from dataclasses import dataclass

from ..domain.models import Flag, Sink, Situation
from . import history as codec
from .situations import ConstraintLayout, SituationGraph, SituationKey
from .solvers import Region

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class IncrementCertificate:
    """
    Solved increment kept for strategy stitching.

    Attributes:
        index: Increment number
        graph: The increment's situation graph
        region: Its winning region and positional strategy
    """

    index: int
    graph: SituationGraph
    region: Region

    @property
    def lengths(self) -> tuple[int, ...]:
        return self.graph.layout.lengths


class WinningStore:
    """
    Minimal set of stored winning situations.

    No stored situation extends another one. Each entry remembers the
    increment whose certificate proves it winning.
    """

    def __init__(self) -> None:
        self._groups: dict[tuple[int, ...], dict[SituationKey, int]] = {}
        self._certificates: dict[int, IncrementCertificate] = {}

    @property
    def size(self) -> int:
        return sum(len(group) for group in self._groups.values())

    def __len__(self) -> int:
        return self.size

    def certificate(self, index: int) -> IncrementCertificate:
        return self._certificates[index]

    @property
    def certificates(self) -> dict[int, IncrementCertificate]:
        return dict(self._certificates)

    def find(
        self,
        state: int,
        codes: tuple[int, ...],
        layout: ConstraintLayout,
    ) -> tuple[int, SituationKey] | None:
        """
        Find a stored situation that the given situation extends.

        Args:
            state: Base state index
            codes: Packed histories in `layout` order
            layout: Layout the codes were built with

        Returns:
            (increment, stored key) of a covering entry, or None
        """
        incrementable = layout.incrementable
        lengths = layout.lengths
        for stored_lengths, group in self._groups.items():
            if any(
                stored > current if incr else stored != current
                for stored, current, incr in zip(stored_lengths, lengths, incrementable)
            ):
                continue
            key = (
                state,
                tuple(
                    codec.truncate(code, stored) if incr else code
                    for code, stored, incr in zip(codes, stored_lengths, incrementable)
                ),
            )
            hit = group.get(key)
            if hit is not None:
                return hit, key
        return None

    def insert(self, certificate: IncrementCertificate) -> int:
        """
        Add the winning situations of a solved increment.

        Situations extending a stored entry (store-covered situations among
        them) are skipped, which keeps the set an antichain.

        Returns:
            Number of entries added
        """
        graph = certificate.graph
        layout = graph.layout
        self._certificates[certificate.index] = certificate
        group = self._groups.setdefault(layout.lengths, {})
        added = 0
        for node in sorted(certificate.region.nodes):
            if graph.flags[node] is not Flag.NORMAL:
                continue
            key = graph.keys[node]
            if isinstance(key, Sink):
                continue
            state, codes = key
            if self.find(state, codes, layout) is not None:
                continue
            group[(state, codes)] = certificate.index
            added += 1
        if not group:
            del self._groups[layout.lengths]
        logger.debug(
            f"Store: +{added} from increment {certificate.index}, size now {self.size}"
        )
        return added

    def entries(self) -> Iterator[tuple[int, Situation]]:
        """Iterate over (increment, situation) pairs of all stored entries."""
        for group in self._groups.values():
            for key, index in group.items():
                graph = self._certificates[index].graph
                yield index, graph.situation(graph.index[key])


def store_insert(store: WinningStore, certificate: IncrementCertificate) -> WinningStore:
    """Insert a solved increment's region into the store and return the store."""
    store.insert(certificate)
    return store
