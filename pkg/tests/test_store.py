"""Tests for the winning store."""

from itertools import permutations

from conftest import at_length, solved

from counting_synth.core import history as codec
from counting_synth.core.situations import ConstraintLayout, is_extension
from counting_synth.core.store import WinningStore, store_insert
from counting_synth.domain.models import Flag, Situation


class TestWinningStore:
    """Antichain of winners from the length-two increment of the ten-state example."""

    def test_insert_counts_region_situations(self, iteration_example):
        store = WinningStore()
        cert = solved(iteration_example, 2, index=2)
        assert store.insert(cert) == 10
        assert len(store) == 10
        assert store.certificate(2) is cert

    def test_reinsert_adds_nothing(self, iteration_example):
        store = WinningStore()
        cert = solved(iteration_example, 2, index=2)
        store.insert(cert)
        assert store.insert(cert) == 0
        assert store.size == 10

    def test_empty_region_keeps_the_certificate(self, iteration_example):
        store = store_insert(WinningStore(), solved(iteration_example, 1, index=1))
        assert store.size == 0
        assert 1 in store.certificates

    def test_entries_form_an_antichain(self, iteration_example):
        store = WinningStore()
        store.insert(solved(iteration_example, 2, index=2))
        constraints = iteration_example.constraints
        situations = [situation for _, situation in store.entries()]
        assert len(situations) == 10
        for longer, shorter in permutations(situations, 2):
            assert not is_extension(longer, shorter, constraints)

    def test_find_matches_longer_situations(self, iteration_example):
        store = WinningStore()
        store.insert(solved(iteration_example, 2, index=2))
        layout = ConstraintLayout(at_length(iteration_example.constraints, 3))
        state = iteration_example.game.index["7"]

        hit = store.find(state, (codec.encode((0, None, None)),), layout)
        assert hit is not None
        index, key = hit
        assert index == 2
        assert key == (state, (codec.encode((0, None)),))

        assert store.find(state, (codec.encode((1, 1, 1)),), layout) is None

    def test_shorter_lengths_never_match(self, iteration_example):
        store = WinningStore()
        store.insert(solved(iteration_example, 2, index=2))
        layout = ConstraintLayout(at_length(iteration_example.constraints, 1))
        state = iteration_example.game.index["7"]
        assert store.find(state, (codec.encode((0,)),), layout) is None

    def test_covered_situations_are_not_stored_again(self, iteration_example):
        store = WinningStore()
        store.insert(solved(iteration_example, 2, index=2))
        cert = solved(iteration_example, 3, store, index=3)
        graph = cert.graph
        fresh = [
            v for v in cert.region.nodes
            if graph.flags[v] is Flag.NORMAL
            and store.find(*graph.keys[v], graph.layout) is None
        ]
        before = store.size
        assert store.insert(cert) == len(fresh)
        assert store.size == before + len(fresh)
        for _, situation in store.entries():
            assert isinstance(situation, Situation)
            assert not situation.is_sink
