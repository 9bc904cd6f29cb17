"""Tests for situation updates, extension and situation graph construction."""

from collections import deque
from random import Random

import pytest
from conftest import cc, solved

from counting_synth.core.constraints import WindowMonitor, monitor_prefix
from counting_synth.core.situations import (
    SituationGraphBuilder,
    build_situation_graph,
    is_extension,
    situation_satisfies,
    update_history,
)
from counting_synth.core.store import WinningStore
from counting_synth.domain.models import ConstraintKind, Flag, Player, Prefix, Sink, Situation
from counting_synth.errors import GenerationError, InputError, RationalityError
from counting_synth.io import GeneratorParams, generate_random_game

MIN, MAX = ConstraintKind.MIN, ConstraintKind.MAX


def reference_situations(game, constraints):
    """Unpruned breadth-first exploration over plain Situation values."""
    start = Situation(game.initial, tuple((c.id, (None,) * c.l) for c in constraints))
    ego = [c for c in constraints if c.player is Player.EGO]
    adv = [c for c in constraints if c.player is Player.ADV]
    seen = {start}
    violating = set()
    frontier = deque([start])
    while frontier:
        situation = frontier.popleft()
        if not all(situation_satisfies(situation, c) for c in ego):
            violating.add(situation)
            continue
        mover = game.owner[situation.state]
        for t in game.outgoing[situation.state]:
            history = update_history(situation.history, t.action, constraints, mover)
            succ = Situation(t.target, history)
            if mover is Player.ADV and not all(situation_satisfies(succ, c) for c in adv):
                continue
            if succ not in seen:
                seen.add(succ)
                frontier.append(succ)
    return seen, violating


class TestUpdateHistory:
    """Only the mover's vectors shift."""

    def test_mover_vector_shifts(self, small_game):
        constraints = small_game.constraints
        history = tuple((c.id, (None,) * c.l) for c in constraints)
        updated = dict(update_history(history, frozenset({"x"}), constraints, Player.EGO))
        assert updated["c1"] == (1, None, None, None)
        assert updated["c2"] == (0, None, None)
        assert updated["c3"] == (0, None, None, None, None)
        assert updated["c4"] == (None, None)

    def test_oldest_entry_drops_out(self):
        c = cc("c", Player.ADV, MIN, "b", 1, 2)
        updated = update_history((("c", (1, 0)),), frozenset(), [c], Player.ADV)
        assert updated == (("c", (0, 1)),)

    def test_unknown_constraint_rejected(self):
        with pytest.raises(InputError):
            update_history((("zz", (None,)),), frozenset(), [], Player.EGO)


class TestSituationSatisfies:
    """Per-constraint checks on situations."""

    def test_min_and_max(self):
        c_min = cc("m", Player.EGO, MIN, "a", 1, 3)
        c_max = cc("n", Player.EGO, MAX, "a", 1, 3)
        situation = Situation("7", (("m", (0, 0, None)), ("n", (1, 1, None))))
        assert situation_satisfies(situation, c_min)
        assert not situation_satisfies(situation, c_max)


class TestIsExtension:
    """Extension compares EGO-MIN vectors by prefix, all others exactly."""

    c1 = cc("c1", Player.EGO, MIN, "a", 1, 3)

    def test_longer_min_vector_extends_its_prefix(self):
        longer = Situation("7", (("c1", (0, None, None)),))
        shorter = Situation("7", (("c1", (0, None)),))
        assert is_extension(longer, shorter, [self.c1])
        assert not is_extension(shorter, longer, [self.c1])

    def test_different_state_or_prefix(self):
        base = Situation("7", (("c1", (0, 1, None)),))
        assert not is_extension(base, Situation("9", (("c1", (0, 1)),)), [self.c1])
        assert not is_extension(base, Situation("7", (("c1", (1, 1)),)), [self.c1])

    def test_other_constraints_must_match_exactly(self):
        b = cc("b", Player.ADV, MIN, "u", 1, 2)
        longer = Situation("7", (("c1", (0, None, None)), ("b", (1, 0))))
        same = Situation("7", (("c1", (0, None)), ("b", (1, 0))))
        other = Situation("7", (("c1", (0, None)), ("b", (1, 1))))
        assert is_extension(longer, same, [self.c1, b])
        assert not is_extension(longer, other, [self.c1, b])

    def test_mismatched_ids_rejected(self):
        with pytest.raises(InputError):
            is_extension(
                Situation("7", (("c1", (0,)),)),
                Situation("7", (("c9", (0,)),)),
                [self.c1],
            )


class TestSituationGraphBuilder:
    """Construction on the ten-state example and the five-state example."""

    def test_length_one_graph(self, iteration_example):
        cert = solved(iteration_example, 1)
        graph = cert.graph
        assert graph.situation_count == 2
        assert set(graph.sinks) == {Sink.LOSE_EGO, Sink.LOSE_ADV}
        assert len(graph.flagged(Flag.TO_LOSE_SINK)) == 1
        assert graph.initial not in cert.region

    def test_length_two_graph(self, iteration_example):
        cert = solved(iteration_example, 2)
        graph = cert.graph
        assert graph.situation_count == 14
        assert graph.sink_count == 2
        assert len(graph.flagged(Flag.TO_LOSE_SINK)) == 1
        inner = [v for v in cert.region.nodes if not graph.is_sink(v)]
        assert len(inner) == 10
        assert graph.initial not in cert.region

    def test_length_three_graph_is_pruned_by_the_store(self, iteration_example):
        store = WinningStore()
        store.insert(solved(iteration_example, 2, index=2))
        assert store.size == 10

        cert = solved(iteration_example, 3, store, index=3)
        graph = cert.graph
        assert graph.situation_count == 7
        assert set(graph.sinks) == {Sink.WIN_EGO, Sink.WIN_ADV}
        assert len(graph.flagged(Flag.TO_WIN_SINK)) == 2
        assert graph.flagged(Flag.TO_LOSE_SINK) == []
        assert graph.initial in cert.region

        covered = graph.node_of(Situation("7", (("c1", (0, None, None)),)))
        assert covered is not None
        assert graph.flags[covered] is Flag.TO_WIN_SINK
        index, key = graph.covers[covered]
        assert index == 2
        stored = store.certificate(2).graph
        assert stored.situation(stored.index[key]) == Situation("7", (("c1", (0, None)),))
        (edge,) = graph.arena.edges[covered]
        assert graph.keys[edge.target] is Sink.WIN_ADV

    def test_construction_is_deterministic(self, small_game):
        first = build_situation_graph(small_game.game, small_game.constraints)
        second = build_situation_graph(small_game.game, small_game.constraints)
        assert first.keys == second.keys
        assert first.arena == second.arena

    def test_size_is_bounded_by_history_count(self, small_game):
        graph = build_situation_graph(small_game.game, small_game.constraints)
        bound = small_game.game.state_count
        for c in small_game.constraints:
            bound *= 2 ** (c.l + 1) - 1
        assert graph.situation_count <= bound

    def test_matches_unpruned_reference(self, small_game):
        game, constraints = small_game.game, small_game.constraints
        graph = build_situation_graph(game, constraints)
        seen, violating = reference_situations(game, constraints)
        built = {graph.situation(v) for v in range(graph.size) if not graph.is_sink(v)}
        assert built == seen
        assert {graph.situation(v) for v in graph.flagged(Flag.TO_LOSE_SINK)} == violating

    def test_every_edge_label_is_a_base_move(self, small_game):
        game = small_game.game
        graph = build_situation_graph(game, small_game.constraints)
        for v, out in enumerate(graph.arena.edges):
            if graph.is_sink(v):
                continue
            state = graph.situation(v).state
            for edge in out:
                act = graph.action(edge)
                if act is None:
                    assert graph.is_sink(edge.target)
                else:
                    assert game.successor(state, act) == graph.situation(edge.target).state

    def test_adversary_without_compliant_move(self, adversary_budget_short):
        with pytest.raises(RationalityError):
            build_situation_graph(
                adversary_budget_short.game, adversary_budget_short.constraints
            )

    def test_export_carries_labels(self, iteration_example):
        graph = solved(iteration_example, 1).graph
        exported = graph.to_networkx()
        assert exported.number_of_nodes() == graph.size
        assert exported.nodes[0]["label"] == "(1, (-))"
        assert exported.nodes[0]["owner"] == "ego"


class TestHistoriesFollowPlays:
    """History vectors along edge paths match streaming monitors of the same play."""

    @staticmethod
    def walk_mismatches(game, constraints, rng, walks=40, depth=30):
        graph = SituationGraphBuilder(game, constraints).build()
        mismatches = []
        for _ in range(walks):
            monitors = {c.id: WindowMonitor(c, game.alphabet(c.player)) for c in constraints}
            node, moves = graph.initial, []
            for _ in range(depth):
                situation = graph.situation(node)
                expected = {cid: m.vector for cid, m in monitors.items()}
                if dict(situation.history) != expected:
                    mismatches.append((tuple(moves), situation, expected))
                    break
                broken = any(
                    m.verdict.violated
                    for m in monitors.values()
                    if m.constraint.player is Player.EGO
                )
                if broken != (graph.flags[node] is Flag.TO_LOSE_SINK):
                    mismatches.append((tuple(moves), situation, "flag"))
                    break
                out = [edge for edge in graph.arena.edges[node] if edge.transition >= 0]
                if not out:
                    break
                edge = rng.choice(out)
                act = graph.action(edge)
                mover = game.owner[situation.state]
                for monitor in monitors.values():
                    if monitor.constraint.player is mover:
                        monitor.observe(act)
                node = edge.target
                moves.append((act, graph.situation(node).state))
            if moves:
                verdicts = monitor_prefix(Prefix.from_moves(game.initial, moves), constraints, game)
                if verdicts != {cid: m.verdict for cid, m in monitors.items()}:
                    mismatches.append((tuple(moves), None, "verdicts"))
        return mismatches

    def test_five_state_example(self, small_game):
        game, _, constraints = small_game
        assert self.walk_mismatches(game, constraints, Random(0)) == []

    def test_generated_games(self):
        rng = Random(1)
        walked = 0
        for seed in range(30):
            params = GeneratorParams(
                state_count=6, constraint_count=3, adv_constraint_count=1, max_l=4, seed=seed
            )
            try:
                game, _, constraints = generate_random_game(params)
            except GenerationError:
                continue
            walked += 1
            assert self.walk_mismatches(game, constraints, rng, walks=15) == [], seed
        assert walked >= 10
