"""Tests for length schedules and incremental synthesis runs."""

from dataclasses import replace
from random import Random

import pytest
from conftest import cc, make_game

from counting_synth.core.engine import (
    IncrementalSynthesizer,
    IncrementSchedule,
    SynthesisOptions,
    advance_lengths,
    full_schedule,
    initialize_lengths,
    run_direct,
    run_incremental,
)
from counting_synth.core.solvers import ZielonkaSolver, strategy_is_closed
from counting_synth.domain.models import (
    ConstraintKind,
    Decision,
    Flag,
    IncrementMode,
    InitMode,
    Player,
    WinKind,
    WinningCondition,
)
from counting_synth.errors import GenerationError, InputError, RationalityError, StateError
from counting_synth.io import GeneratorParams, bench_row, generate_random_game, summarize_reduction

MIN, MAX = ConstraintKind.MIN, ConstraintKind.MAX
SEQUENTIAL, ALTERNATING = IncrementMode.SEQUENTIAL, IncrementMode.ALTERNATING


def generated(**kwargs):
    """Generated game, or None when the parameters admit none."""
    try:
        return generate_random_game(GeneratorParams(**kwargs))
    except GenerationError:
        return None


def random_condition(kind, states, rng):
    """Winning condition of `kind` over a random non-empty subset of `states`."""
    if kind is WinKind.PARITY:
        return WinningCondition.parity({s: rng.randint(0, 3) for s in states})
    chosen = {s for s in states if rng.random() < 0.6} or {rng.choice(states)}
    return WinningCondition(kind, frozenset(chosen))


class TestIncrementSchedule:
    """Starting lengths and growth order."""

    def test_minimal_start_grows_by_one(self):
        schedule = initialize_lengths([cc("c1", Player.EGO, MIN, "a", 1, 7)])
        assert schedule.current == (1,)
        assert advance_lengths(schedule).current == (2,)
        assert schedule.remaining_steps == 6

    def test_zero_bound_starts_at_length_one(self):
        schedule = initialize_lengths([cc("c1", Player.EGO, MIN, "a", 0, 3)])
        assert schedule.current == (1,)

    def test_only_ego_min_constraints_are_scheduled(self, small_game):
        schedule = initialize_lengths(small_game.constraints)
        assert schedule.order == ("c1", "c3")
        assert schedule.current == (2, 1)
        assert schedule.full == (4, 5)
        assert schedule.length("c4") is None

    def test_alternating_picks_the_next_constraint(self):
        schedule = IncrementSchedule(("a", "b"), (4, 5), (2, 1), ALTERNATING, cursor=0)
        grown = advance_lengths(schedule)
        assert grown.current == (2, 2)
        assert grown.cursor == 1
        assert advance_lengths(grown).current == (3, 2)

    def test_alternating_skips_full_constraints(self):
        schedule = IncrementSchedule(("a", "b"), (4, 5), (4, 3), ALTERNATING, cursor=1)
        assert advance_lengths(schedule).current == (4, 4)

    def test_sequential_grows_the_first_short_constraint(self):
        schedule = IncrementSchedule(("a", "b"), (4, 5), (4, 3), SEQUENTIAL)
        assert advance_lengths(schedule).current == (4, 4)
        schedule = IncrementSchedule(("a", "b"), (4, 5), (2, 1), SEQUENTIAL)
        assert advance_lengths(schedule).current == (3, 1)

    def test_sum_of_bounds_start(self):
        game = make_game(
            ["1"], ["2"], [("1", "a", "2"), ("1", "b", "2"), ("2", "", "1")], ego_letters="ab"
        )
        constraints = [
            cc("c1", Player.EGO, MIN, "a", 1, 5),
            cc("c2", Player.EGO, MIN, "b", 2, 6),
        ]
        schedule = initialize_lengths(constraints, InitMode.SUM_K, game=game)
        assert schedule.current == (3, 3)

    def test_sum_of_bounds_needs_single_letter_moves(self, small_game):
        with pytest.raises(InputError):
            initialize_lengths(small_game.constraints, InitMode.SUM_K, game=small_game.game)

    def test_empty_schedule_is_final(self):
        schedule = initialize_lengths([cc("b1", Player.ADV, MIN, "b", 1, 3)])
        assert schedule.is_final
        with pytest.raises(StateError):
            advance_lengths(schedule)

    def test_full_schedule(self, small_game):
        schedule = full_schedule(small_game.constraints)
        assert schedule.is_final
        assert schedule.lengths == {"c1": 4, "c3": 5}

    def test_apply_keeps_other_constraints(self, small_game):
        schedule = initialize_lengths(small_game.constraints)
        lengths = {c.id: c.l for c in schedule.apply(small_game.constraints)}
        assert lengths == {"c1": 2, "c2": 3, "c3": 1, "c4": 2}


class TestIncrementalRun:
    """Three increments on the ten-state example."""

    def test_golden_run(self, iteration_example):
        result = run_incremental(*iteration_example)
        assert result.decision is Decision.WINNABLE
        assert result.increments == 3
        assert result.final_lengths == {"c1": 3}

        report = result.report
        assert report.mode == "sequential"
        assert report.full_increments == 7
        first, second, third = report.increments

        assert (first.situations, first.sink_states, first.region_size) == (2, 2, 0)
        assert (first.violating, first.store_size) == (1, 0)
        assert not first.under_approximation

        assert (second.situations, second.sink_states) == (14, 2)
        assert (second.region_size, second.region_edges) == (10, 12)
        assert (second.violating, second.store_size) == (1, 10)

        assert (third.situations, third.sink_states, third.covered) == (7, 2, 2)
        assert (third.region_size, third.region_edges, third.violating) == (7, 6, 0)
        assert third.under_approximation
        assert third.store_size == 10

    def test_golden_strategy(self, iteration_example):
        strategy = run_incremental(*iteration_example).strategy
        assert strategy is not None
        memory = strategy.initial_state()
        assert strategy.choose(memory, "1") == frozenset()
        assert len(strategy.switches) == 2
        assert set(strategy.lengths) <= {1, 2, 3}
        assert 3 in strategy.lengths

    def test_unwinnable_at_start_takes_one_increment(self, iteration_example):
        game, win, _ = iteration_example
        result = run_incremental(game, win, [cc("c1", Player.EGO, MIN, "a", 7, 7)])
        assert result.decision is Decision.NOT_WINNABLE
        assert result.increments == 1
        assert result.strategy is None

    def test_without_ego_min_constraints_one_increment(self, adversary_budget):
        result = run_incremental(*adversary_budget)
        assert result.winnable
        assert result.increments == 1
        assert result.report.full_increments == 1

    def test_alternating_mode_on_two_constraints(self, small_game):
        options = SynthesisOptions(mode=ALTERNATING)
        result = run_incremental(*small_game, options)
        assert result.report.mode == "alternating"
        assert result.decision is run_direct(*small_game).decision

    def test_max_constraints_are_translated(self, small_game):
        result = run_incremental(*small_game)
        assert result.report.translated == ("c2",)
        untranslated = run_incremental(*small_game, SynthesisOptions(translate=False))
        assert untranslated.report.translated == ()
        assert untranslated.decision is result.decision

    def test_irrational_game_is_refused(self, forced_violation):
        with pytest.raises(RationalityError) as exc:
            run_incremental(*forced_violation)
        assert exc.value.report is not None
        with pytest.raises(RationalityError):
            run_incremental(*forced_violation, SynthesisOptions(check_rationality=False))

    def test_invalid_graph_is_refused(self, iteration_example):
        _, win, constraints = iteration_example
        game = make_game(["1"], ["2"], [("1", "", "2")], ego_letters="a")
        with pytest.raises(InputError):
            run_incremental(game, win, constraints)

    def test_zielonka_solver_gives_the_same_run(self, iteration_example):
        game, _, constraints = iteration_example
        win = WinningCondition.buchi({"5"})
        dedicated = run_incremental(game, win, constraints)
        zielonka = run_incremental(game, win, constraints, solver=ZielonkaSolver())
        assert dedicated.decision is zielonka.decision
        assert dedicated.increments == zielonka.increments


class TestDirectRun:
    """Single solve at full lengths."""

    def test_ten_state_example_is_winnable(self, iteration_example):
        result = run_direct(*iteration_example)
        assert result.winnable
        assert result.report.mode == "direct"
        assert result.increments == 1
        assert result.final_lengths == {"c1": 7}
        assert result.report.increments[0].store_size == 0

    def test_five_state_example_is_winnable(self, small_game):
        assert run_direct(*small_game).winnable
        assert run_incremental(*small_game).winnable

    def test_empty_safe_set_is_not_winnable(self, iteration_example):
        game, _, constraints = iteration_example
        result = run_direct(game, WinningCondition.safety(set()), constraints)
        assert result.decision is Decision.NOT_WINNABLE


class TestReportConsistency:
    """Per-increment statistics match the graphs handed to the hook."""

    def test_stats_match_certificates(self, iteration_example):
        certificates = []
        synthesizer = IncrementalSynthesizer(on_increment=certificates.append)
        result = synthesizer.run(*iteration_example)
        assert len(certificates) == result.increments
        for cert, stats in zip(certificates, result.report.increments):
            graph = cert.graph
            assert stats.index == cert.index
            assert stats.situations == graph.situation_count
            assert stats.sink_states == graph.sink_count
            assert stats.edges == graph.edge_count
            assert stats.violating == len(graph.flagged(Flag.TO_LOSE_SINK))
            assert stats.covered == len(graph.flagged(Flag.TO_WIN_SINK))
            assert stats.region_size <= stats.situations
            assert strategy_is_closed(graph.arena, cert.region)

    def test_store_only_grows(self, small_game):
        result = run_incremental(*small_game)
        sizes = [stats.store_size for stats in result.report.increments]
        assert sizes == sorted(sizes)


@pytest.mark.slow
class TestGeneratedGames:
    """Property suites over seeded random games."""

    def test_incremental_and_direct_decisions_agree(self):
        """Each generated arena is solved under all five winning conditions."""
        disagreements = []
        games = 0
        for seed in range(300):
            game_file = generated(
                state_count=4 + seed % 5,
                constraint_count=2,
                min_ratio=1.0,
                max_l=4,
                adv_constraint_count=seed % 2,
                seed=seed,
            )
            if game_file is None:
                continue
            games += 1
            game, _, constraints = game_file
            rng = Random(seed)
            for kind in WinKind:
                win = random_condition(kind, game.states, rng)
                direct = run_direct(game, win, constraints).decision
                for mode in (SEQUENTIAL, ALTERNATING):
                    options = SynthesisOptions(mode=mode)
                    decision = run_incremental(game, win, constraints, options).decision
                    if decision is not direct:
                        disagreements.append((seed, kind.value, mode.value))
            if games == 200:
                break
        assert games == 200
        assert disagreements == []

    def test_longer_min_windows_stay_winnable(self):
        counterexamples = []
        checked = 0
        for seed in range(150):
            game_file = generated(constraint_count=1, min_ratio=1.0, max_l=4, seed=seed)
            if game_file is None:
                continue
            game, win, constraints = game_file
            (c,) = constraints
            checked += 1
            if run_direct(game, win, [c]).winnable:
                if not run_direct(game, win, [c.with_length(c.l + 1)]).winnable:
                    counterexamples.append(seed)
        assert checked >= 100
        assert counterexamples == []

    def test_max_windows_grown_with_their_bound_stay_winnable(self):
        """max(k, l) winnable implies max(k + 1, l + 1) winnable, solved through translation."""
        counterexamples = []
        checked = 0
        for seed in range(200):
            game_file = generated(constraint_count=1, min_ratio=0.0, max_l=4, seed=seed)
            if game_file is None:
                continue
            game, win, constraints = game_file
            (c,) = constraints
            assert c.kind is MAX
            checked += 1
            options = SynthesisOptions(translate=True)
            if run_direct(game, win, [c], options).winnable:
                grown = replace(c, k=c.k + 1, l=c.l + 1)
                if not run_direct(game, win, [grown], options).winnable:
                    counterexamples.append(seed)
        assert checked >= 100
        assert counterexamples == []

    def test_incremental_runs_shrink_the_state_space(self):
        rows = []
        early_games = 0
        for seed in range(1000):
            game_file = generated(
                state_count=6,
                branching=3,
                constraint_count=1,
                min_ratio=1.0,
                min_l=5,
                max_l=7,
                win_kind=WinKind.SAFETY,
                seed=seed,
            )
            if game_file is None:
                continue
            incremental = run_incremental(*game_file)
            if incremental.increments >= incremental.report.full_increments:
                continue
            direct = run_direct(*game_file)
            name = f"g{seed}"
            rows += [bench_row(name, incremental), bench_row(name, direct)]
            assert incremental.report.final_situations < direct.report.final_situations
            early_games += 1
            if early_games == 20:
                break
        assert early_games == 20
        summary = summarize_reduction(rows)
        assert summary.early_runs > 0
        assert summary.median_ratio is not None
        assert summary.median_ratio >= 2.0
