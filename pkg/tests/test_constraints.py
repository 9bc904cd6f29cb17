"""Tests for window semantics, translation, monitoring and the history codec."""

from itertools import product

import pytest
from conftest import cc

from counting_synth.core import history as codec
from counting_synth.core.constraints import (
    WindowMonitor,
    check_constraints,
    monitor_prefix,
    translate_max_to_min,
    window_satisfied,
)
from counting_synth.domain.formula import Not, Var
from counting_synth.domain.models import ConstraintKind, Player, Prefix
from counting_synth.errors import InputError

MIN, MAX = ConstraintKind.MIN, ConstraintKind.MAX


def play(*moves: tuple[str, str]) -> list[tuple[frozenset[str], str]]:
    """(letters, target) pairs with letters written as a string."""
    return [(frozenset(letters), target) for letters, target in moves]


class TestWindowSatisfied:
    """Single-window checks on history vectors."""

    def test_min_counts_empty_slots_optimistically(self):
        assert window_satisfied((0, None, None), 1, MIN)
        assert not window_satisfied((0, 0, None), 2, MIN)

    def test_min_full_window(self):
        assert window_satisfied((1, 0, 1, 0), 2, MIN)
        assert not window_satisfied((1, 0, 0, 0), 2, MIN)

    def test_max_counts_only_recorded_ones(self):
        assert window_satisfied((1, None, None), 1, MAX)
        assert not window_satisfied((1, 1, None), 1, MAX)

    def test_length_mismatch_rejected(self):
        with pytest.raises(InputError):
            window_satisfied((1, 0), 1, MIN, length=3)


class TestTranslation:
    """max(k, l) on a formula equals min(l - k, l) on its negation."""

    def test_translated_constraint_fields(self):
        c = cc("c2", Player.EGO, MAX, "y", 2, 3)
        t = translate_max_to_min(c)
        assert t.kind is MIN
        assert t.formula == Not(Var("y"))
        assert (t.k, t.l) == (1, 3)
        assert t.origin == "c2"
        assert t.id == "c2.neg"

    def test_only_ego_max_constraints_translate(self):
        with pytest.raises(InputError):
            translate_max_to_min(cc("c1", Player.EGO, MIN, "x", 1, 3))
        with pytest.raises(InputError):
            translate_max_to_min(cc("b1", Player.ADV, MAX, "b", 1, 3))

    @pytest.mark.slow
    def test_exhaustive_equivalence_on_short_sequences(self):
        """Every bit sequence up to 12 turns, every (k, l) with l <= 6."""
        counterexamples = []
        for l in range(1, 7):  # noqa: E741
            for k in range(0, l + 1):
                original = cc("m", Player.EGO, MAX, "a", k, l)
                translated = translate_max_to_min(original)
                # depth-first over all sequences, sharing prefixes
                stack = [((), WindowMonitor(original), WindowMonitor(translated))]
                while stack:
                    bits, direct, flipped = stack.pop()
                    if direct.verdict.violated != flipped.verdict.violated:
                        counterexamples.append((k, l, bits))
                    if len(bits) == 12:
                        continue
                    for held in (False, True):
                        act = frozenset({"a"}) if held else frozenset()
                        d, f = direct.copy(), flipped.copy()
                        d.observe(act)
                        f.observe(act)
                        stack.append((bits + (held,), d, f))
        assert counterexamples == []


class TestPeriodicSequences:
    """Longer MIN windows with the same bound are weaker."""

    @staticmethod
    def holds_forever(bits: tuple[int, ...], k: int, length: int) -> bool:
        turns = bits * (length // len(bits) + 2)
        return all(
            window_satisfied(tuple(reversed(turns[i : i + length])), k, MIN)
            for i in range(len(bits))
        )

    def test_min_monotone_in_length(self):
        counterexamples = []
        for period in range(1, 9):
            for bits in product((0, 1), repeat=period):
                for length in range(1, 7):
                    for k in range(length + 1):
                        if self.holds_forever(bits, k, length) and not self.holds_forever(
                            bits, k, length + 1
                        ):
                            counterexamples.append((bits, k, length))
        assert counterexamples == []


class TestWindowMonitor:
    """Streaming verdicts over own turns."""

    def test_violation_is_absorbing_with_witness_window(self):
        monitor = WindowMonitor(cc("c", Player.EGO, MIN, "a", 2, 3))
        monitor.record(True)
        monitor.record(False)
        assert not monitor.verdict.violated
        monitor.record(False)
        assert monitor.verdict.violated
        assert monitor.verdict.window == (0, 2)
        monitor.record(True)
        monitor.record(True)
        assert monitor.verdict.violated

    def test_vector_lists_most_recent_first(self):
        monitor = WindowMonitor(cc("c", Player.EGO, MIN, "a", 1, 3))
        monitor.record(True)
        monitor.record(False)
        assert monitor.vector == (0, 1, None)

    def test_copy_is_independent(self):
        monitor = WindowMonitor(cc("c", Player.EGO, MAX, "a", 0, 2))
        twin = monitor.copy()
        twin.record(True)
        assert twin.verdict.violated
        assert not monitor.verdict.violated


class TestMonitorPrefix:
    """Prefix checks on the five-state example game."""

    def test_two_periods_of_the_example_play_satisfy_all_constraints(self, small_game):
        game, _, constraints = small_game
        period = [("y", "2"), ("a", "3"), ("x", "2"), ("a", "3"), ("xy", "4"), ("a", "1")]
        prefix = Prefix.from_moves("1", play(*(period * 2)))
        verdicts = monitor_prefix(prefix, constraints, game)
        assert set(verdicts) == {"c1", "c2", "c3", "c4"}
        assert not any(v.violated for v in verdicts.values())

    def test_five_turns_without_y_violate_min_y(self, small_game):
        game, _, constraints = small_game
        moves = [
            ("x", "4"), ("b", "3"), ("x", "2"), ("a", "3"), ("x", "2"),
            ("a", "3"), ("x", "2"), ("a", "3"), ("x", "2"),
        ]
        verdicts = monitor_prefix(Prefix.from_moves("1", play(*moves)), constraints, game)
        assert verdicts["c3"].violated
        assert verdicts["c3"].window == (0, 4)
        assert not verdicts["c1"].violated
        assert not verdicts["c4"].violated

    def test_prefix_must_follow_transitions(self, small_game):
        game, _, constraints = small_game
        with pytest.raises(InputError):
            monitor_prefix(Prefix.from_moves("1", play(("x", "2"))), constraints, game)


class TestCheckConstraints:
    """Constraint sanity checks against the arena."""

    def test_duplicate_ids_rejected(self, small_game):
        game, _, constraints = small_game
        with pytest.raises(InputError):
            check_constraints(game, [constraints[0], constraints[0]])

    def test_letter_of_other_player_rejected(self, small_game):
        game, _, _ = small_game
        with pytest.raises(InputError):
            check_constraints(game, [cc("bad", Player.EGO, MIN, "a", 1, 2)])

    def test_vacuous_constraints_are_logged(self, small_game, caplog):
        game, _, _ = small_game
        vacuous = [cc("lazy", Player.EGO, MIN, "x", 0, 3), cc("roomy", Player.EGO, MAX, "y", 2, 2)]
        check_constraints(game, vacuous)
        assert "lazy" in caplog.text
        assert "roomy" in caplog.text
        assert "never restricts play" in caplog.text

    def test_bounds_are_checked_on_construction(self):
        with pytest.raises(InputError):
            cc("c", Player.EGO, MIN, "a", 3, 2)
        with pytest.raises(InputError):
            cc("c", Player.EGO, MIN, "a", 1, 0)


class TestHistoryCodec:
    """Packed history vectors agree with the tuple semantics."""

    def test_encode_decode(self):
        vector = (1, 0, None, None)
        assert codec.decode(codec.encode(vector), 4) == vector

    def test_push_drops_oldest_entry(self):
        code = codec.encode((1, 0, 1))
        assert codec.decode(codec.push(code, False, 3), 3) == (0, 1, 0)

    def test_truncate_keeps_recent_entries(self):
        code = codec.encode((0, 1, 1))
        assert codec.decode(codec.truncate(code, 2), 2) == (0, 1)

    def test_entries_after_empty_slot_rejected(self):
        with pytest.raises(InputError):
            codec.encode((None, 1))

    def test_packed_check_matches_window_check(self):
        for length in range(1, 5):
            for filled in range(length + 1):
                for bits in product((0, 1), repeat=filled):
                    vector = tuple(bits) + (None,) * (length - filled)
                    code = codec.encode(vector)
                    for k in range(length + 1):
                        for kind in (MIN, MAX):
                            assert codec.code_satisfies(code, kind, k, length) == (
                                window_satisfied(vector, k, kind)
                            )
