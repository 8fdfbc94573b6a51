import pytest

from selftrial import OrderStrategy, PhaseLabel, Schedule, default_schedule, phase_on_day, phase_sequence, total_duration
from selftrial.errors import DomainError


def seq_str(order, pairs):
    return "".join(p.value for p in phase_sequence(order, pairs))


class TestDefaultSchedule:
    def test_settings(self):
        s = default_schedule()
        assert (s.phase_duration_days, s.phase_pairs, s.order) == (7, 2, OrderStrategy.ALTERNATING)

    def test_sequence_abab(self):
        assert seq_str(default_schedule().order, default_schedule().phase_pairs) == "ABAB"

    def test_total_duration_28(self):
        assert total_duration(default_schedule()) == 28


class TestPhaseSequence:
    @pytest.mark.parametrize(
        "order,pairs,expected",
        [
            (OrderStrategy.ALTERNATING, 2, "ABAB"),
            (OrderStrategy.COUNTERBALANCED, 2, "ABBA"),
            (OrderStrategy.ALTERNATING, 1, "AB"),
            (OrderStrategy.COUNTERBALANCED, 1, "AB"),
            (OrderStrategy.COUNTERBALANCED, 3, "ABBAAB"),
        ],
    )
    def test_known_sequences(self, order, pairs, expected):
        assert seq_str(order, pairs) == expected

    @pytest.mark.parametrize("pairs", range(1, 11))
    @pytest.mark.parametrize("order", list(OrderStrategy))
    def test_balance(self, order, pairs):
        seq = phase_sequence(order, pairs)
        assert len(seq) == 2 * pairs
        assert seq.count(PhaseLabel.A) == seq.count(PhaseLabel.B) == pairs

    @pytest.mark.parametrize("pairs", range(1, 11))
    def test_alternating_never_repeats_adjacent(self, pairs):
        seq = phase_sequence(OrderStrategy.ALTERNATING, pairs)
        assert all(a != b for a, b in zip(seq, seq[1:]))

    @pytest.mark.parametrize("pairs", range(1, 11))
    def test_counterbalanced_pairs_are_balanced(self, pairs):
        seq = phase_sequence(OrderStrategy.COUNTERBALANCED, pairs)
        for i in range(pairs):
            pair = seq[2 * i : 2 * i + 2]
            assert pair.count(PhaseLabel.A) == pair.count(PhaseLabel.B) == 1

    def test_invalid_pairs(self):
        with pytest.raises(DomainError) as e:
            phase_sequence(OrderStrategy.ALTERNATING, 0)
        assert e.value.code == "INVALID_PAIRS"


class TestTotalDuration:
    @pytest.mark.parametrize(
        "duration,pairs,expected",
        [(7, 2, 28), (1, 3, 6), (28, 2, 112)],
    )
    def test_products(self, duration, pairs, expected):
        assert total_duration(Schedule(duration, pairs, OrderStrategy.ALTERNATING)) == expected


class TestPhaseOnDay:
    def test_first_day(self):
        p = phase_on_day(default_schedule(), 0)
        assert (p.label, p.phase_ordinal, p.day_within_phase) == (PhaseLabel.A, 0, 0)

    def test_day_seven_starts_phase_b(self):
        p = phase_on_day(default_schedule(), 7)
        assert (p.label, p.phase_ordinal, p.day_within_phase) == (PhaseLabel.B, 1, 0)

    def test_counterbalanced_one_day_phases(self):
        p = phase_on_day(Schedule(1, 3, OrderStrategy.COUNTERBALANCED), 2)
        assert (p.label, p.phase_ordinal, p.day_within_phase) == (PhaseLabel.B, 2, 0)

    @pytest.mark.parametrize("day", [-1, 28, 100])
    def test_out_of_range(self, day):
        with pytest.raises(DomainError) as e:
            phase_on_day(default_schedule(), day)
        assert e.value.code == "DAY_OUT_OF_RANGE"

    @pytest.mark.parametrize("duration", [1, 3, 7])
    @pytest.mark.parametrize("pairs", [1, 2, 3, 5])
    @pytest.mark.parametrize("order", list(OrderStrategy))
    def test_agrees_with_naive_expansion(self, duration, pairs, order):
        # oracle: write each sequence label out day by day
        schedule = Schedule(duration, pairs, order)
        expanded = []
        for label in phase_sequence(order, pairs):
            expanded += [label] * duration
        for day, expected in enumerate(expanded):
            assert phase_on_day(schedule, day).label == expected
