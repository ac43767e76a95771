from fractions import Fraction
import math

import pytest
from hypothesis import given

from lobbykit.lobby import (
    GreedyTrace,
    VoteMatrix,
    apply_purchase,
    column_deficit,
    cost_effectiveness,
    deficit_sum,
    denormalize_solution,
    greedy_lobby,
    majority_threshold,
    normalize,
    outcome_reached,
)
from lobbykit.lobby_eval import random_instance, tight_example

from helpers import vote_matrices, wins_everything


def ones_matrix(m, n):
    return VoteMatrix.from_rows([[1] * n for _ in range(m)])


def column_with_ones(m, ones):
    return normalize(VoteMatrix.from_rows([[1] if i < ones else [0] for i in range(m)]))


@pytest.mark.parametrize("bad", [
    dict(rows=[[0, 2]]),
    dict(rows=[[0, 1], [1]]),
    dict(rows=[[0, 1]], prices=[1, 1]),
    dict(rows=[[0, 1]], target=[1]),
    dict(rows=[[0, 1]], prices=[-1]),
])
def test_vote_matrix_rejects_malformed(bad):
    with pytest.raises(ValueError):
        VoteMatrix.from_rows(bad["rows"], bad.get("prices"), bad.get("target"))


def test_vote_matrix_rejects_float_price():
    with pytest.raises(TypeError):
        VoteMatrix.from_rows([[1]], [0.5])


def test_prices_are_reduced_fractions():
    v = VoteMatrix.from_rows([[1], [0]], ["2/4", 3])
    assert v.prices == (Fraction(1, 2), Fraction(3))
    assert v.prices[0].denominator == 2


class TestNormalize:
    def test_all_ones_target_is_identity(self):
        v = VoteMatrix.from_rows([[0, 1], [1, 0]], target=[1, 1])
        norm = normalize(v)
        assert norm.entries == v.entries
        assert not any(norm.flip_mask)

    def test_single_zero_target(self):
        norm = normalize(VoteMatrix.from_rows([[0]], target=[0]))
        assert norm.entries == ((1,),)
        assert norm.flip_mask == (True,)

    def test_column_complement(self):
        v = VoteMatrix.from_rows([[0, 1], [1, 0], [1, 1]], target=[1, 0])
        norm = normalize(v)
        assert norm.entries == ((0, 0), (1, 1), (1, 0))
        assert norm.flip_mask == (False, True)
        assert norm.denormalize() == v

    @given(vote_matrices())
    def test_round_trip(self, v):
        norm = normalize(v)
        assert norm.base.target == (1,) * v.n
        assert norm.prices == v.prices
        assert norm.denormalize() == v


class TestDenormalizeSolution:
    def test_identity(self):
        norm = normalize(VoteMatrix.from_rows([[0, 1]] * 4, target=[0, 1]))
        assert denormalize_solution(norm, set()) == set()
        assert denormalize_solution(norm, {1, 3}) == {1, 3}

    def test_out_of_range(self):
        norm = normalize(ones_matrix(2, 2))
        with pytest.raises(IndexError):
            denormalize_solution(norm, {2})


class TestDeficits:
    @pytest.mark.parametrize("m,ones,expected", [(5, 1, 2), (5, 3, 0), (4, 2, 1), (4, 3, 0), (1, 0, 1)])
    def test_column_deficit(self, m, ones, expected):
        assert column_deficit(column_with_ones(m, ones), 0) == expected

    def test_column_out_of_range(self):
        with pytest.raises(IndexError):
            column_deficit(normalize(ones_matrix(1, 1)), 1)

    def test_all_ones(self):
        d = deficit_sum(normalize(ones_matrix(4, 3)))
        assert d.deficits == (0, 0, 0) and d.total == 0

    def test_tight_instance(self):
        d = deficit_sum(normalize(tight_example(3, Fraction(1, 100))))
        assert d.deficits == (1, 1, 1) and d.total == 3

    def test_all_zeros(self):
        d = deficit_sum(normalize(VoteMatrix.from_rows([[0, 0]] * 3)))
        assert d.deficits == (2, 2) and d.total == 4

    @given(vote_matrices())
    def test_deficit_ceiling(self, v):
        d = deficit_sum(normalize(v))
        assert d.total == sum(d.deficits)
        assert all(x <= math.ceil((v.m + 1) / 2) for x in d.deficits)

    @pytest.mark.parametrize("m", range(1, 9))
    def test_threshold_is_strict_majority(self, m):
        t = majority_threshold(m)
        assert 2 * t > m and 2 * (t - 1) <= m


class TestCostEffectiveness:
    def test_quotient(self):
        norm = normalize(VoteMatrix.from_rows([[0, 0, 0, 1]], [2]))
        assert cost_effectiveness(norm, 0, {0, 1, 2, 3}) == Fraction(2, 3)

    def test_no_zeros_is_infinite(self):
        norm = normalize(VoteMatrix.from_rows([[0, 1, 1]], [5]))
        assert cost_effectiveness(norm, 0, {1, 2}) == math.inf

    def test_zero_price(self):
        norm = normalize(VoteMatrix.from_rows([[0, 1]], [0]))
        assert cost_effectiveness(norm, 0, {0}) == 0

    def test_row_out_of_range(self):
        with pytest.raises(IndexError):
            cost_effectiveness(normalize(ones_matrix(1, 1)), 3, {0})


class TestGreedy:
    def test_nothing_to_do(self):
        trace = greedy_lobby(normalize(ones_matrix(3, 2)))
        assert trace.flips == [] and trace.total_price == 0 and trace.selected_rows == []

    def test_tight_instance(self):
        trace = greedy_lobby(normalize(tight_example(3, Fraction(1, 100))))
        assert trace.selected_rows == [2, 1, 0]
        assert trace.total_price == Fraction(11, 6)
        assert [f.cost for f in trace.flips] == [Fraction(1, 3), Fraction(1, 2), Fraction(1)]
        assert trace.iteration_sizes == [1, 1, 1]

    @pytest.mark.parametrize("seed", range(20))
    def test_random_instance_reaches_majority(self, seed):
        inst = random_instance(5, 3, "unit", seed=seed)
        trace = greedy_lobby(normalize(inst))
        final = VoteMatrix.from_rows(trace.final_entries)
        assert deficit_sum(normalize(final)).total == 0

    def test_ties_go_to_lowest_row(self):
        inst = VoteMatrix.from_rows([[1, 0], [1, 0], [1, 0]], [1, 1, 1])
        trace = greedy_lobby(normalize(inst))
        assert trace.selected_rows == [0, 1]

    def test_leaves_zeros_in_won_columns(self):
        # column 0 already won; row 2's zero there must stay
        inst = VoteMatrix.from_rows([[1, 0], [1, 0], [0, 0]], [1, 1, 1])
        trace = greedy_lobby(normalize(inst))
        assert trace.selected_rows == [0, 1]
        assert trace.final_entries[2] == (0, 0)

    def test_zero_price_voter_preferred(self):
        inst = VoteMatrix.from_rows([[0, 0], [0, 1], [0, 1]], [5, 0, 1])
        trace = greedy_lobby(normalize(inst))
        assert trace.selected_rows[0] == 1

    @given(vote_matrices())
    def test_trace_invariants(self, v):
        norm = normalize(v)
        d0 = deficit_sum(norm).total
        trace = greedy_lobby(norm)
        assert trace.initial_deficit == d0
        assert len(trace.flips) == d0 == sum(trace.iteration_sizes)
        assert [f.k for f in trace.flips] == list(range(1, d0 + 1))
        assert len(set(trace.selected_rows)) == len(trace.selected_rows)
        assert trace.total_price == sum((v.prices[i] for i in trace.selected_rows), Fraction(0))
        assert trace.total_price == sum((f.cost for f in trace.flips), Fraction(0))
        hist = trace.deficit_history
        for before, after in zip(hist, hist[1:]):
            assert all(a <= b for a, b in zip(after, before))
        assert sum(hist[-1]) == 0
        # each iteration's drop equals its flips, one per distinct column
        it_flips = {}
        for f in trace.flips:
            it_flips.setdefault(f.iteration, []).append(f)
        for j, fl in it_flips.items():
            cols = [f.column for f in fl]
            assert len(set(cols)) == len(cols)
            drop = [b - a for b, a in zip(hist[j - 1], hist[j])]
            assert sorted(c for c in range(v.n) if drop[c]) == sorted(cols)
            assert all(x in (0, 1) for x in drop)
            assert all(f.cost == v.prices[f.row] / len(fl) for f in fl)

    @given(vote_matrices())
    def test_solution_wins_original(self, v):
        rows = greedy_lobby(normalize(v)).selected_rows
        chosen = denormalize_solution(normalize(v), rows)
        assert outcome_reached(apply_purchase(v, chosen))
        assert wins_everything(v, chosen)

    @given(vote_matrices())
    def test_deterministic(self, v):
        assert greedy_lobby(normalize(v)) == greedy_lobby(normalize(v))


def test_outcome_reached_matches_oracle():
    v = VoteMatrix.from_rows([[1, 0], [1, 0], [0, 1]], target=[1, 0])
    assert outcome_reached(v) == wins_everything(v, ()) is True
    v = VoteMatrix.from_rows([[1, 0], [0, 1]], target=[1, 0])
    assert outcome_reached(v) == wins_everything(v, ()) is False


def test_greedy_trace_default_is_empty():
    assert GreedyTrace().total_price == 0
