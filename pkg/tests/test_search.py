from fractions import Fraction

import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

import oracles
from conftest import elections
from undominated.core import Committee, Election, is_alpha_undominated, max_domination
from undominated.errors import BudgetExceeded, InputError
from undominated.lottery import ActivationSpec
from undominated.profiles import gen_cyclic, gen_impartial_culture, gen_minimal_dim3
from undominated.search import (STRATEGIES, Certificate, RecursiveParams, brute_force_search,
                                greedy_halving, lottery_search, recursive_search, run_strategy)

HALF = Fraction(1, 2)


def _sound(e, res, alpha):
    if res.found:
        rows = [list(r) for r in e.rankings]
        assert oracles.undominated(rows, res.committee.members, alpha)
        assert res.certificate == Certificate.of(e, res.committee)
        assert res.certificate.fraction < alpha


class TestBrute:
    def test_cyclic_pairs(self):
        res = brute_force_search(gen_cyclic(6), 2, HALF)
        assert res.committee == Committee([1, 4])
        assert res.certificate.count == 2

    def test_absent_reports_best(self):
        res = brute_force_search(gen_minimal_dim3(), 2, HALF)
        assert not res.found
        assert res.stats["nodes"] == 15
        best = res.stats["best"]
        assert res.stats["best_certificate"].count == max_domination(gen_minimal_dim3(), best)[1]

    def test_full_set(self):
        res = brute_force_search(gen_cyclic(4), 4, Fraction(1, 100))
        assert res.committee == Committee([1, 2, 3, 4]) and res.certificate.count == 0

    def test_budget(self):
        with pytest.raises(BudgetExceeded):
            brute_force_search(gen_impartial_culture(5, 12, 0), 6, HALF, budget=100)

    @settings(max_examples=80, deadline=None)
    @given(elections(max_candidates=6, max_voters=7), st.integers(1, 3),
           st.sampled_from([Fraction(1, 3), HALF, Fraction(2, 3)]))
    def test_matches_oracle(self, e, k, alpha):
        res = brute_force_search(e, k, alpha)
        assert res.found == oracles.exists_undominated([list(r) for r in e.rankings], k, alpha)
        _sound(e, res, alpha)


class TestGreedy:
    def test_condorcet_winner(self):
        e = Election([(2, 1, 3), (2, 3, 1), (1, 2, 3)])
        assert greedy_halving(e).committee == Committee([2])

    @settings(max_examples=80, deadline=None)
    @given(elections(max_candidates=7, max_voters=7))
    def test_odd_voters_half_undominated_and_small(self, e):
        assume(e.num_voters % 2 == 1)
        res = greedy_halving(e)
        S = res.committee
        assert is_alpha_undominated(e, S, HALF)
        assert len(S) <= e.num_candidates.bit_length()

    @settings(max_examples=80, deadline=None)
    @given(elections(max_candidates=8, max_voters=8))
    def test_even_voters_relaxed_size(self, e):
        assume(e.num_voters % 2 == 0)
        S = greedy_halving(e).committee
        assert len(S) <= (e.num_candidates - 1).bit_length() + 1
        # Every dropped candidate is beaten or tied by a chosen one: at most half prefer it.
        assert 2 * max_domination(e, S)[1] <= e.num_voters

    @settings(max_examples=60, deadline=None)
    @given(elections(max_candidates=6, max_voters=8), st.integers(1, 4))
    def test_sound_with_limits(self, e, k):
        res = greedy_halving(e, k, HALF)
        _sound(e, res, HALF)
        if res.found:
            assert len(res.committee) <= k


class TestLotterySearch:
    def test_cyclic(self):
        res = lottery_search(gen_cyclic(6), 2, HALF, seed=3)
        _sound(gen_cyclic(6), res, HALF)
        assert res.found and len(res.committee) == 2

    def test_seed_determinism(self):
        e = gen_impartial_culture(20, 9, 4)
        a = lottery_search(e, 3, HALF, seed=9)
        b = lottery_search(e, 3, HALF, seed=9)
        assert a.committee == b.committee and a.stats == b.stats

    def test_custom_activation(self):
        e = gen_impartial_culture(15, 7, 2)
        res = lottery_search(e, 2, Fraction(3, 4), g=ActivationSpec("identity", 2))
        _sound(e, res, Fraction(3, 4))


class TestRecursive:
    def test_params(self):
        assert RecursiveParams().beta == pytest.approx(0.28467 ** 2)
        with pytest.raises(InputError):
            RecursiveParams(gamma=0.3, beta=0.4)
        with pytest.raises(InputError):
            RecursiveParams(gamma=1.2)

    def test_k_one_delegates(self):
        res = recursive_search(gen_cyclic(5), 1, alpha=Fraction(4, 5))
        assert res.stats["delegated"] == "brute"
        with pytest.raises(InputError):
            recursive_search(gen_cyclic(5), 1)

    @pytest.mark.parametrize("seed", range(5))
    def test_sound_on_impartial(self, seed):
        e = gen_impartial_culture(40, 14, seed)
        alpha = Fraction(7, 10)
        res = recursive_search(e, 5, seed=seed, alpha=alpha)
        _sound(e, res, alpha)
        if res.found:
            assert len(res.committee) <= 5

    def test_no_alpha_reports_committee(self):
        e = gen_impartial_culture(30, 10, 1)
        res = recursive_search(e, 4, seed=0)
        assert res.found and len(res.committee) <= 4


@pytest.mark.parametrize("strategy", STRATEGIES)
def test_run_strategy_dispatch(strategy):
    e = gen_impartial_culture(9, 6, 5)
    res = run_strategy(e, strategy, 3, HALF)
    assert res.strategy == strategy
    _sound(e, res, HALF)


def test_run_strategy_unknown():
    with pytest.raises(InputError):
        run_strategy(gen_cyclic(3), "annealing", 1, HALF)
