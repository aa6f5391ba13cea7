import itertools

import pytest
from hypothesis import given

from conftest import elections
from undominated.core import dominator_count
from undominated.errors import BudgetExceeded, InputError, ProfileError
from undominated.profiles import (gen_cycle_product, gen_cyclic, gen_full_factorial,
                                  gen_impartial_culture, gen_minimal_dim3, parse_election,
                                  read_election, serialize_election, write_election)


class TestParse:
    def test_comments_blank_and_replication(self):
        text = "# demo\n3 4\n\n1 2 3\r\nw 2 3 1 2\n# tail\n2 3 1\n"
        e = parse_election(text)
        assert e.rankings == ((1, 2, 3), (3, 1, 2), (3, 1, 2), (2, 3, 1))

    @pytest.mark.parametrize("text, needle, line", [
        ("3 2\n1 2 3\n1 2 2\n", "malformed ranking", 3),
        ("3 1\n1 2 x\n", "malformed ranking", 2),
        ("3 1\n1 2\n", "malformed ranking", 2),
        ("3\n1 2 3\n", "header", 1),
        ("2 1\nw 0 1 2\n", "replication", 2),
    ])
    def test_line_errors(self, text, needle, line):
        with pytest.raises(ProfileError) as info:
            parse_election(text)
        assert needle in str(info.value)
        assert str(info.value).startswith(f"line {line}:")

    def test_count_mismatch(self):
        with pytest.raises(ProfileError, match="count mismatch"):
            parse_election("2 3\n1 2\n2 1\n")

    def test_empty(self):
        with pytest.raises(ProfileError, match="empty"):
            parse_election("# nothing\n\n")

    def test_profile_error_is_input_error(self):
        assert issubclass(ProfileError, InputError)


@given(elections(max_candidates=6, max_voters=9))
def test_round_trip(e):
    assert parse_election(serialize_election(e)) == e


def test_file_round_trip(tmp_path):
    e = gen_impartial_culture(7, 5, 3)
    path = tmp_path / "p.txt"
    write_election(e, path)
    assert b"\r\n" not in path.read_bytes()
    assert read_election(path) == e


class TestGenerators:
    @pytest.mark.parametrize("m", [1, 2, 5, 6, 9])
    def test_cyclic_shape(self, m):
        e = gen_cyclic(m)
        assert e.rankings[0] == tuple(range(1, m + 1))
        assert all(r[0] == v for v, r in enumerate(e.rankings, start=1))

    @pytest.mark.parametrize("m", [3, 6, 8])
    def test_cyclic_domination_counts(self, m):
        # Against {1}, candidate a is preferred by voters 2..a.
        e = gen_cyclic(m)
        for a in range(2, m + 1):
            assert dominator_count(e, a, [1]) == a - 1

    def test_cycle_product_voter_one(self):
        e = gen_cycle_product(3, 2)
        assert e.rankings[0] == (1, 2, 3, 4, 5, 6)
        assert e.rankings[1] == (2, 1, 4, 3, 6, 5)
        assert e.num_voters == e.num_candidates == 6

    def test_cycle_product_symmetry(self):
        # Each voter tops their own candidate; the column of first places is a permutation.
        e = gen_cycle_product(4, 3)
        assert [r[0] for r in e.rankings] == list(range(1, 13))
        for place in range(12):
            assert sorted(r[place] for r in e.rankings) == list(range(1, 13))

    def test_cycle_product_rejects_short(self):
        with pytest.raises(InputError):
            gen_cycle_product(1, 4)

    def test_minimal_dim3_first_voter(self):
        assert gen_minimal_dim3().rankings[0] == (1, 4, 2, 3, 6, 5)

    def test_impartial_deterministic(self):
        assert gen_impartial_culture(20, 7, 11) == gen_impartial_culture(20, 7, 11)
        assert gen_impartial_culture(20, 7, 11) != gen_impartial_culture(20, 7, 12)

    def test_impartial_roughly_uniform(self):
        e = gen_impartial_culture(3000, 4, 0)
        tops = [sum(r[0] == c for r in e.rankings) for c in range(1, 5)]
        assert all(abs(t - 750) < 100 for t in tops)

    def test_factorial(self):
        e = gen_full_factorial(4)
        assert e.num_voters == 24
        assert e.rankings == tuple(itertools.permutations(range(1, 5)))

    def test_factorial_budget(self):
        with pytest.raises(BudgetExceeded):
            gen_full_factorial(8)
