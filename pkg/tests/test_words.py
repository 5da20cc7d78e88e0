import itertools

import pytest

from sweepwords.errors import InvalidInput, InvalidWord, TooLarge
from sweepwords.words import (
    CommMonomial,
    Word,
    WordGrid,
    all_words,
    build_word_grid,
    certificate_monomial,
    degree_exponent,
    entry_variable_chain,
    monomial_coefficient_bruteforce,
)


def strings(ws):
    return [w.to_string() for w in ws]


class TestWord:
    def test_letter_range_validation(self):
        with pytest.raises(InvalidWord):
            Word((1, 3), 2)
        with pytest.raises(InvalidWord):
            Word((0,), 2)

    def test_empty_word_is_allowed(self):
        assert Word((), 2).degree == 0

    def test_concat_and_reverse(self):
        w = Word((1, 2), 2).concat(Word((2,), 2))
        assert w.letters == (1, 2, 2)
        assert w.reverse().letters == (2, 2, 1)

    def test_string_round_trip(self):
        w = Word((1, 2, 1, 3), 3)
        assert w.to_string() == "abac"
        assert Word.from_string("abac", 3) == w
        assert Word.from_string("", 2) == Word((), 2)

    def test_from_string_rejects_garbage(self):
        with pytest.raises(InvalidWord):
            Word.from_string("a!b", 2)


class TestAllWords:
    def test_degree_zero_is_identity_singleton(self):
        assert all_words(2, 0) == [Word((), 2)]

    def test_degree_one(self):
        assert strings(all_words(2, 1)) == ["a", "b"]

    def test_degree_two(self):
        assert strings(all_words(2, 2)) == ["aa", "ab", "ba", "bb"]

    @pytest.mark.parametrize("g,s", [(2, 3), (2, 5), (3, 3), (4, 2)])
    def test_count_distinct_strictly_decreasing(self, g, s):
        ws = all_words(g, s)
        assert len(ws) == g**s
        assert len(set(ws)) == g**s
        # letter 1 is the largest, so decreasing word order is ascending
        # natural order on the letter tuples
        tuples = [w.letters for w in ws]
        assert tuples == sorted(tuples)


class TestWordGrid:
    def test_n2_grid(self):
        grid = build_word_grid(2, 2)
        assert [strings(row) for row in grid.grid] == [["aa", "ab"], ["ba", "bb"]]
        assert grid.d == 1

    def test_n4_entries(self):
        grid = build_word_grid(4, 2)
        assert grid.entry(1, 1).to_string() == "aaaa"
        # outer(1) * v1[i_2] * v1[j_2] * outer(3) with i_2 = j_2 = 1
        assert grid.entry(1, 3).to_string() == "aaab"
        assert grid.entry(4, 4).to_string() == "bbbb"

    def test_n3_is_leading_subgrid_of_n4(self):
        g3 = build_word_grid(3, 2)
        g4 = build_word_grid(4, 2)
        for i in range(1, 4):
            for j in range(1, 4):
                assert g3.entry(i, j) == g4.entry(i, j)

    def test_matches_prefix_times_reversed_suffix(self):
        # independent recomputation of every entry from the enumeration
        for n, g in [(4, 2), (8, 2), (9, 3), (5, 2)]:
            grid = build_word_grid(n, g)
            v = all_words(g, grid.d)
            for i in range(1, n + 1):
                for j in range(1, n + 1):
                    expected = v[i - 1].letters + v[j - 1].letters[::-1]
                    assert grid.entry(i, j).letters == expected

    @pytest.mark.parametrize("n,g", [(2, 2), (3, 2), (7, 2), (16, 2), (3, 3), (10, 3)])
    def test_uniform_degree(self, n, g):
        grid = build_word_grid(n, g)
        d = degree_exponent(n, g)
        assert grid.d == d
        assert all(w.degree == 2 * d for w in grid.flatten())

    @pytest.mark.parametrize("g,d", [(2, 1), (2, 2), (2, 3), (3, 1), (3, 2)])
    def test_full_grid_enumerates_all_words_once(self, g, d):
        grid = build_word_grid(g**d, g)
        seen = set(grid.flatten())
        assert len(seen) == g ** (2 * d)
        assert seen == set(all_words(g, 2 * d))

    @pytest.mark.parametrize("n,g", [(4, 2), (5, 2), (9, 3)])
    def test_reversal_symmetry(self, n, g):
        grid = build_word_grid(n, g)
        for i in range(1, n + 1):
            for j in range(1, n + 1):
                assert grid.entry(i, j).reverse() == grid.entry(j, i)

    def test_flatten_is_row_major(self):
        grid = build_word_grid(3, 2)
        flat = grid.flatten()
        for i in range(1, 4):
            for j in range(1, 4):
                assert flat[(i - 1) * 3 + (j - 1)] == grid.entry(i, j)

    def test_degree_override(self):
        grid = build_word_grid(2, 2, d=2)
        assert grid.d == 2
        assert all(w.degree == 4 for w in grid.flatten())
        big = build_word_grid(4, 2)
        assert grid.entry(2, 1) == big.entry(2, 1)
        with pytest.raises(InvalidInput):
            build_word_grid(4, 2, d=1)

    def test_rejects_bad_sizes(self):
        with pytest.raises(InvalidInput):
            build_word_grid(1, 2)
        with pytest.raises(InvalidInput):
            build_word_grid(4, 1)

    def test_json_round_trip(self):
        grid = build_word_grid(3, 2)
        assert WordGrid.from_json(grid.to_json()) == grid


class TestCertificateMonomial:
    def test_n2_exact(self):
        mono = certificate_monomial(2, 2)
        assert mono.exponents == {(1, 1, 1): 4, (2, 1, 2): 2, (2, 2, 1): 2}
        assert mono.total_degree() == 8

    @pytest.mark.parametrize("n,g", [(2, 2), (3, 2), (4, 2), (8, 2), (3, 3), (9, 3)])
    def test_total_degree(self, n, g):
        mono = certificate_monomial(n, g)
        assert mono.total_degree() == 2 * degree_exponent(n, g) * n * n

    @pytest.mark.parametrize("n,g", [(4, 2), (8, 2), (9, 3)])
    def test_letter_one_variables_are_diagonal(self, n, g):
        mono = certificate_monomial(n, g)
        for (k, i, j) in mono.exponents:
            if k == 1:
                assert i == j

    def test_n4_loop_degrees_match_level_two_graph(self):
        # degrees of the diagonal variables equal the loop multiplicities
        # of the level-2 graph: 24 on vertex 1 and 8 on vertex 2
        mono = certificate_monomial(4, 2)
        assert mono.exponents[(1, 1, 1)] == 24
        assert mono.exponents[(1, 2, 2)] == 8
        assert mono.exponents[(2, 1, 2)] == 8
        assert mono.exponents[(2, 3, 1)] == 4

    def test_entry_chain_has_one_pair_per_level(self):
        for n, g in [(4, 2), (9, 3)]:
            d = degree_exponent(n, g)
            for i, j in itertools.product(range(1, n + 1), repeat=2):
                assert len(entry_variable_chain(n, g, i, j)) == 2 * d


class TestBruteforce:
    def test_identity_isolation_at_n2(self):
        grid = build_word_grid(2, 2)
        mono = certificate_monomial(2, 2)
        assert monomial_coefficient_bruteforce(grid, mono) == (1, 0)

    def test_pure_diagonal_monomial_never_appears(self):
        grid = build_word_grid(2, 2)
        mono = CommMonomial({(1, 1, 1): 8})
        coeff, hits = monomial_coefficient_bruteforce(grid, mono)
        assert coeff == 0
        assert hits == 0

    def test_swapped_grid_moves_the_hit_off_identity(self):
        grid = build_word_grid(2, 2)
        rows = [list(row) for row in grid.grid]
        rows[0][1], rows[1][0] = rows[1][0], rows[0][1]
        swapped = WordGrid(2, 2, 1, tuple(tuple(r) for r in rows))
        coeff, hits = monomial_coefficient_bruteforce(
            swapped, certificate_monomial(2, 2)
        )
        assert coeff == 0
        assert hits >= 1

    def test_hard_cap(self):
        with pytest.raises(TooLarge):
            monomial_coefficient_bruteforce(
                build_word_grid(3, 2), certificate_monomial(3, 2)
            )
