from fractions import Fraction
from itertools import combinations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rbl.cliques import (Book, NoBookError, best_blue_book, exists_good_colouring,
                         has_mono_clique, max_clique)
from rbl.colouring import Colouring, VertexSet, paley_colouring, random_colouring

from conftest import complete_colouring


def brute_max_clique_size(c, colour, within):
    """Oracle: largest clique by direct subset enumeration (n <= ~14)."""
    rows = c.red if colour == "red" else [c.blue(u) for u in range(c.n)]
    members = list(within)
    best = 0
    for size in range(len(members), 0, -1):
        if size <= best:
            break
        for combo in combinations(members, size):
            if all((rows[u] >> v) & 1 for u, v in combinations(combo, 2)):
                best = size
                break
    return best


class TestMaxClique:
    def test_all_red(self):
        c = complete_colouring(6, "red")
        assert len(max_clique(c, "red", VertexSet.full(6), 6)) == 6
        assert len(max_clique(c, "blue", VertexSet.full(6), 6)) == 1

    def test_paley17(self):
        c = paley_colouring(17)
        assert len(max_clique(c, "red", VertexSet.full(17), 17)) == 3
        assert len(max_clique(c, "blue", VertexSet.full(17), 17)) == 3

    def test_size_cap_truncates(self):
        c = complete_colouring(12, "red")
        got = max_clique(c, "red", VertexSet.full(12), size_cap=4)
        assert len(got) == 4

    @given(st.integers(2, 12), st.integers(0, 10**5))
    @settings(max_examples=100, deadline=None)
    def test_matches_bruteforce(self, n, seed):
        c = random_colouring(n, Fraction(1, 2), seed)
        within = VertexSet.full(n)
        for colour in ("red", "blue"):
            got = max_clique(c, colour, within, n)
            assert len(got) == brute_max_clique_size(c, colour, within)

    def test_deterministic_lowest_index(self):
        c = random_colouring(30, Fraction(1, 2), 3)
        a = max_clique(c, "red", VertexSet.full(30), 30)
        b = max_clique(c, "red", VertexSet.full(30), 30)
        assert a == b


class TestHasMonoClique:
    def test_k6_triangle_always(self):
        # oracle cross-check on a sample of K_6 colourings; the exhaustive
        # sweep over all 2^15 lives in the acceptance suite
        from rbl.tables import mono_triangle_census

        total, free = mono_triangle_census(6)
        assert (total, free) == (32768, 0)
        for seed in range(200):
            c = random_colouring(6, Fraction(1, 2), seed)
            kind, witness = has_mono_clique(c, 3, 3)
            assert kind in ("red", "blue")
            assert len(witness) == 3

    def test_paley17_no_k4(self):
        kind, _ = has_mono_clique(paley_colouring(17), 4, 4)
        assert kind == "neither"

    def test_all_blue_k5(self):
        c = complete_colouring(5, "blue")
        kind, _ = has_mono_clique(c, 2, 6)
        assert kind == "neither"


class TestBestBlueBook:
    def u_w_colouring(self):
        # u1..u5 = 0..4, w1..w5 = 5..9; u-u and u-w blue, w-w red
        rows = [0] * 10
        for u in range(5, 10):
            for v in range(5, 10):
                if u != v:
                    rows[u] |= 1 << v
        return Colouring(10, rows)

    def test_u_w_example(self):
        c = self.u_w_colouring()
        book = best_blue_book(c, VertexSet.full(10), Fraction(2, 5), 12)
        assert sorted(book.spine) == [0, 1, 2, 3, 4]
        assert sorted(book.pages) == [5, 6, 7, 8, 9]

    def test_u_w_against_exhaustive_oracle(self):
        c = self.u_w_colouring()
        mu = Fraction(2, 5)
        best = 0
        for mask in range(1, 1 << 10):
            spine = [v for v in range(10) if (mask >> v) & 1]
            if not all((c.blue(u) >> v) & 1 for u, v in combinations(spine, 2)):
                continue
            pages = (1 << 10) - 1 & ~mask
            for u in spine:
                pages &= c.blue(u)
            if 2 * pages.bit_count() * mu.denominator ** len(spine) \
                    >= mu.numerator ** len(spine) * 10:
                best = max(best, len(spine))
        got = best_blue_book(c, VertexSet.full(10), mu, 12)
        assert len(got.spine) == best == 5

    def test_all_blue_k8(self):
        c = complete_colouring(8, "blue")
        book = best_blue_book(c, VertexSet.full(8), Fraction(1, 2), 12)
        assert len(book.spine) == 7 and len(book.pages) == 1
        assert sorted(book.spine) == [0, 1, 2, 3, 4, 5, 6]

    def test_all_red_raises(self):
        c = complete_colouring(8, "red")
        with pytest.raises(NoBookError):
            best_blue_book(c, VertexSet.full(8), Fraction(1, 2), 12)

    def test_contract_always_satisfied(self):
        mu = Fraction(2, 5)
        for seed in range(30):
            c = random_colouring(26, Fraction(1, 2), seed)
            book = best_blue_book(c, VertexSet.full(26), mu, 12)
            s, t = len(book.spine), len(book.pages)
            assert 2 * t * mu.denominator ** s >= mu.numerator ** s * 26
            book.verify(c)

    def test_greedy_extend_when_over_budget(self):
        c = complete_colouring(20, "blue")
        book = best_blue_book(c, VertexSet.full(20), Fraction(1, 2), spine_budget=5)
        book.verify(c)
        assert len(book.pages) >= 1


class TestBookVerify:
    def test_verify_rejects_bad_book(self):
        c = complete_colouring(6, "red")
        book = Book(VertexSet.from_indices([0, 1], 6),
                    VertexSet.from_indices([2], 6), "blue")
        with pytest.raises(Exception):
            book.verify(c)


class TestGoodColouringSearch:
    def test_33(self):
        assert exists_good_colouring(5, 3, 3) is not None
        assert exists_good_colouring(6, 3, 3) is None

    def test_34_witness_is_good(self):
        witness = exists_good_colouring(8, 3, 4)
        assert witness is not None
        kind, _ = has_mono_clique(witness, 3, 4)
        assert kind == "neither"

    def test_degenerate_targets(self):
        assert exists_good_colouring(3, 1, 5) is None
        assert exists_good_colouring(1, 2, 2) is not None
        assert exists_good_colouring(2, 2, 2) is None
