from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rbl.colouring import (Colouring, ContractViolation, ParseError,
                           UndefinedDensityError, VertexSet, blue_density,
                           load, paley_colouring, random_colouring,
                           red_density, save)


def brute_red_count(c, xs, ys):
    return sum(1 for u in xs for v in ys if (c.red[u] >> v) & 1)


class TestVertexSet:
    def test_basicops(self):
        s = VertexSet.from_indices([0, 3, 5], 8)
        t = VertexSet.from_indices([3, 4], 8)
        assert len(s) == 3 and list(s) == [0, 3, 5]
        assert 3 in s and 4 not in s
        assert list(s & t) == [3]
        assert list(s | t) == [0, 3, 4, 5]
        assert list(s - t) == [0, 5]
        assert t.issubset(s | t)
        assert s.rank(5) == 2 and s.rank(0) == 0

    def test_out_of_range_rejected(self):
        with pytest.raises(ContractViolation):
            VertexSet.from_indices([8], 8)

    @given(st.sets(st.integers(0, 30)), st.sets(st.integers(0, 30)))
    def test_ops_match_set_semantics(self, a, b):
        sa, sb = VertexSet.from_indices(a, 31), VertexSet.from_indices(b, 31)
        assert set(sa & sb) == a & b
        assert set(sa | sb) == a | b
        assert set(sa - sb) == a - b
        assert sa.isdisjoint(sb) == a.isdisjoint(b)
        assert len(sa) == len(a)


class TestRandomColouring:
    def test_all_red_all_blue(self):
        c1 = random_colouring(5, 1, seed=3)
        assert all(c1.red[u].bit_count() == 4 for u in range(5))
        c0 = random_colouring(5, 0, seed=3)
        assert all(r == 0 for r in c0.red)

    def test_density_near_half(self):
        c = random_colouring(1000, Fraction(1, 2), seed=42)
        density = c.red_edge_count() / (1000 * 999 / 2)
        assert abs(density - 0.5) < 0.02

    def test_deterministic(self):
        assert random_colouring(60, Fraction(1, 3), 9) == random_colouring(60, Fraction(1, 3), 9)
        assert random_colouring(60, Fraction(1, 3), 9) != random_colouring(60, Fraction(1, 3), 10)

    @given(st.integers(2, 24), st.integers(0, 2**64 - 1))
    @settings(max_examples=40)
    def test_symmetric_no_loops(self, n, seed):
        c = random_colouring(n, Fraction(2, 5), seed)
        for u in range(n):
            assert not (c.red[u] >> u) & 1
            for v in range(u):
                assert ((c.red[u] >> v) & 1) == ((c.red[v] >> u) & 1)

    def test_matches_documented_stream_predicate(self):
        # portability contract: edge {u, v}, u > v, taken in lower-triangle
        # row order, is red iff draw * den < num * 2^64 with draw the
        # splitmix64 value at the 1-based edge index
        from rbl._util import splitmix64

        p = Fraction(3, 7)
        for seed in (0, 1, 2**63, 2**64 - 1):
            c = random_colouring(30, p, seed)
            idx = 0
            for u in range(1, 30):
                for v in range(u):
                    idx += 1
                    want = splitmix64(seed, idx - 1) * p.denominator < p.numerator * (1 << 64)
                    assert ((c.red[u] >> v) & 1) == want, (u, v, seed)


class TestPaley:
    def test_q5_is_pentagon(self):
        c = paley_colouring(5)
        # quadratic residues mod 5 are {1, 4}: each vertex joins v +- 1
        for u in range(5):
            assert sorted(VertexSet(c.red[u], 5)) == sorted({(u + 1) % 5, (u - 1) % 5})

    def test_q13_degrees(self):
        c = paley_colouring(13)
        assert all(r.bit_count() == 6 for r in c.red)

    def test_bad_modulus_rejected(self):
        for q in (6, 7, 9, 11):  # composite or 3 mod 4
            with pytest.raises(ContractViolation):
                paley_colouring(q)

    def test_self_complementary_clique_numbers(self):
        from rbl.cliques import max_clique

        for q in (5, 13, 17, 29, 37):
            c = paley_colouring(q)
            everything = VertexSet.full(q)
            red = len(max_clique(c, "red", everything, q))
            blue = len(max_clique(c, "blue", everything, q))
            assert red == blue


class TestDensity:
    def test_all_red_is_one(self):
        full = (1 << 6) - 1
        c = Colouring(6, [full & ~(1 << u) for u in range(6)])
        x = VertexSet.from_indices([0, 1], 6)
        y = VertexSet.from_indices([3, 4, 5], 6)
        assert red_density(c, x, y) == 1
        assert blue_density(c, x, y) == 0

    def test_tiny_hand_case(self):
        # a=0, c=2, d=3; red edge a-c only
        rows = [0b0100, 0, 0b0001, 0]
        c = Colouring(4, rows)
        x = VertexSet.from_indices([0], 4)
        y = VertexSet.from_indices([2, 3], 4)
        assert red_density(c, x, y) == Fraction(1, 2)

    def test_matches_bruteforce(self):
        c = random_colouring(200, Fraction(1, 2), seed=7)
        x = VertexSet.interval(0, 100, 200)
        y = VertexSet.interval(100, 200, 200)
        expected = Fraction(brute_red_count(c, range(100), range(100, 200)), 100 * 100)
        assert red_density(c, x, y) == expected

    def test_density_errors(self):
        c = random_colouring(10, Fraction(1, 2), seed=1)
        with pytest.raises(UndefinedDensityError):
            red_density(c, VertexSet(0, 10), VertexSet.full(10))
        with pytest.raises(ContractViolation):
            red_density(c, VertexSet.from_indices([1, 2], 10),
                        VertexSet.from_indices([2, 3], 10))

    @given(st.integers(2, 16), st.integers(0, 1000))
    @settings(max_examples=30)
    def test_red_plus_blue_is_one(self, n, seed):
        c = random_colouring(n, Fraction(1, 3), seed)
        x = VertexSet.interval(0, n // 2, n)
        y = VertexSet.interval(n // 2, n, n)
        assert red_density(c, x, y) + blue_density(c, x, y) == 1


class TestRBC1:
    def test_roundtrip(self, tmp_path):
        c = random_colouring(50, Fraction(1, 2), 1)
        path = tmp_path / "c.rbc"
        save(c, path)
        assert load(path) == c

    def test_documented_example(self, tmp_path):
        path = tmp_path / "t.rbc"
        path.write_text("RBC1 3\n1\n01\n")
        c = load(path)
        assert (c.red[1] >> 0) & 1 and (c.red[2] >> 1) & 1
        assert not (c.red[2] >> 0) & 1
        assert c.red_edge_count() == 2

    def test_truncated_file(self, tmp_path):
        path = tmp_path / "t.rbc"
        path.write_text("RBC1 4\n1\n01\n")  # missing row for vertex 3
        with pytest.raises(ParseError) as err:
            load(path)
        assert "row" in str(err.value)

    def test_bad_characters_and_lengths(self, tmp_path):
        path = tmp_path / "t.rbc"
        path.write_text("RBC1 3\n1\n0x\n")
        with pytest.raises(ParseError) as err:
            load(path)
        assert "line 3" in str(err.value)
        path.write_text("RBC1 3\n1\n011\n")
        with pytest.raises(ParseError) as err:
            load(path)
        assert "line 3" in str(err.value)
        path.write_text("RBCX 3\n1\n01\n")
        with pytest.raises(ParseError) as err:
            load(path)
        assert "line 1" in str(err.value)

    @given(st.integers(1, 20), st.integers(0, 500))
    @settings(max_examples=25)
    def test_roundtrip_property(self, tmp_path_factory, n, seed):
        c = random_colouring(n, Fraction(3, 7), seed)
        path = tmp_path_factory.mktemp("rbc") / "c.rbc"
        save(c, path)
        assert load(path) == c
