from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rbl.book import (BookParams, BookState, Trace, alpha, default_epsilon,
                      degree_regularise, find_big_blue_candidates, height,
                      pair_weight, run, step, vertex_weight)
from rbl.colouring import Colouring, ContractViolation, VertexSet, random_colouring

from conftest import complete_colouring


def ladder(p0, eps, k, h):
    """Independent oracle: q_h evaluated straight from its recurrence."""
    q = Fraction(p0)
    step_val = Fraction(eps) / k
    for _ in range(h):
        q += step_val
        step_val *= 1 + Fraction(eps)
    return q


class TestHeightAlpha:
    def test_height_examples(self):
        p0, eps, k = Fraction(1, 2), Fraction(1, 10), 100
        # oracle values straight from the recurrence
        assert ladder(p0, eps, k, 1) == Fraction("0.501")
        assert ladder(p0, eps, k, 2) == Fraction("0.5021")
        assert height(Fraction("0.503"), p0, eps, k) == 3
        assert height(Fraction("0.5015"), p0, eps, k) == 2
        assert height(p0, p0, eps, k) == 1

    def test_alpha_examples(self):
        eps, k = Fraction(1, 10), 100
        assert alpha(1, eps, k) == Fraction("0.001")
        assert alpha(3, eps, k) == Fraction("0.00121")
        for h in range(1, 11):
            assert ladder(0, eps, k, h) - ladder(0, eps, k, h - 1) == alpha(h, eps, k)

    def test_height_cap_for_unit_interval(self):
        import math

        for k in (4, 30, 144):
            eps = default_epsilon(k)
            h = height(Fraction(1), Fraction(1, 2), eps, k)
            assert 1 <= h <= math.ceil(2 / float(eps) * math.log(k))

    @given(st.fractions(min_value=Fraction(1, 100), max_value=1),
           st.fractions(min_value=Fraction(1, 20), max_value=Fraction(9, 10)))
    @settings(max_examples=60)
    def test_height_is_minimal(self, p, eps):
        p0, k = Fraction(2, 5), 50
        h = height(p, p0, eps, k)
        assert p <= ladder(p0, eps, k, h)
        if h > 1:
            assert p > ladder(p0, eps, k, h - 1)


def tiny_state():
    # X = {a=0, b=1}, Y = {c=2, d=3}, red edges a-c, a-d, b-c; p = 3/4
    rows = [0b1100, 0b0100, 0b0011, 0b0001]
    c = Colouring(4, rows)
    params = BookParams(k=100, ell=100, mu=Fraction(2, 5), epsilon=Fraction(1, 10),
                        x_min=1, w_min=1000)
    return BookState(c, VertexSet.from_indices([0, 1], 4),
                     VertexSet.from_indices([2, 3], 4), params), params


class TestWeights:
    def test_pair_weight_hand_example(self):
        state, _ = tiny_state()
        assert state.p == Fraction(3, 4)
        assert pair_weight(state, 0, 1) == Fraction(-1, 4)
        assert pair_weight(state, 1, 0) == Fraction(1, 8)

    def test_total_weight_including_diagonal(self):
        state, _ = tiny_state()
        total = sum(pair_weight(state, x, y) for x in (0, 1) for y in (0, 1))
        assert total == Fraction(1, 4)
        assert total >= 0

    def test_vertex_weight(self):
        state, _ = tiny_state()
        assert vertex_weight(state, 0) == Fraction(-1, 4)
        assert vertex_weight(state, 1) == Fraction(1, 8)

    def test_all_red_weights_vanish(self):
        c = complete_colouring(8, "red")
        params = BookParams(k=10, ell=10, mu=Fraction(2, 5), epsilon=Fraction(1, 2))
        state = BookState(c, VertexSet.interval(0, 4, 8), VertexSet.interval(4, 8, 8), params)
        for x in range(4):
            assert vertex_weight(state, x) == 0

    def test_singleton_x(self):
        c = complete_colouring(4, "red")
        params = BookParams(k=10, ell=10, mu=Fraction(2, 5), epsilon=Fraction(1, 2))
        state = BookState(c, VertexSet.from_indices([0], 4),
                          VertexSet.from_indices([1, 2], 4), params)
        assert vertex_weight(state, 0) == 0

    def test_outside_x_rejected(self):
        state, _ = tiny_state()
        with pytest.raises(ContractViolation):
            pair_weight(state, 0, 2)
        with pytest.raises(ContractViolation):
            vertex_weight(state, 3)

    def test_vertex_weight_matches_pair_sum(self):
        # vertex_weight uses the walk-count identity; the double loop over
        # ordered pairs is the independent oracle
        c = random_colouring(36, Fraction(1, 2), 13)
        params = BookParams(k=8, ell=8, mu=Fraction(3, 5), epsilon=Fraction(1, 4))
        state = BookState(c, VertexSet.interval(0, 18, 36),
                          VertexSet.interval(18, 36, 36), params)
        for x in range(18):
            direct = sum(pair_weight(state, x, y) for y in range(18) if y != x)
            assert vertex_weight(state, x) == direct

    def test_central_vertex_is_bruteforce_argmax(self):
        c = random_colouring(40, Fraction(1, 2), 21)
        params = BookParams(k=8, ell=8, mu=Fraction(3, 5), epsilon=Fraction(1, 4),
                            x_min=2, w_min=10**9)
        state = BookState(c, VertexSet.interval(0, 20, 40),
                          VertexSet.interval(20, 40, 40), params)
        degree_regularise(state, params)
        eligible = [x for x in VertexSet(state.X, 40)
                    if (c.blue(x) & state.X).bit_count() * params.mu.denominator
                    <= params.mu.numerator * state.x_size()]
        assert eligible
        best = max(eligible, key=lambda x: (vertex_weight(state, x), -x))
        rec = step(state, params)
        assert rec.kind in ("Red", "DensityBoost")
        assert rec.central_vertex == best


class TestDegreeRegularise:
    def test_all_red_removes_nothing(self):
        c = complete_colouring(10, "red")
        params = BookParams(k=10, ell=10, mu=Fraction(2, 5), epsilon=Fraction(1, 2))
        state = BookState(c, VertexSet.interval(0, 5, 10), VertexSet.interval(5, 10, 10), params)
        rec = degree_regularise(state, params)
        assert rec.removed == ()
        assert rec.p == 1

    def test_hand_example(self):
        # threshold (3/4 - sqrt(10) / 1000) * 2 ~ 1.4937: degree-1 vertex b leaves
        state, params = tiny_state()
        rec = degree_regularise(state, params)
        assert rec.removed == (1,)
        assert state.X == 0b0001
        assert rec.p == 1

    def test_survivors_satisfy_threshold(self):
        c = random_colouring(120, Fraction(1, 2), 3)
        params = BookParams(k=12, ell=12, mu=Fraction(2, 5), epsilon=Fraction(3, 10),
                            x_min=5, w_min=10)
        state = BookState(c, VertexSet.interval(0, 60, 120),
                          VertexSet.interval(60, 120, 120), params)
        p_before = state.p
        h = state.current_height()
        a = alpha(h, params.epsilon, params.k)
        rec = degree_regularise(state, params)
        ysize = state.y_size()
        for x in VertexSet(state.X, 120):
            deg = (c.red[x] & state.Y).bit_count()
            shortfall = p_before * ysize - deg
            # deg >= (p - eps^(-1/2) a) |Y|, squared to stay rational
            assert shortfall <= 0 or shortfall ** 2 * params.epsilon <= (a * ysize) ** 2
        for x in rec.removed:
            deg = (c.red[x] & state.Y).bit_count()
            shortfall = p_before * ysize - deg
            assert shortfall > 0 and shortfall ** 2 * params.epsilon > (a * ysize) ** 2


class TestBigBlueCandidates:
    def test_all_red_empty(self):
        c = complete_colouring(10, "red")
        params = BookParams(k=10, ell=10, mu=Fraction(2, 5), epsilon=Fraction(1, 2))
        state = BookState(c, VertexSet.interval(0, 5, 10), VertexSet.interval(5, 10, 10), params)
        assert len(find_big_blue_candidates(state, params)) == 0

    def test_all_blue_x(self):
        # X internally blue, X-Y red so the density is defined and positive
        rows = [0] * 20
        for u in range(10):
            for v in range(10, 20):
                rows[u] |= 1 << v
                rows[v] |= 1 << u
        c = Colouring(20, rows)
        params = BookParams(k=10, ell=10, mu=Fraction(2, 5), epsilon=Fraction(1, 2))
        state = BookState(c, VertexSet.interval(0, 10, 20), VertexSet.interval(10, 20, 20), params)
        w = find_big_blue_candidates(state, params)
        assert set(w) == set(range(10))  # blue degree 9 >= mu |X| = 4

    def test_u_w_construction(self):
        # u block 0-4, w block 5-9: u-u and u-w blue, w-w red inside X;
        # a separate all-red Y block keeps the densities defined
        n = 12
        rows = [0] * n
        for u in range(5, 10):
            for v in range(5, 10):
                if u != v:
                    rows[u] |= 1 << v
        for u in range(10):
            for v in (10, 11):
                rows[u] |= 1 << v
                rows[v] |= 1 << u
        rows[10] |= 1 << 11
        rows[11] |= 1 << 10
        c = Colouring(n, rows)
        params = BookParams(k=10, ell=10, mu=Fraction(2, 5), epsilon=Fraction(1, 2))
        state = BookState(c, VertexSet.interval(0, 10, n), VertexSet.interval(10, n, n), params)
        w = find_big_blue_candidates(state, params)
        assert set(range(5)) <= set(w)  # every u has blue degree 9 >= 4


class TestRun:
    def params(self, **kw):
        base = dict(k=10, ell=10, mu=Fraction(2, 5), epsilon=Fraction(1, 2),
                    x_min=5, w_min=10)
        base.update(kw)
        return BookParams(**base)

    def test_all_red_k200(self):
        c = complete_colouring(200, "red")
        tr = run(c, VertexSet.interval(0, 100, 200), VertexSet.interval(100, 200, 200),
                 self.params())
        assert tr.summary["t"] == 10
        assert tr.summary["s"] == 0
        assert tr.final_B == ()
        assert tr.halting_reason == "red_clique_complete"
        assert len(tr.final_A) == 10

    def test_all_blue_halts_immediately(self):
        c = complete_colouring(200, "blue")
        tr = run(c, VertexSet.interval(0, 100, 200), VertexSet.interval(100, 200, 200),
                 self.params())
        assert tr.steps == []
        assert tr.halting_reason == "p_small"

    def test_acceptance_params_shape(self):
        c = random_colouring(400, Fraction(1, 2), 11)
        params = BookParams(k=12, ell=12, mu=Fraction(2, 5), epsilon=Fraction(3, 10),
                            x_min=20, w_min=10)
        tr = run(c, VertexSet.interval(0, 200, 400), VertexSet.interval(200, 400, 400), params)
        kinds = [r.kind for r in tr.steps]
        assert kinds[::2] == ["DegreeRegularise"] * (len(kinds) // 2 + len(kinds) % 2)
        assert tr.halting_reason in ("x_small", "p_small", "exhausted",
                                     "red_clique_complete", "blue_clique_complete",
                                     "no_central_vertex")

    def test_boost_steps_occur_and_y_shrinks_only_on_rs(self, boosty_colouring):
        c = boosty_colouring
        params = BookParams(k=14, ell=14, mu=Fraction(4, 5), epsilon=Fraction(1, 20),
                            x_min=8, w_min=10**9, p_floor=Fraction(1, 50))
        tr = run(c, VertexSet.interval(0, 120, 240), VertexSet.interval(120, 240, 240), params)
        kinds = [r.kind for r in tr.steps]
        assert "DensityBoost" in kinds
        y_sizes = [len(tr.y0)] + [r.y_size for r in tr.steps]
        for i, rec in enumerate(tr.steps, start=1):
            if rec.kind in ("DegreeRegularise", "BigBlue"):
                assert y_sizes[i] == y_sizes[i - 1]

    def test_exhausted_run_records_null_density(self):
        # X = {0, 1}, Y = {2, 3}; only red edge 1-2; 0 has no red neighbour,
        # so the vacuous red-step test fires at 0 and empties both sides
        rows = [0, 0b0100, 0b0010, 0]
        c = Colouring(4, rows)
        params = BookParams(k=2, ell=2, mu=Fraction(9, 10), epsilon=Fraction(9, 10),
                            x_min=1, w_min=10, p_floor=0)
        tr = run(c, VertexSet.from_indices([0, 1], 4),
                 VertexSet.from_indices([2, 3], 4), params)
        assert tr.halting_reason == "exhausted"
        last = tr.steps[-1]
        assert last.kind == "Red" and last.p is None and last.h is None
        assert tr.summary["final_Y_size"] == 0 and tr.final_A == (0,)
        back = Trace.from_json(tr.to_json())
        assert back.steps[-1].p is None

        from rbl.checks import check_trace

        assert check_trace(c, back).ok()

    def test_trace_json_roundtrip(self):
        c = random_colouring(150, Fraction(1, 2), 4)
        params = BookParams(k=8, ell=8, mu=Fraction(2, 5), epsilon=Fraction(3, 10),
                            x_min=6, w_min=6)
        tr = run(c, VertexSet.interval(0, 75, 150), VertexSet.interval(75, 150, 150), params)
        text = tr.to_json()
        back = Trace.from_json(text)
        assert back.to_json() == text
        assert back.summary == tr.summary

    def test_deterministic(self):
        c = random_colouring(150, Fraction(1, 2), 4)
        params = self.params(k=8, ell=8)
        a = run(c, VertexSet.interval(0, 75, 150), VertexSet.interval(75, 150, 150), params)
        b = run(c, VertexSet.interval(0, 75, 150), VertexSet.interval(75, 150, 150), params)
        assert a.to_json() == b.to_json()

    def test_rejects_bad_inputs(self):
        c = complete_colouring(10, "red")
        with pytest.raises(ContractViolation):
            run(c, VertexSet.from_indices([0, 1], 10), VertexSet.from_indices([1, 2], 10),
                self.params())
        with pytest.raises(ContractViolation):
            run(c, VertexSet(0, 10), VertexSet.full(10), self.params())


class TestParams:
    def test_defaults(self):
        p = BookParams(k=16, ell=8)
        assert p.mu == Fraction(8, 24)
        assert p.x_min == 48 and p.w_min == 16
        assert p.p_floor == Fraction(1, 16)
        assert 0 < p.epsilon < 1
        assert abs(float(p.epsilon) - 16 ** -0.25) < 1e-6

    def test_validation(self):
        with pytest.raises(ContractViolation):
            BookParams(k=4, ell=8)  # ell > k
        with pytest.raises(ContractViolation):
            BookParams(k=4, ell=4, mu=1)
        with pytest.raises(ContractViolation):
            BookParams(k=4, ell=4, epsilon=Fraction(3, 2))

    def test_epsilon_override_used_exactly(self):
        p = BookParams(k=12, ell=12, epsilon=Fraction(3, 10))
        assert p.epsilon == Fraction(3, 10)
