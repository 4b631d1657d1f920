"""Trace replay and exact invariant checking.

check_trace re-executes the deterministic run from the trace's recorded
inputs, compares every recorded field against the re-execution, and then
asserts the per-step arithmetic facts of the algorithm directly on the
reconstructed state sequence, all in exact rational arithmetic:

  replay  recorded fields match the deterministic re-execution
  1       containment chains; Y changes only on red / boost steps
  2       A, B, X, Y disjoint; A-internal and A-(X u Y) edges red,
          B-internal and B-X edges blue, after every step
  3       total pair weight (diagonal included) nonnegative at every
          central-vertex selection
  4       degree regularisation boosts p by (removed/|X_i|) eps^-1/2 alpha
  5       red steps lose at most alpha
  6       density-boost steps gain at least
          ((1-b)/b) a - a/(b|X|) + w(x)|Y| / (b|X| |N_R(x) & Y|)
  7       per-height ladder decomposition of every density change sums
          back to the change (exact identity)
  8       eps/k <= alpha_h(p) <= eps (p - q0 + 1/k) for p >= q0, with
          equality alpha = eps/k whenever p <= q1
  9       bookkeeping: t = |A|, s + sum of spines = |B|,
          |D| <= |R|+|B|+|S|+1

plus the exact parts of the weight-bound and beta-floor checks, and the
asymptotic-flavoured quantities reported as diagnostics, never asserted.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from . import kernels
from .book import BookParams, BookState, Trace, alpha, drive, height, q_value
from .colouring import Colouring, VertexSet
from ._util import dump_json, frac_str, parse_frac


class ProvenanceError(ValueError):
    """The trace was not produced from this colouring."""


class SchemaError(ValueError):
    """Structurally malformed trace."""


@dataclass
class CheckResult:
    status: str  # "pass" | "fail" | "diagnostic"
    worst_slack: Optional[Fraction] = None
    first_violation: Optional[int] = None
    detail: Optional[str] = None

    def to_json_obj(self):
        return {
            "status": self.status,
            "worst_slack": frac_str(self.worst_slack) if self.worst_slack is not None else None,
            "first_violation": self.first_violation,
        }


@dataclass
class CheckReport:
    checks: dict = field(default_factory=dict)
    diagnostics: dict = field(default_factory=dict)
    weight_margins: list = field(default_factory=list)  # (index, margin) for R u S
    beta_values: list = field(default_factory=list)     # (index, kind, beta)

    def failures(self):
        return {cid: r for cid, r in self.checks.items() if r.status == "fail"}

    def ok(self) -> bool:
        return not self.failures()

    def to_json(self) -> str:
        return dump_json({
            "checks": {cid: r.to_json_obj() for cid, r in self.checks.items()},
            "diagnostics": {k: (frac_str(v) if v is not None else None)
                            for k, v in self.diagnostics.items()},
        })


@dataclass
class _Snap:
    """State after one step: bitsets, density and red X-Y edge count."""
    kind: str
    X: int
    Y: int
    A: int
    B: int
    p: Optional[Fraction]
    e: Optional[int]
    rec: object


def _assert_schema(trace: Trace):
    if not isinstance(trace.x0, tuple) or not isinstance(trace.y0, tuple):
        raise SchemaError("x0/y0 must be vertex lists")
    for rec in trace.steps:
        if rec.kind not in ("DegreeRegularise", "BigBlue", "Red", "DensityBoost"):
            raise SchemaError(f"step {rec.index}: unknown kind {rec.kind!r}")
        if rec.kind in ("Red", "DensityBoost"):
            if rec.central_vertex is None or rec.beta is None:
                raise SchemaError(f"step {rec.index}: missing central vertex fields")
        if rec.kind == "BigBlue" and (rec.spine is None or rec.pages is None):
            raise SchemaError(f"step {rec.index}: missing book fields")
        if rec.kind == "DegreeRegularise" and rec.removed is None:
            raise SchemaError(f"step {rec.index}: missing removed count")


def _replay(c: Colouring, trace: Trace):
    """Re-execute the run; return (snapshots incl. initial state, steps, reason)."""
    n = c.n
    if any(not 0 <= v < n for v in trace.x0 + trace.y0):
        raise ProvenanceError("x0/y0 mention vertices outside the colouring")
    if trace.n != n:
        raise ProvenanceError(f"trace records n={trace.n}, colouring has n={n}")
    X0 = VertexSet.from_indices(trace.x0, n)
    Y0 = VertexSet.from_indices(trace.y0, n)
    try:
        state = BookState(c, X0, Y0, trace.params)
    except Exception as exc:
        raise SchemaError(f"invalid initial sets: {exc}") from exc
    snaps = [_Snap("initial", state.X, state.Y, 0, 0, state.p, state.e, None)]

    def observe(st, rec):
        snaps.append(_Snap(rec.kind, st.X, st.Y, st.A, st.B, st.p, st.e, rec))

    steps, reason = drive(state, trace.params, observer=observe)
    return snaps, steps, reason, state


_REPLAY_FIELDS = ("kind", "x_size", "y_size", "p", "h", "alpha", "beta",
                  "central_vertex", "spine", "pages")


def _compare_records(trace: Trace, snaps, steps, reason, final_state) -> CheckResult:
    """Field-by-field comparison of the recorded trace with the re-execution."""
    def fail(idx, msg):
        return CheckResult("fail", first_violation=idx, detail=msg)

    if trace.p0 != snaps[0].p:
        return fail(0, f"p0 recorded {trace.p0}, recomputed {snaps[0].p}")
    if len(trace.steps) != len(steps):
        return fail(min(len(trace.steps), len(steps)) + 1,
                    f"{len(trace.steps)} steps recorded, {len(steps)} replayed")
    for got, want in zip(trace.steps, steps):
        for name in _REPLAY_FIELDS:
            g, w = getattr(got, name), getattr(want, name)
            if name == "spine" and g is not None and w is not None:
                g, w = tuple(g), tuple(w)
            if g != w:
                return fail(want.index, f"{name} recorded {g!r}, replayed {w!r}")
        g_removed = None if got.removed is None else len(got.removed)
        w_removed = None if want.removed is None else len(want.removed)
        if g_removed != w_removed:
            return fail(want.index, f"removed_count recorded {g_removed}, replayed {w_removed}")
    if trace.halting_reason != reason:
        return fail(len(steps), f"halting_reason recorded {trace.halting_reason!r}, "
                                f"replayed {reason!r}")
    replayed = Trace(
        params=trace.params, n=trace.n, x0=trace.x0, y0=trace.y0,
        p0=snaps[0].p, steps=steps, halting_reason=reason,
        final_A=tuple(sorted(final_state.vertex_set(final_state.A))),
        final_Y=tuple(sorted(final_state.vertex_set(final_state.Y))),
    )
    got_summary = dict(trace.summary)
    for key, want in replayed.summary.items():
        if got_summary.get(key) != want:
            return fail(len(steps), f"summary {key} recorded "
                                    f"{got_summary.get(key)!r}, replayed {want!r}")
    return CheckResult("pass")


class _Collector:
    """Tracks worst slack / first violation for one >= 0 style check."""

    def __init__(self):
        self.worst = None
        self.first_bad = None

    def add(self, index: int, slack):
        if self.worst is None or slack < self.worst:
            self.worst = slack
        if slack < 0 and self.first_bad is None:
            self.first_bad = index

    def result(self) -> CheckResult:
        status = "fail" if self.first_bad is not None else "pass"
        return CheckResult(status, worst_slack=self.worst, first_violation=self.first_bad)


def _mono_ok(rows, members_bits: int) -> bool:
    """Are all edges inside members present in `rows`?"""
    m = members_bits
    while m:
        low = m & -m
        m ^= low
        if m & ~rows[low.bit_length() - 1]:
            return False
    return True


def _cross_ok(rows, abits: int, bbits: int) -> bool:
    """Are all A-B edges present in `rows`?"""
    m = abits
    while m:
        low = m & -m
        m ^= low
        if bbits & ~rows[low.bit_length() - 1]:
            return False
    return True


def _vertex_weight_parts(c, xbits: int, ybits: int, e: int, x: int):
    """(weight numerator over common denominator |X| |Y|^2, r_x, omega exact)."""
    red = c.red
    rx_bits = red[x] & ybits
    rx = rx_bits.bit_count()
    walk = 0
    bits = rx_bits
    while bits:
        low = bits & -bits
        bits ^= low
        walk += (red[low.bit_length() - 1] & xbits).bit_count()
    co = walk - rx
    nx, ny = xbits.bit_count(), ybits.bit_count()
    key = co * nx * ny - e * (nx - 1) * rx
    omega = Fraction(key, nx * ny * ny)
    return key, rx, omega


def _run_exact_checks(c: Colouring, params: BookParams, snaps, report: CheckReport):
    eps, k, mu = params.epsilon, params.k, params.mu
    p0 = snaps[0].p
    col = {cid: _Collector() for cid in
           ("1", "2", "3", "4", "5", "6", "7", "8", "weight_bound", "beta_floor")}
    blue_rows = [c.blue(u) for u in range(c.n)]

    def qh(h):
        return q_value(h, p0, eps, k)

    # check 8 covers the initial state too
    for i, snap in enumerate(snaps):
        if snap.p is None:
            continue
        h = height(snap.p, p0, eps, k)
        a = alpha(h, eps, k)
        col["8"].add(i, a - Fraction(eps, k))
        if snap.p >= p0:
            col["8"].add(i, eps * (snap.p - p0 + Fraction(1, k)) - a)
        if snap.p <= qh(1):
            col["8"].add(i, Fraction(0) if a == Fraction(eps, k) else Fraction(-1))

    for i in range(1, len(snaps)):
        prev, cur = snaps[i - 1], snaps[i]
        rec = cur.rec
        kind = rec.kind

        # 1: containment, and Y only moves on red / boost steps
        ok = (cur.X & ~prev.X) == 0 and (cur.Y & ~prev.Y) == 0
        if kind in ("DegreeRegularise", "BigBlue"):
            ok = ok and cur.Y == prev.Y
        col["1"].add(i, Fraction(0) if ok else Fraction(-1))

        # 2: disjointness and the red/blue side conditions
        sets = (cur.X, cur.Y, cur.A, cur.B)
        disjoint = all(sets[a] & sets[b] == 0
                       for a in range(4) for b in range(a + 1, 4))
        good = (disjoint
                and _mono_ok(c.red, cur.A) and _cross_ok(c.red, cur.A, cur.X | cur.Y)
                and _mono_ok(blue_rows, cur.B) and _cross_ok(blue_rows, cur.B, cur.X))
        col["2"].add(i, Fraction(0) if good else Fraction(-1))

        if kind in ("Red", "DensityBoost"):
            # 3: nonnegative total pair weight at the selection state
            ssq = kernels.sum_sq_degrees(c, prev.X, prev.Y)
            ny = prev.Y.bit_count()
            col["3"].add(i, Fraction(ny * ssq - prev.e * prev.e, ny * ny))

            # weight bound: recorded centre is the exact eligible argmax
            nx = prev.X.bit_count()
            best_key, best_x = None, None
            for x, rdeg in kernels.degrees_into(c, prev.X, prev.X):
                if (nx - 1 - rdeg) * mu.denominator > mu.numerator * nx:
                    continue
                key, _, _ = _vertex_weight_parts(c, prev.X, prev.Y, prev.e, x)
                if best_key is None or key > best_key:
                    best_key, best_x = key, x
            argmax_ok = best_x == rec.central_vertex
            col["weight_bound"].add(i, Fraction(0) if argmax_ok else Fraction(-1))
            _, rx, omega = _vertex_weight_parts(c, prev.X, prev.Y, prev.e,
                                                rec.central_vertex)
            report.weight_margins.append((i, omega + Fraction(nx, k ** 5)))

            # beta floor: beta <= mu exactly; 1/k^2 margin is diagnostic
            bdeg = (c.blue(rec.central_vertex) & prev.X).bit_count()
            beta = Fraction(bdeg, nx)
            col["beta_floor"].add(i, mu - beta)
            report.beta_values.append((i, kind, beta))

            h_prev = height(prev.p, p0, eps, k)
            a_prev = alpha(h_prev, eps, k)
            if kind == "Red" and cur.p is not None:
                # 5: red steps lose at most alpha
                col["5"].add(i, cur.p - prev.p + a_prev)
            if kind == "DensityBoost" and cur.p is not None and beta > 0 and rx > 0:
                # 6: the exact boost bound
                bound = (prev.p + (1 - beta) / beta * a_prev
                         - a_prev / (beta * nx)
                         + omega * ny / (beta * nx * rx))
                col["6"].add(i, cur.p - bound)

        if kind == "DegreeRegularise":
            # 4: density boost from pruning low-degree vertices
            nx_after = cur.X.bit_count()
            removed = prev.X.bit_count() - nx_after
            h_prev = height(prev.p, p0, eps, k)
            a_prev = alpha(h_prev, eps, k)
            delta = cur.p - prev.p
            need = Fraction(removed, nx_after) * a_prev
            ok = delta >= 0 and delta * delta * eps >= need * need
            col["4"].add(i, delta * delta * eps - need * need if delta >= 0 else Fraction(-1))

        # 7: ladder decomposition identity for the density change
        if prev.p is not None and cur.p is not None:
            h_top = max(height(prev.p, p0, eps, k), height(cur.p, p0, eps, k))

            def clamped(p, h):
                if h == 1:
                    return min(p, qh(1))
                return min(max(p, qh(h - 1)), qh(h))

            total = Fraction(0)
            for h in range(1, h_top + 1):
                total += clamped(cur.p, h) - clamped(prev.p, h)
            diff = (cur.p - prev.p) - total
            col["7"].add(i, Fraction(0) if diff == 0 else -abs(diff))

    for cid in ("1", "2", "3", "4", "5", "6", "7", "8", "weight_bound", "beta_floor"):
        report.checks[cid] = col[cid].result()

    # 9: bookkeeping identities
    last = snaps[-1]
    kinds = [s.kind for s in snaps[1:]]
    t = kinds.count("Red")
    s_count = kinds.count("DensityBoost")
    d_count = kinds.count("DegreeRegularise")
    b_count = kinds.count("BigBlue")
    spine_total = sum(len(s.rec.spine) for s in snaps[1:] if s.kind == "BigBlue")
    ok9 = (t == last.A.bit_count()
           and s_count + spine_total == last.B.bit_count()
           and d_count <= t + b_count + s_count + 1)
    report.checks["9"] = CheckResult("pass" if ok9 else "fail",
                                     worst_slack=Fraction(t + b_count + s_count + 1 - d_count),
                                     first_violation=None if ok9 else len(kinds))


def _diagnostics(c: Colouring, replayed: Trace, snaps, report: CheckReport):
    params = replayed.params
    eps, k, mu, ell = params.epsilon, params.k, params.mu, params.ell
    p0 = snaps[0].p
    summary = replayed.summary
    t, s = summary["t"], summary["s"]
    beta_h = summary["beta_harmonic"]

    p_slacks = [snap.p - (p0 - 3 * eps) for snap in snaps[1:] if snap.p is not None]
    report.diagnostics["bounding_p_min_slack"] = min(p_slacks) if p_slacks else None

    y0, ym = snaps[0].Y.bit_count(), snaps[-1].Y.bit_count()
    x0, xm = snaps[0].X.bit_count(), snaps[-1].X.bit_count()
    report.diagnostics["ybound_ratio"] = Fraction(ym) / (p0 ** (s + t) * y0)
    x_pred = mu ** ell * (1 - mu) ** t * (beta_h / mu) ** s * x0
    report.diagnostics["xbound_ratio"] = Fraction(xm) / x_pred

    moderate = replayed.moderate_boost_indices()
    zig = sum(((1 - b) / b for i, kind, b in report.beta_values
               if kind == "DensityBoost" and i in moderate and b > 0), Fraction(0))
    report.diagnostics["zigzag_sum"] = zig
    report.diagnostics["zigzag_slack"] = t - zig
    report.diagnostics["s_bound_slack"] = beta_h / (1 - beta_h) * t - s
    report.diagnostics["beta_bound_slack"] = (beta_h - Fraction(s, s + t)) if s + t else None

    margins = [m for _, m in report.weight_margins]
    report.diagnostics["weight_bound_min_margin"] = min(margins) if margins else None
    floors = [b - Fraction(1, k * k) for i, kind, b in report.beta_values
              if kind == "DensityBoost"]
    report.diagnostics["beta_floor_min_margin"] = min(floors) if floors else None
    report.checks["10"] = CheckResult("diagnostic")


def check_trace(c: Colouring, trace: Trace) -> CheckReport:
    """Replay `trace` against `c` and evaluate every check.

    Exact checks are computed on the re-executed (ground truth) state
    sequence; the "replay" check asserts that every recorded field matches
    that re-execution, so any semantic tampering shows up there even when
    the mathematics of the tampered values happens to stay consistent.
    """
    _assert_schema(trace)
    report = CheckReport()
    snaps, steps, reason, final_state = _replay(c, trace)
    report.checks["replay"] = _compare_records(trace, snaps, steps, reason, final_state)
    _run_exact_checks(c, trace.params, snaps, report)
    replayed = Trace(
        params=trace.params, n=trace.n, x0=trace.x0, y0=trace.y0,
        p0=snaps[0].p, steps=steps, halting_reason=reason,
        final_A=tuple(sorted(final_state.vertex_set(final_state.A))),
        final_Y=tuple(sorted(final_state.vertex_set(final_state.Y))),
    )
    _diagnostics(c, replayed, snaps, report)
    return report


def check_weight_bound(c: Colouring, trace: Trace):
    """Per-step weight margins omega(x_i) + |X_{i-1}| / k^5 for red/boost
    steps, plus the exact argmax assertion, as (margins, argmax_result)."""
    report = check_trace(c, trace)
    return report.weight_margins, report.checks["weight_bound"]


def run_and_check_seed(task) -> dict:
    """Seed-sweep worker: generate G(n, p), run the algorithm on the halves
    split, check the trace, and boil the outcome down to a picklable dict.

    `task` is (n, red_prob string, seed, params json obj).
    """
    from .book import run
    from .colouring import random_colouring

    n, red_prob, seed, params_obj = task
    params = BookParams.from_json_obj(params_obj)
    c = random_colouring(n, parse_frac(red_prob), seed)
    trace = run(c, VertexSet.interval(0, n // 2, n), VertexSet.interval(n // 2, n, n), params)
    report = check_trace(c, trace)
    exact_ids = ["replay"] + [str(i) for i in range(1, 10)]
    diag_keys = ("bounding_p_min_slack", "ybound_ratio", "xbound_ratio",
                 "zigzag_sum", "s_bound_slack")
    return {
        "seed": seed,
        "halting_reason": trace.halting_reason,
        "kinds": [r.kind for r in trace.steps],
        "exact_failures": sorted(cid for cid in exact_ids
                                 if report.checks[cid].status == "fail"),
        "weight_argmax_ok": report.checks["weight_bound"].status == "pass",
        "beta_le_mu_ok": report.checks["beta_floor"].status == "pass",
        "diagnostics_populated": all(report.diagnostics.get(key) is not None
                                     for key in diag_keys),
        "t": trace.summary["t"],
        "s": trace.summary["s"],
    }


def check_beta_floor(trace: Trace):
    """Exact beta <= mu assertion over the recorded red/boost steps, plus the
    1/k^2 floor margins for boost steps (diagnostic)."""
    mu = trace.params.mu
    k2 = trace.params.k ** 2
    coll = _Collector()
    floors = []
    for rec in trace.steps:
        if rec.beta is None:
            continue
        coll.add(rec.index, mu - rec.beta)
        if rec.kind == "DensityBoost":
            floors.append((rec.index, rec.beta - Fraction(1, k2)))
    return floors, coll.result()

