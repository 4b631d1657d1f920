"""The book-construction algorithm with full trace recording.

The run maintains disjoint vertex sets X, Y (the working pair), A (a red
clique, every A-(X u Y) edge red) and B (a blue clique, every B-X edge
blue), and alternates a degree-regularisation pass over X with exactly one
of: a big-blue step (move a whole blue book spine into B), a red step (move
the central vertex into A, shrink X and Y to its red neighbourhoods), or a
density-boost step (move the central vertex into B, shrink X to its blue
and Y to its red neighbourhood).

All densities and thresholds are exact rationals.  The two irrational
multipliers that appear in the step rules, eps**-1/2 in the regularisation
threshold and eps**-1/4 in the moderate-step cutoff, only ever occur in
comparisons between nonnegative quantities, which are decided exactly by
squaring / fourth-powering both sides.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from . import kernels
from .cliques import Book, best_blue_book
from .colouring import Colouring, ContractViolation, VertexSet
from ._util import dump_json, frac_str, parse_frac

STEP_KINDS = ("DegreeRegularise", "BigBlue", "Red", "DensityBoost")
HALTING_REASONS = (
    "x_small",                # |X| <= x_min
    "p_small",                # p <= p_floor
    "exhausted",              # a set update emptied X or Y, p undefined
    "red_clique_complete",    # |A| = k
    "blue_clique_complete",   # |B| >= ell
    "no_central_vertex",      # no eligible vertex and big blue not triggered
)


class InternalError(RuntimeError):
    pass


def default_epsilon(k: int) -> Fraction:
    """Rational stand-in for k**-0.25, rounded to six decimal places."""
    eps = Fraction(round(k ** -0.25 * 10**6), 10**6)
    if not 0 < eps < 1:
        raise ContractViolation(f"default epsilon undefined for k={k}; pass one explicitly")
    return eps


@dataclass(frozen=True)
class BookParams:
    """Run parameters.

    x_min and w_min stand in for two Ramsey-number thresholds that are far
    out of reach at experimental scale (the |X| floor and the big-blue
    trigger count).  Their true values separate by a polynomial-in-k factor
    as k grows, which is what keeps the central vertex's weight from going
    badly negative; at small scale that separation is only a measured
    diagnostic, so both are plain knobs here (defaults 3k and k).
    """

    k: int
    ell: int
    mu: Fraction = None
    epsilon: Fraction = None
    x_min: int = None
    w_min: int = None
    p_floor: Fraction = None
    spine_budget: int = 12

    def __post_init__(self):
        object.__setattr__(self, "mu",
                           Fraction(self.mu) if self.mu is not None
                           else Fraction(self.ell, self.k + self.ell))
        object.__setattr__(self, "epsilon",
                           Fraction(self.epsilon) if self.epsilon is not None
                           else default_epsilon(self.k))
        object.__setattr__(self, "x_min", self.x_min if self.x_min is not None else 3 * self.k)
        object.__setattr__(self, "w_min", self.w_min if self.w_min is not None else self.k)
        object.__setattr__(self, "p_floor",
                           Fraction(self.p_floor) if self.p_floor is not None
                           else Fraction(1, self.k))
        if not 1 <= self.ell <= self.k:
            raise ContractViolation("need 1 <= ell <= k")
        if not 0 < self.mu < 1:
            raise ContractViolation("mu must lie in (0, 1)")
        if not 0 < self.epsilon < 1:
            raise ContractViolation("epsilon must lie in (0, 1)")
        if self.x_min < 1 or self.w_min < 1 or self.spine_budget < 1:
            raise ContractViolation("x_min, w_min and spine_budget must be at least 1")
        if not 0 <= self.p_floor < 1:
            raise ContractViolation("p_floor must lie in [0, 1)")

    def to_json_obj(self):
        return {
            "k": self.k, "ell": self.ell, "mu": frac_str(self.mu),
            "epsilon": frac_str(self.epsilon), "x_min": self.x_min,
            "w_min": self.w_min, "p_floor": frac_str(self.p_floor),
            "spine_budget": self.spine_budget,
        }

    @classmethod
    def from_json_obj(cls, obj) -> "BookParams":
        return cls(k=obj["k"], ell=obj["ell"], mu=parse_frac(obj["mu"]),
                   epsilon=parse_frac(obj["epsilon"]), x_min=obj["x_min"],
                   w_min=obj["w_min"], p_floor=parse_frac(obj["p_floor"]),
                   spine_budget=obj["spine_budget"])


def height(p, p0, epsilon, k: int) -> int:
    """Smallest h >= 1 with p <= p0 + ((1 + eps)**h - 1) / k.

    For p <= 1 this is at most ceil((2 / eps) * ln k) once k >= 2; the hard
    cap below is far above that and only guards against misuse.
    """
    p, p0, epsilon = Fraction(p), Fraction(p0), Fraction(epsilon)
    if not 0 < p <= 1:
        raise ContractViolation("height needs 0 < p <= 1")
    cap = 64 + int(8.0 * max(1.0, math.log(k + 1)) / float(epsilon))
    grow = 1 + epsilon
    factor = Fraction(1)
    for h in range(1, cap + 1):
        factor *= grow
        if p <= p0 + (factor - 1) / k:
            return h
    raise InternalError(f"no height below cap {cap} for p={p}")


def alpha(h: int, epsilon, k: int) -> Fraction:
    """Allowed red-step density drop at height h: eps * (1 + eps)**(h-1) / k."""
    if h < 1:
        raise ContractViolation("height must be at least 1")
    epsilon = Fraction(epsilon)
    return epsilon * (1 + epsilon) ** (h - 1) / k


def q_value(h: int, p0, epsilon, k: int) -> Fraction:
    """Rung h of the density ladder, q_0 = p0."""
    epsilon = Fraction(epsilon)
    return Fraction(p0) + ((1 + epsilon) ** h - 1) / k


def le_inverse_root(d: int, epsilon: Fraction, root: int) -> bool:
    """Exact test  d <= epsilon**(-1/root)  for integer d."""
    if d <= 0:
        return True
    return Fraction(d) ** root * epsilon <= 1


def _keeps_degree(deg: int, p: Fraction, a: Fraction, y_size: int, epsilon: Fraction) -> bool:
    """Exact test  deg >= (p - eps**(-1/2) * a) * y_size."""
    shortfall = p * y_size - deg
    if shortfall <= 0:
        return True
    return shortfall * shortfall * epsilon <= (a * y_size) ** 2


@dataclass
class StepRecord:
    index: int
    kind: str
    x_size: int
    y_size: int
    p: Optional[Fraction]
    h: Optional[int]
    alpha: Fraction
    beta: Optional[Fraction] = None
    central_vertex: Optional[int] = None
    spine: Optional[tuple] = None
    pages: Optional[int] = None
    removed: Optional[tuple] = None
    halts: bool = False
    halting_reason: Optional[str] = None

    def to_json_obj(self):
        return {
            "kind": self.kind,
            "x_size": self.x_size,
            "y_size": self.y_size,
            "p": frac_str(self.p) if self.p is not None else None,
            "h": self.h,
            "alpha": frac_str(self.alpha),
            "beta": frac_str(self.beta) if self.beta is not None else None,
            "central_vertex": self.central_vertex,
            "spine": list(self.spine) if self.spine is not None else None,
            "pages": self.pages,
            "removed_count": len(self.removed) if self.removed is not None else None,
        }


class BookState:
    """Mutable working state of a run; sets are int bitsets internally."""

    def __init__(self, c: Colouring, X0: VertexSet, Y0: VertexSet, params: BookParams):
        if len(X0) == 0 or len(Y0) == 0:
            raise ContractViolation("X0 and Y0 must be nonempty")
        if not X0.isdisjoint(Y0):
            raise ContractViolation("X0 and Y0 must be disjoint")
        self.c = c
        self.params = params
        self.X = X0.bits
        self.Y = Y0.bits
        self.A = 0
        self.B = 0
        self.index = 0
        self.e = kernels.pair_count(c, self.X, self.Y)  # red X-Y edge count
        self.p = Fraction(self.e, len(X0) * len(Y0))
        self.p0 = self.p

    def x_size(self) -> int:
        return self.X.bit_count()

    def y_size(self) -> int:
        return self.Y.bit_count()

    def recompute_p(self) -> Optional[Fraction]:
        nx, ny = self.X.bit_count(), self.Y.bit_count()
        if nx == 0 or ny == 0:
            self.e = None
            self.p = None
        else:
            self.e = kernels.pair_count(self.c, self.X, self.Y)
            self.p = Fraction(self.e, nx * ny)
        return self.p

    def current_height(self) -> int:
        return height(self.p, self.p0, self.params.epsilon, self.params.k)

    def vertex_set(self, bits: int) -> VertexSet:
        return VertexSet(bits, self.c.n)


def pair_weight(state: BookState, x: int, y: int) -> Fraction:
    """Weight of the ordered pair (x, y):
    (|N_R(x) & N_R(y) & Y| - p |N_R(x) & Y|) / |Y|.  Not symmetric in x, y.
    """
    if not ((state.X >> x) & 1 and (state.X >> y) & 1):
        raise ContractViolation("pair_weight needs x and y in X")
    if state.Y == 0:
        raise ContractViolation("pair_weight needs Y nonempty")
    red = state.c.red
    common = (red[x] & red[y] & state.Y).bit_count()
    rx = (red[x] & state.Y).bit_count()
    return Fraction(common - state.p * rx, state.y_size())


def vertex_weight(state: BookState, x: int) -> Fraction:
    """Sum of pair_weight(x, y) over y in X - {x}."""
    if not (state.X >> x) & 1:
        raise ContractViolation("vertex_weight needs x in X")
    red = state.c.red
    ybits = state.Y
    rx_bits = red[x] & ybits
    rx = rx_bits.bit_count()
    walk = 0
    bits = rx_bits
    while bits:
        low = bits & -bits
        bits ^= low
        walk += (red[low.bit_length() - 1] & state.X).bit_count()
    co_sum = walk - rx  # drop the y = x term
    return Fraction(co_sum - state.p * (state.x_size() - 1) * rx, state.y_size())


def degree_regularise(state: BookState, params: BookParams) -> StepRecord:
    """Remove from X every vertex whose red degree into Y falls below
    (p - eps**(-1/2) * alpha_h) |Y|; vertices exactly on the threshold stay.

    Cannot empty X: the threshold sits at or below the average red degree
    p |Y|, so a maximum-degree vertex always survives.
    """
    if state.X == 0 or state.Y == 0:
        raise ContractViolation("degree regularisation needs nonempty X and Y")
    h = state.current_height()
    a = alpha(h, params.epsilon, params.k)
    ysize = state.y_size()
    removed = []
    keep = state.X
    for x, deg in kernels.degrees_into(state.c, state.X, state.Y):
        if not _keeps_degree(deg, state.p, a, ysize, params.epsilon):
            keep &= ~(1 << x)
            removed.append(x)
    state.X = keep
    state.index += 1
    p = state.recompute_p()
    if p is None:
        raise InternalError("degree regularisation emptied X")
    return StepRecord(
        index=state.index, kind="DegreeRegularise",
        x_size=state.x_size(), y_size=ysize,
        p=p, h=state.current_height(), alpha=a, removed=tuple(removed),
    )


def find_big_blue_candidates(state: BookState, params: BookParams) -> VertexSet:
    """Vertices of X with blue degree inside X at least mu |X|."""
    if state.X == 0:
        raise ContractViolation("X must be nonempty")
    xsize = state.x_size()
    mu = params.mu
    bits = 0
    for x, rdeg in kernels.degrees_into(state.c, state.X, state.X):
        bdeg = xsize - 1 - rdeg
        if bdeg * mu.denominator >= mu.numerator * xsize:
            bits |= 1 << x
    return state.vertex_set(bits)


def _pick_central_vertex(state: BookState, params: BookParams):
    """Max-weight vertex among those with blue degree at most mu |X|.

    Returns (vertex, beta) or None when nothing is eligible.  The argmax is
    taken over the integer key  co_sum * |X| * |Y| - e (|X|-1) r_x, an
    |X| |Y|^2-multiple of the vertex weight, so the comparison is exact;
    ties go to the lowest vertex index.
    """
    xsize, ysize = state.x_size(), state.y_size()
    mu = params.mu
    e = state.e
    blue_deg = {}
    for x, rdeg in kernels.degrees_into(state.c, state.X, state.X):
        blue_deg[x] = xsize - 1 - rdeg
    best = None
    best_key = None
    for x, walk, rx in kernels.walk_sums(state.c, state.X, state.Y):
        if blue_deg[x] * mu.denominator > mu.numerator * xsize:
            continue
        key = (walk - rx) * xsize * ysize - e * (xsize - 1) * rx
        if best is None or key > best_key:
            best, best_key = x, key
    if best is None:
        return None
    return best, Fraction(blue_deg[best], xsize)


def step(state: BookState, params: BookParams, book_search=best_blue_book) -> Optional[StepRecord]:
    """One of: big blue / red / density boost, following degree regularisation.

    Returns None when no central vertex is eligible and the big-blue trigger
    count is not met (the caller halts); otherwise applies exactly one step
    and returns its record.
    """
    if state.p is None:
        raise ContractViolation("state has undefined density")
    h = state.current_height()
    a = alpha(h, params.epsilon, params.k)
    xsize, ysize = state.x_size(), state.y_size()

    W = find_big_blue_candidates(state, params)
    if len(W) >= params.w_min:
        book = book_search(state.c, state.vertex_set(state.X), params.mu, params.spine_budget)
        state.X = book.pages.bits
        state.B |= book.spine.bits
        state.index += 1
        p = state.recompute_p()
        return StepRecord(
            index=state.index, kind="BigBlue",
            x_size=state.x_size(), y_size=state.y_size(),
            p=p, h=state.current_height() if p is not None else None, alpha=a,
            spine=tuple(sorted(book.spine)), pages=len(book.pages),
        )

    picked = _pick_central_vertex(state, params)
    if picked is None:
        return None
    x, beta = picked
    red_x = state.c.red[x]
    new_x_red = red_x & state.X
    new_y = red_x & state.Y
    e_red = kernels.pair_count(state.c, new_x_red, new_y)
    # red step iff density(N_R(x) & X, N_R(x) & Y) >= p - alpha_h
    if Fraction(e_red) >= (state.p - a) * new_x_red.bit_count() * new_y.bit_count():
        state.X = new_x_red
        state.Y = new_y
        state.A |= 1 << x
        kind = "Red"
    else:
        state.X = state.c.blue(x) & state.X
        state.Y = new_y
        state.B |= 1 << x
        kind = "DensityBoost"
    state.index += 1
    p = state.recompute_p()
    return StepRecord(
        index=state.index, kind=kind,
        x_size=state.x_size(), y_size=state.y_size(),
        p=p, h=state.current_height() if p is not None else None, alpha=a,
        beta=beta, central_vertex=x,
    )


@dataclass
class Trace:
    params: BookParams
    n: int
    x0: tuple
    y0: tuple
    p0: Fraction
    steps: list
    halting_reason: str
    final_A: tuple
    final_Y: tuple
    final_B: tuple = ()
    summary: dict = field(default_factory=dict)

    def __post_init__(self):
        if not self.summary:
            self.summary = self._build_summary()

    def red_steps(self):
        return [r for r in self.steps if r.kind == "Red"]

    def boost_steps(self):
        return [r for r in self.steps if r.kind == "DensityBoost"]

    def big_blue_steps(self):
        return [r for r in self.steps if r.kind == "BigBlue"]

    def moderate_boost_indices(self) -> set:
        """Density-boost indices whose height jump is at most eps**(-1/4)."""
        out = set()
        if not self.boost_steps():
            return out
        eps = self.params.epsilon
        prev_h = height(self.p0, self.p0, eps, self.params.k)
        for rec in self.steps:
            if rec.p is None or rec.h is None:
                break
            if rec.kind == "DensityBoost":
                jump = rec.h - prev_h
                if le_inverse_root(jump, eps, 4):
                    out.add(rec.index)
            prev_h = rec.h
        return out

    def beta_harmonic(self) -> Fraction:
        """Harmonic mean of beta over moderate boost steps; mu when none."""
        moderate = self.moderate_boost_indices()
        inv = Fraction(0)
        count = 0
        for rec in self.steps:
            if rec.index in moderate:
                inv += 1 / rec.beta
                count += 1
        if count == 0:
            return self.params.mu
        return count / inv

    def _build_summary(self):
        return {
            "t": len(self.red_steps()),
            "s": len(self.boost_steps()),
            "big_blue_count": len(self.big_blue_steps()),
            "beta_harmonic": self.beta_harmonic(),
            "halting_reason": self.halting_reason,
            "final_A": list(self.final_A),
            "final_Y_size": len(self.final_Y),
        }

    def to_json(self) -> str:
        # x0/y0 list the actual initial sets so a checker can replay the run
        # from the colouring alone; x0_size/y0_size stay as plain fields.
        summary = dict(self.summary)
        summary["beta_harmonic"] = frac_str(summary["beta_harmonic"])
        return dump_json({
            "params": self.params.to_json_obj(),
            "n": self.n,
            "p0": frac_str(self.p0),
            "x0_size": len(self.x0),
            "y0_size": len(self.y0),
            "x0": list(self.x0),
            "y0": list(self.y0),
            "steps": [r.to_json_obj() for r in self.steps],
            "summary": summary,
        })

    @classmethod
    def from_json(cls, text: str) -> "Trace":
        import json

        obj = json.loads(text)
        params = BookParams.from_json_obj(obj["params"])
        if obj["x0_size"] != len(obj["x0"]) or obj["y0_size"] != len(obj["y0"]):
            raise ValueError("x0_size/y0_size disagree with the x0/y0 lists")
        steps = []
        for i, rec in enumerate(obj["steps"], start=1):
            steps.append(StepRecord(
                index=i, kind=rec["kind"], x_size=rec["x_size"], y_size=rec["y_size"],
                p=parse_frac(rec["p"]) if rec["p"] is not None else None,
                h=rec["h"],
                alpha=parse_frac(rec["alpha"]),
                beta=parse_frac(rec["beta"]) if rec["beta"] is not None else None,
                central_vertex=rec["central_vertex"],
                spine=tuple(rec["spine"]) if rec["spine"] is not None else None,
                pages=rec["pages"],
                removed=None if rec["removed_count"] is None else ("?",) * rec["removed_count"],
            ))
        summary = dict(obj["summary"])
        summary["beta_harmonic"] = parse_frac(summary["beta_harmonic"])
        # final_Y membership is not serialised (only its size); checkers
        # recover it by replaying the run.
        return cls(
            params=params, n=obj["n"], x0=tuple(obj["x0"]), y0=tuple(obj["y0"]),
            p0=parse_frac(obj["p0"]), steps=steps,
            halting_reason=summary["halting_reason"],
            final_A=tuple(summary["final_A"]),
            final_Y=(),
            summary=summary,
        )


def drive(state: BookState, params: BookParams, book_search=best_blue_book, observer=None):
    """Loop: regularise then step, until one of the six halting rules fires.

    Returns (steps, reason).  `observer(state, record)` is called after each
    state update; the trace checker uses it to snapshot the evolving sets.
    """
    steps = []
    reason = None
    while True:
        if state.p <= params.p_floor:
            reason = "p_small"
            break
        if state.x_size() <= params.x_min:
            reason = "x_small"
            break
        rec = degree_regularise(state, params)
        steps.append(rec)
        if observer is not None:
            observer(state, rec)
        rec = step(state, params, book_search)
        if rec is None:
            reason = "no_central_vertex"
            break
        steps.append(rec)
        if observer is not None:
            observer(state, rec)
        if state.A.bit_count() >= params.k:
            reason = "red_clique_complete"
            break
        if state.B.bit_count() >= params.ell:
            reason = "blue_clique_complete"
            break
        if rec.p is None:
            reason = "exhausted"
            break
    if steps:
        steps[-1].halts = True
        steps[-1].halting_reason = reason
    return steps, reason


def run(c: Colouring, X0: VertexSet, Y0: VertexSet, params: BookParams,
        book_search=best_blue_book) -> Trace:
    """Full run producing a Trace.

    The final (A, Y) pair is re-verified to be a red book, edge by edge,
    before returning.
    """
    state = BookState(c, X0, Y0, params)
    steps, reason = drive(state, params, book_search)

    final_book = Book(state.vertex_set(state.A), state.vertex_set(state.Y), "red")
    final_book.verify(c)

    return Trace(
        params=params, n=c.n, x0=tuple(X0), y0=tuple(Y0), p0=state.p0,
        steps=steps, halting_reason=reason,
        final_A=tuple(sorted(state.vertex_set(state.A))),
        final_Y=tuple(sorted(state.vertex_set(state.Y))),
        final_B=tuple(sorted(state.vertex_set(state.B))),
    )
