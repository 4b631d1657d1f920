"""Classical greedy baseline, evaluable bound formulas, and the small exact
Ramsey values this repository certifies itself."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Optional

from .cliques import exists_good_colouring, has_mono_clique
from .colouring import Colouring, ContractViolation, VertexSet


def es_bound(k: int, ell: int) -> int:
    """The classical two-colour bound C(k + ell, ell)."""
    if k < 1 or ell < 1:
        raise ContractViolation("need k, ell >= 1")
    return math.comb(k + ell, ell)


class RangeError(ValueError):
    """(k, ell) outside a bound formula's stated range."""


# id -> (exponent coefficient source, range check, description)
THEOREMS = (
    "off_diagonal_weak",      # e^{-k gamma/20} C(k+l, l),   gamma <= 1/10
    "off_diagonal_gamma",     # e^{-k gamma/40} C(k+l, l),   gamma <= 1/5
    "off_diagonal_near",      # e^{-l/80} C(k+l, l),         l <= 9k/10
    "off_diagonal_nearer",    # e^{-l/50} C(k+l, l),         l <= 2k/3
    "off_diagonal_explicit",  # e^{-l/400} C(k+l, l),        l <= k
    "diagonal",               # (4 - 2^-10)^k               (l = k)
    "diagonal_strong",        # (4 - 2^-7)^k                (l = k)
)


def paper_bound_log(theorem: str, k: int, ell: int) -> float:
    """Natural log of the bound formula; the o(k) factor is rendered as 1."""
    if k < 1 or ell < 1:
        raise ContractViolation("need k, ell >= 1")
    gamma = Fraction(ell, k + ell)
    log_binom = math.lgamma(k + ell + 1) - math.lgamma(k + 1) - math.lgamma(ell + 1)
    if theorem == "off_diagonal_weak":
        if gamma > Fraction(1, 10):
            raise RangeError("off_diagonal_weak needs gamma = ell/(k+ell) <= 1/10")
        return -float(gamma) * k / 20 + log_binom
    if theorem == "off_diagonal_gamma":
        if gamma > Fraction(1, 5):
            raise RangeError("off_diagonal_gamma needs gamma = ell/(k+ell) <= 1/5")
        return -float(gamma) * k / 40 + log_binom
    if theorem == "off_diagonal_near":
        if 10 * ell > 9 * k:
            raise RangeError("off_diagonal_near needs ell <= 9k/10")
        return -ell / 80 + log_binom
    if theorem == "off_diagonal_nearer":
        if 3 * ell > 2 * k:
            raise RangeError("off_diagonal_nearer needs ell <= 2k/3")
        return -ell / 50 + log_binom
    if theorem == "off_diagonal_explicit":
        if ell > k:
            raise RangeError("off_diagonal_explicit needs ell <= k")
        return -ell / 400 + log_binom
    if theorem in ("diagonal", "diagonal_strong"):
        if ell != k:
            raise RangeError(f"{theorem} is a diagonal bound; needs ell = k")
        eps = 2.0 ** -10 if theorem == "diagonal" else 2.0 ** -7
        return k * math.log(4 - eps)
    raise RangeError(f"unknown theorem {theorem!r}")


def paper_bound(theorem: str, k: int, ell: int) -> float:
    """Bound value as a float; inf when it overflows double precision."""
    lv = paper_bound_log(theorem, k, ell)
    try:
        return math.exp(lv)
    except OverflowError:
        return math.inf


def bound_factor(theorem: str, k: int, ell: int) -> float:
    """The exponential improvement factor paper_bound / es_bound."""
    gamma = ell / (k + ell)
    if theorem == "off_diagonal_weak":
        return math.exp(-gamma * k / 20)
    if theorem == "off_diagonal_gamma":
        return math.exp(-gamma * k / 40)
    if theorem == "off_diagonal_near":
        return math.exp(-ell / 80)
    if theorem == "off_diagonal_nearer":
        return math.exp(-ell / 50)
    if theorem == "off_diagonal_explicit":
        return math.exp(-ell / 400)
    raise RangeError(f"no binomial-relative factor for {theorem!r}")


@dataclass
class BoundRow:
    k: int
    ell: int
    es: int
    theorem: str
    factor: float
    value: float

    def csv_fields(self):
        return [str(self.k), str(self.ell), str(self.es), self.theorem,
                repr(self.factor), repr(self.value)]


TABLES_CSV_HEADER = "k,ell,es_bound,theorem,factor,paper_bound"

ELL_RULES = {
    "equal": lambda k: k,
    "quarter": lambda k: max(1, k // 4),
    "ninetenths": lambda k: max(1, 9 * k // 10),
}


def bound_rows(k_lo: int, k_hi: int, ell_rule: str) -> list:
    """BoundRow grid for the CLI `tables` subcommand: one row per theorem
    whose range covers the (k, ell) pair."""
    if ell_rule not in ELL_RULES:
        raise RangeError(f"unknown ell rule {ell_rule!r}")
    rows = []
    for k in range(k_lo, k_hi + 1):
        ell = ELL_RULES[ell_rule](k)
        for theorem in THEOREMS:
            try:
                value = paper_bound(theorem, k, ell)
            except RangeError:
                continue
            if theorem.startswith("diagonal"):
                factor = value / float(es_bound(k, ell)) if value < math.inf else math.inf
            else:
                factor = bound_factor(theorem, k, ell)
            rows.append(BoundRow(k, ell, es_bound(k, ell), theorem, factor, value))
    return rows


def rows_to_csv(rows) -> str:
    lines = [TABLES_CSV_HEADER]
    for row in rows:
        lines.append(",".join(row.csv_fields()))
    return "\n".join(lines) + "\n"


@dataclass
class GreedyResult:
    outcome: str                    # "red" | "blue" | "exhausted"
    red_clique: VertexSet
    blue_clique: VertexSet
    steps: int

    @property
    def clique(self) -> Optional[VertexSet]:
        if self.outcome == "red":
            return self.red_clique
        if self.outcome == "blue":
            return self.blue_clique
        return None


def es_greedy(c: Colouring, k: int, ell: int) -> GreedyResult:
    """One-vertex-at-a-time clique building.

    Repeatedly takes the lowest-indexed x in the candidate set X, puts it in
    the blue clique B when its blue degree in X - {x} is at least
    gamma |X - {x}| with gamma = (ell - |B|) / ((k - |A|) + (ell - |B|))
    recomputed each step, and in the red clique A otherwise, shrinking X to
    the matching neighbourhood.  With n >= C(k + ell, ell) this never
    exhausts X before one of the cliques is complete.
    """
    if k < 1 or ell < 1:
        raise ContractViolation("need k, ell >= 1")
    a_bits = 0
    b_bits = 0
    x_bits = c.full_bits()
    a_left, b_left = k, ell
    steps = 0
    while a_left > 0 and b_left > 0:
        if x_bits == 0:
            return GreedyResult("exhausted", VertexSet(a_bits, c.n),
                                VertexSet(b_bits, c.n), steps)
        x = (x_bits & -x_bits).bit_length() - 1
        rest = x_bits & ~(1 << x)
        blue_deg = (c.blue(x) & rest).bit_count()
        steps += 1
        if blue_deg * (a_left + b_left) >= b_left * rest.bit_count():
            b_bits |= 1 << x
            b_left -= 1
            x_bits = c.blue(x) & rest
        else:
            a_bits |= 1 << x
            a_left -= 1
            x_bits = c.red[x] & rest
    outcome = "red" if a_left == 0 else "blue"
    return GreedyResult(outcome, VertexSet(a_bits, c.n), VertexSet(b_bits, c.n), steps)


def mono_triangle_census(n: int = 6):
    """Exhaustively scan all 2^C(n,2) colourings of K_n for one with no
    monochromatic triangle; returns (#colourings, #triangle-free ones).

    Only sensible for tiny n; the acceptance suite runs it at n = 6.
    """
    pairs = list(combinations(range(n), 2))
    edge_of = {pq: i for i, pq in enumerate(pairs)}
    triples = []
    for a, b, c in combinations(range(n), 3):
        mask = (1 << edge_of[(a, b)]) | (1 << edge_of[(a, c)]) | (1 << edge_of[(b, c)])
        triples.append(mask)
    total = 1 << len(pairs)
    free = 0
    for colouring in range(total):
        for mask in triples:
            got = colouring & mask
            if got == mask or got == 0:
                break
        else:
            free += 1
    return total, free


def certify_ramsey_value(k: int, ell: int, value: int) -> bool:
    """Re-derive R(k, ell) = value by exact search: a good colouring exists
    on value - 1 vertices and none exists on value vertices."""
    witness = exists_good_colouring(value - 1, k, ell)
    if witness is None:
        return False
    kind, _ = has_mono_clique(witness, k, ell)
    if kind != "neither":
        return False
    return exists_good_colouring(value, k, ell) is None


_CERTIFIED = {(3, 3): 6, (3, 4): 9}


def known_ramsey(k: int, ell: int, verify: bool = False) -> Optional[int]:
    """Exact Ramsey value for the pairs this repository certifies by its own
    exhaustive search ((3,3) and (3,4)); None for everything else.

    With verify=True the certification search is re-run on the spot.
    """
    value = _CERTIFIED.get((k, ell))
    if value is not None and verify and not certify_ramsey_value(k, ell, value):
        raise AssertionError(f"stored value R({k},{ell})={value} failed re-certification")
    return value
