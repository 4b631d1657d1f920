"""Exact monochromatic clique and book search.

Everything here is deterministic: candidate vertices are always scanned in
ascending index order, so ties break toward the lowest indices and repeated
runs return identical witnesses.  Results are re-verified edge by edge
before being returned.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from . import _kernels_py
from .colouring import Colouring, ContractViolation, VertexSet


class NoBookError(ValueError):
    """No blue book meeting the requested page threshold exists in `within`."""


@dataclass(frozen=True)
class Book:
    """Monochromatic book: spine S (a clique), pages T, every S-T edge in colour."""

    spine: VertexSet
    pages: VertexSet
    colour: str

    def verify(self, c: Colouring) -> None:
        rows = c.red if self.colour == "red" else [c.blue(u) for u in range(c.n)]
        if not self.spine.isdisjoint(self.pages):
            raise ContractViolation("spine and pages overlap")
        members = list(self.spine)
        for i, u in enumerate(members):
            for v in members[i + 1:]:
                if not (rows[u] >> v) & 1:
                    raise ContractViolation(f"spine pair {{{u}, {v}}} not {self.colour}")
            if self.pages.bits & ~rows[u]:
                raise ContractViolation(f"vertex {u} misses a page in {self.colour}")


def _rows_for(c: Colouring, colour: str):
    if colour == "red":
        return c.red
    if colour == "blue":
        return [c.blue(u) for u in range(c.n)]
    raise ContractViolation(f"unknown colour {colour!r}")


def _greedy_colour_bound(rows, cand: int) -> int:
    """Greedy colouring upper bound on the clique number inside `cand`."""
    classes = []
    bits = cand
    while bits:
        low = bits & -bits
        v = low.bit_length() - 1
        bits ^= low
        for i, cls in enumerate(classes):
            if not rows[v] & cls:
                classes[i] = cls | low
                break
        else:
            classes.append(low)
    return len(classes)


def _verify_clique(rows, members) -> None:
    for i, u in enumerate(members):
        for v in members[i + 1:]:
            if not (rows[u] >> v) & 1:
                raise ContractViolation(f"returned non-clique pair {{{u}, {v}}}")


def max_clique(c: Colouring, colour: str, within: VertexSet, size_cap: int) -> VertexSet:
    """Maximum clique of `colour` inside `within`, search cut at size_cap.

    Branch and bound: candidates in ascending order, greedy-colouring bound
    for pruning.  Once a clique of size_cap is found the search stops and
    that clique is returned.
    """
    if len(within) == 0:
        raise ContractViolation("within must be nonempty")
    if size_cap < 1:
        raise ContractViolation("size_cap must be at least 1")
    rows = _rows_for(c, colour)

    best_bits = 0
    best_size = 0

    def extend(current_bits, current_size, cand):
        nonlocal best_bits, best_size
        if best_size >= size_cap:
            return
        if current_size > best_size:
            best_bits, best_size = current_bits, current_size
            if best_size >= size_cap:
                return
        if current_size + _greedy_colour_bound(rows, cand) <= best_size:
            return
        while cand:
            if current_size + cand.bit_count() <= best_size:
                return
            low = cand & -cand
            v = low.bit_length() - 1
            cand ^= low
            extend(current_bits | low, current_size + 1, cand & rows[v])
            if best_size >= size_cap:
                return

    extend(0, 0, within.bits)
    members = VertexSet(best_bits, c.n)
    _verify_clique(rows, list(members))
    return members


def has_mono_clique(c: Colouring, k: int, ell: int):
    """("red", witness) / ("blue", witness) / ("neither", None); exact.

    Red is searched first, so the report is deterministic.
    """
    if k < 1 or ell < 1:
        raise ContractViolation("clique targets must be at least 1")
    everything = VertexSet.full(c.n)
    red = max_clique(c, "red", everything, size_cap=k)
    if len(red) >= k:
        return ("red", red)
    blue = max_clique(c, "blue", everything, size_cap=ell)
    if len(blue) >= ell:
        return ("blue", blue)
    return ("neither", None)


def _page_threshold_ok(pages: int, mu: Fraction, spine_size: int, within_size: int) -> bool:
    # pages >= mu**spine_size * within_size / 2, cross-multiplied
    num, den = mu.numerator, mu.denominator
    return pages * 2 * den**spine_size >= num**spine_size * within_size


def best_blue_book(c: Colouring, within: VertexSet, mu, spine_budget: int) -> Book:
    """Blue book (S, T) in `within` with |T| >= mu^|S| |within| / 2, |S| maximal
    over the search budget.

    Search: greedy blue clique seeded through the high-blue-degree vertices
    (falling back to all of `within` if none qualify), then exhaustive
    refinement over subsets of the seed when the seed fits in spine_budget,
    prefix chains of the greedy order otherwise.  T is always the common
    blue neighbourhood of S in within - S.
    """
    mu = Fraction(mu)
    if not 0 < mu < 1:
        raise ContractViolation("mu must lie in (0, 1)")
    if len(within) == 0:
        raise ContractViolation("within must be nonempty")
    wsize = len(within)
    blue = [c.blue(u) for u in range(c.n)]

    pool = [u for u in within if (blue[u] & within.bits).bit_count() * mu.denominator
            >= mu.numerator * wsize]
    if not pool:
        pool = [u for u in within if blue[u] & within.bits]
    if not pool:
        raise NoBookError("no vertex in `within` has a blue neighbour there")

    # greedy blue clique through the pool, ascending index
    greedy = []
    common = within.bits  # within, intersected with blue nbhds of all members
    for u in pool:
        if (common >> u) & 1:
            greedy.append(u)
            common &= blue[u]

    def pages_of(spine) -> int:
        t = within.bits
        for u in spine:
            t &= blue[u]
        return t

    best = None  # (-size, sorted member tuple) -> minimised
    best_spine = None
    if len(greedy) <= spine_budget:
        # exhaustive refinement over subsets of the greedy seed
        for mask in range(1, 1 << len(greedy)):
            spine = [greedy[i] for i in range(len(greedy)) if (mask >> i) & 1]
            if best is not None and -len(spine) > best[0]:
                continue
            pages_bits = pages_of(spine)
            if not _page_threshold_ok(pages_bits.bit_count(), mu, len(spine), wsize):
                continue
            key = (-len(spine), tuple(spine))
            if best is None or key < best:
                best, best_spine = key, (spine, pages_bits)
    else:
        # greedy-extend only: largest feasible prefix of the greedy chain
        for size in range(len(greedy), 0, -1):
            spine = greedy[:size]
            pages_bits = pages_of(spine)
            if _page_threshold_ok(pages_bits.bit_count(), mu, size, wsize):
                best_spine = (spine, pages_bits)
                break

    if best_spine is None:
        raise NoBookError("no blue book meets the page threshold in `within`")
    spine, pages_bits = best_spine
    book = Book(VertexSet.from_indices(spine, c.n), VertexSet(pages_bits, c.n), "blue")
    book.verify(c)
    return book


def _has_clique_in(adj, mask: int, size: int) -> bool:
    """Does `mask` span a clique of `size` vertices in adjacency `adj`?"""
    if size <= 0:
        return True
    if size == 1:
        return mask != 0
    m = mask
    while m:
        low = m & -m
        m ^= low
        if _has_clique_in(adj, adj[low.bit_length() - 1] & m, size - 1):
            return True
    return False


def exists_good_colouring(n: int, k: int, ell: int):
    """Search for a colouring of K_n with no red K_k and no blue K_ell.

    Returns a witness Colouring, or None after exhausting the space.  The
    search extends one vertex at a time, deciding its edges to earlier
    vertices in order: colouring the new edge to u red is pruned as soon as
    it would complete a red K_k (a red K_{k-2} among u's red neighbours
    already chosen red), and symmetrically for blue.  Every completion is
    therefore a good colouring, and no good colouring is missed.
    """
    if k < 1 or ell < 1:
        raise ContractViolation("clique targets must be at least 1")
    if k == 1 or ell == 1:
        return None  # a single vertex is already a monochromatic K_1
    red = [0] * n
    blue = [0] * n

    def red_ok(u, rmask):
        got = red[u] & rmask
        if k == 2:
            return False
        if k == 3:
            return not got
        return not _has_clique_in(red, got, k - 2)

    def blue_ok(u, bmask):
        got = blue[u] & bmask
        if ell == 2:
            return False
        if ell == 3:
            return not got
        if ell == 4:  # any blue edge inside `got`?
            m = got
            while m:
                low = m & -m
                m ^= low
                if blue[low.bit_length() - 1] & m:
                    return False
            return True
        return not _has_clique_in(blue, got, ell - 2)

    def assign(v, u, rmask, bmask):
        if u == v:
            red[v], blue[v] = rmask, bmask
            for w in _kernels_py.iter_bits(rmask):
                red[w] |= 1 << v
            for w in _kernels_py.iter_bits(bmask):
                blue[w] |= 1 << v
            if v + 1 == n:
                return Colouring(n, list(red))
            got = assign(v + 1, 0, 0, 0)
            if got is not None:
                return got
            for w in _kernels_py.iter_bits(rmask):
                red[w] &= ~(1 << v)
            for w in _kernels_py.iter_bits(bmask):
                blue[w] &= ~(1 << v)
            red[v] = blue[v] = 0
            return None
        bit = 1 << u
        if red_ok(u, rmask):
            got = assign(v, u + 1, rmask | bit, bmask)
            if got is not None:
                return got
        if blue_ok(u, bmask):
            got = assign(v, u + 1, rmask, bmask | bit)
            if got is not None:
                return got
        return None

    return assign(0, 0, 0, 0)
