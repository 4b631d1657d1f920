"""Pure-Python bitset kernels.

Each function here has a compiled twin in _kernels_c; rbl.kernels picks one
implementation at import time.  Bitsets are plain Python ints (bit v set =
vertex v present), rows[u] is the red-neighbour bitset of vertex u.  All
counting is exact integer arithmetic.
"""

from __future__ import annotations


def iter_bits(bits: int):
    """Yield set-bit positions in ascending order."""
    while bits:
        low = bits & -bits
        yield low.bit_length() - 1
        bits ^= low


def pair_count(rows, xbits: int, ybits: int) -> int:
    """Number of red edges with one endpoint in X and one in Y (disjoint)."""
    total = 0
    for u in iter_bits(xbits):
        total += (rows[u] & ybits).bit_count()
    return total


def degrees_into(rows, srcbits: int, tgtbits: int):
    """[(u, |N_R(u) & tgt|) for u in src], ascending u."""
    return [(u, (rows[u] & tgtbits).bit_count()) for u in iter_bits(srcbits)]


def sum_sq_degrees(rows, xbits: int, ybits: int) -> int:
    """Sum over z in Y of |N_R(z) & X|**2 (red walks of length 2 centred in Y)."""
    total = 0
    for z in iter_bits(ybits):
        d = (rows[z] & xbits).bit_count()
        total += d * d
    return total


def walk_sums(rows, xbits: int, ybits: int, n: int):
    """For each x in X: (x, S_x, r_x) where r_x = |N_R(x) & Y| and
    S_x = sum over z in N_R(x) & Y of |N_R(z) & X|.

    S_x counts ordered red paths x-z-y with z in Y and y in X, i.e. the
    co-neighbourhood sums sum_{y in X} |N_R(x) & N_R(y) & Y| without
    excluding y = x.
    """
    deg = [0] * n
    for z in iter_bits(ybits):
        deg[z] = (rows[z] & xbits).bit_count()
    out = []
    for x in iter_bits(xbits):
        rx_bits = rows[x] & ybits
        s = 0
        for z in iter_bits(rx_bits):
            s += deg[z]
        out.append((x, s, rx_bits.bit_count()))
    return out
