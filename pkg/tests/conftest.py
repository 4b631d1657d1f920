from fractions import Fraction

import pytest

from rbl._util import splitmix64
from rbl.colouring import Colouring


def block_colouring(block_size, probs, seed):
    """Random colouring with per-block-pair red probabilities.

    probs[(a, b)] with a <= b gives the red probability between block a and
    block b; blocks are consecutive runs of `block_size` vertices.
    """
    nblocks = max(b for _, b in probs) + 1
    n = block_size * nblocks
    rows = [0] * n
    idx = 0
    for u in range(1, n):
        for v in range(u):
            idx += 1
            a, b = sorted((u // block_size, v // block_size))
            p = Fraction(probs[(a, b)])
            if splitmix64(seed, idx) * p.denominator < p.numerator * (1 << 64):
                rows[u] |= 1 << v
                rows[v] |= 1 << u
    return Colouring(n, rows)


def complete_colouring(n, colour="red"):
    if colour == "red":
        full = (1 << n) - 1
        return Colouring(n, [full & ~(1 << u) for u in range(n)])
    return Colouring(n, [0] * n)


# anti-assortative inside X, correlated across to Y: forces density-boost
# steps (a central vertex's red X-neighbourhood points at the Y-sparse side)
BOOSTY_PROBS = {
    (0, 0): Fraction(1, 2), (0, 1): Fraction(9, 10), (1, 1): Fraction(1, 2),
    (0, 2): Fraction(4, 5), (0, 3): Fraction(1, 5),
    (1, 2): Fraction(1, 5), (1, 3): Fraction(4, 5),
    (2, 2): Fraction(1, 2), (2, 3): Fraction(1, 2), (3, 3): Fraction(1, 2),
}


@pytest.fixture(scope="session")
def boosty_colouring():
    return block_colouring(60, BOOSTY_PROBS, seed=9)
