"""Red-blue colourings of complete graphs and vertex-set bitsets.

A Colouring stores, per vertex, the bitset of its red neighbours; blue is
the complement (minus the vertex itself).  Densities are exact fractions.
The only persistence format is "RBC1": a header line ``RBC1 <n>`` followed
by the lower triangle, one row of '0'/'1' characters per vertex 1..n-1.
"""

from __future__ import annotations

from fractions import Fraction

import numpy as np

from . import kernels
from ._util import splitmix64


class ContractViolation(ValueError):
    """An operation was called outside its stated preconditions."""


class UndefinedDensityError(ContractViolation):
    """Density of an empty side requested."""


class ParseError(ValueError):
    """Malformed RBC1 input; message names the offending line."""


class VertexSet:
    """Immutable ordered set of vertices in [0, n), backed by an int bitset."""

    __slots__ = ("bits", "n", "_count")

    def __init__(self, bits: int, n: int):
        if bits < 0 or bits >> n:
            raise ContractViolation("bitset has members outside [0, n)")
        self.bits = bits
        self.n = n
        self._count = bits.bit_count()

    @classmethod
    def from_indices(cls, indices, n: int) -> "VertexSet":
        bits = 0
        for v in indices:
            if not 0 <= v < n:
                raise ContractViolation(f"vertex {v} outside [0, {n})")
            bits |= 1 << v
        return cls(bits, n)

    @classmethod
    def full(cls, n: int) -> "VertexSet":
        return cls((1 << n) - 1, n)

    @classmethod
    def interval(cls, lo: int, hi: int, n: int) -> "VertexSet":
        return cls(((1 << (hi - lo)) - 1) << lo, n)

    def __len__(self):
        return self._count

    def __contains__(self, v):
        return 0 <= v < self.n and (self.bits >> v) & 1

    def __iter__(self):
        bits = self.bits
        while bits:
            low = bits & -bits
            yield low.bit_length() - 1
            bits ^= low

    def __eq__(self, other):
        return isinstance(other, VertexSet) and self.bits == other.bits and self.n == other.n

    def __hash__(self):
        return hash((self.bits, self.n))

    def __and__(self, other):
        return VertexSet(self.bits & other.bits, self.n)

    def __or__(self, other):
        return VertexSet(self.bits | other.bits, self.n)

    def __sub__(self, other):
        return VertexSet(self.bits & ~other.bits, self.n)

    def issubset(self, other) -> bool:
        return self.bits & ~other.bits == 0

    def isdisjoint(self, other) -> bool:
        return self.bits & other.bits == 0

    def rank(self, v: int) -> int:
        """Number of members strictly below v."""
        return (self.bits & ((1 << v) - 1)).bit_count()

    def __repr__(self):
        return f"VertexSet({sorted(self)}, n={self.n})"


class Colouring:
    """Symmetric two-colouring of E(K_n); immutable once constructed."""

    __slots__ = ("n", "red", "_packed_rows", "_blue")

    def __init__(self, n: int, red):
        if n < 1:
            raise ContractViolation("need at least one vertex")
        if len(red) != n:
            raise ContractViolation("one red bitset per vertex required")
        self.n = n
        self.red = list(red)
        self._packed_rows = None
        self._blue = None
        full = (1 << n) - 1
        for u, row in enumerate(self.red):
            if row & ~full:
                raise ContractViolation(f"red[{u}] mentions vertices outside [0, n)")
            if (row >> u) & 1:
                raise ContractViolation(f"self-loop at vertex {u}")
        # symmetry, checked on the unpacked adjacency matrix
        mat = np.unpackbits(self.packed().view(np.uint8), bitorder="little", axis=1)[:, :n]
        if not np.array_equal(mat, mat.T):
            u, v = np.argwhere(mat != mat.T)[0]
            raise ContractViolation(f"asymmetric pair {{{u}, {v}}}")

    def full_bits(self) -> int:
        return (1 << self.n) - 1

    def blue(self, u: int) -> int:
        """Blue-neighbour bitset of u (complement of red, no self-loop)."""
        if self._blue is None:
            full = self.full_bits()
            self._blue = [full & ~self.red[v] & ~(1 << v) for v in range(self.n)]
        return self._blue[u]

    def packed(self) -> np.ndarray:
        if self._packed_rows is None:
            self._packed_rows = kernels.pack_rows(self.red, self.n)
        return self._packed_rows

    def red_edge_count(self) -> int:
        return sum(r.bit_count() for r in self.red) // 2

    def __eq__(self, other):
        return isinstance(other, Colouring) and self.n == other.n and self.red == other.red

    def __repr__(self):
        return f"Colouring(n={self.n}, red_edges={self.red_edge_count()})"


def _edge_index(u: int, v: int) -> int:
    """Position of edge {u, v} (u > v) in lower-triangle row order."""
    return u * (u - 1) // 2 + v


def random_colouring(n: int, red_prob, seed: int) -> Colouring:
    """Independent red/blue coin per edge, driven by the splitmix64 stream.

    Edge {u, v} with u > v is red iff draw(edge_index) * den < num * 2**64
    where red_prob = num/den exactly.  Deterministic in (n, red_prob, seed);
    the vectorised and scalar paths below evaluate the identical predicate.
    """
    if n < 1:
        raise ContractViolation("need at least one vertex")
    p = Fraction(red_prob)
    if not 0 <= p <= 1:
        raise ContractViolation("red_prob must lie in [0, 1]")
    seed &= (1 << 64) - 1
    m = n * (n - 1) // 2
    # draw < num * 2**64 / den  <=>  draw <= (num * 2**64 - 1) // den
    if p == 0:
        red_flags = np.zeros(m, dtype=bool)
    elif p == 1:
        red_flags = np.ones(m, dtype=bool)
    else:
        cutoff = (p.numerator * (1 << 64) - 1) // p.denominator
        idx = np.arange(1, m + 1, dtype=np.uint64)
        z = (np.uint64(seed) + idx * np.uint64(0x9E3779B97F4A7C15))
        z = (z ^ (z >> np.uint64(30))) * np.uint64(0xBF58476D1CE4E5B9)
        z = (z ^ (z >> np.uint64(27))) * np.uint64(0x94D049BB133111EB)
        z = z ^ (z >> np.uint64(31))
        red_flags = z <= np.uint64(cutoff)
    mat = np.zeros((n, n), dtype=bool)
    pos = 0
    for u in range(1, n):
        mat[u, :u] = red_flags[pos:pos + u]
        pos += u
    mat |= mat.T
    packed = np.packbits(mat, bitorder="little", axis=1)
    rows = [int.from_bytes(packed[u].tobytes(), "little") for u in range(n)]
    return Colouring(n, rows)


def _is_prime(q: int) -> bool:
    if q < 2:
        return False
    i = 2
    while i * i <= q:
        if q % i == 0:
            return False
        i += 1
    return True


def paley_colouring(q: int) -> Colouring:
    """Vertices Z_q, edge {u, v} red iff u - v is a nonzero square mod q.

    Requires q prime with q = 1 (mod 4), which makes -1 a square and the
    relation symmetric.
    """
    if not _is_prime(q) or q % 4 != 1:
        raise ContractViolation("q must be a prime congruent to 1 mod 4")
    residues = {(x * x) % q for x in range(1, q)}
    diff_bits = 0
    for d in residues:
        diff_bits |= 1 << d
    rows = []
    for u in range(q):
        bits = 0
        for v in range(q):
            if v != u and (diff_bits >> ((u - v) % q)) & 1:
                bits |= 1 << v
        rows.append(bits)
    return Colouring(q, rows)


def red_density(c: Colouring, X: VertexSet, Y: VertexSet) -> Fraction:
    """Exact red edge density between disjoint nonempty X and Y."""
    if len(X) == 0 or len(Y) == 0:
        raise UndefinedDensityError("density over an empty side is undefined")
    if not X.isdisjoint(Y):
        raise ContractViolation("X and Y must be disjoint")
    return Fraction(kernels.pair_count(c, X.bits, Y.bits), len(X) * len(Y))


def blue_density(c: Colouring, X: VertexSet, Y: VertexSet) -> Fraction:
    return 1 - red_density(c, X, Y)


def save(c: Colouring, path) -> None:
    lines = [f"RBC1 {c.n}"]
    for u in range(1, c.n):
        row = c.red[u]
        lines.append("".join("1" if (row >> v) & 1 else "0" for v in range(u)))
    from ._util import atomic_write_text

    atomic_write_text(path, "\n".join(lines) + "\n")


def load(path) -> Colouring:
    with open(path) as fh:
        text = fh.read()
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    if not lines:
        raise ParseError("line 1: empty file, expected 'RBC1 <n>' header")
    head = lines[0].split()
    if len(head) != 2 or head[0] != "RBC1":
        raise ParseError("line 1: expected 'RBC1 <n>' header")
    try:
        n = int(head[1])
    except ValueError:
        raise ParseError("line 1: vertex count is not an integer") from None
    if n < 1:
        raise ParseError("line 1: vertex count must be at least 1")
    if len(lines) - 1 != n - 1:
        raise ParseError(f"line {len(lines) + 1}: expected row for vertex {len(lines)} "
                         f"({n - 1} rows required, got {len(lines) - 1})")
    rows = [0] * n
    for u in range(1, n):
        line = lines[u]
        if len(line) != u:
            raise ParseError(f"line {u + 1}: expected {u} characters, got {len(line)}")
        bits = 0
        for v, ch in enumerate(line):
            if ch == "1":
                bits |= 1 << v
            elif ch != "0":
                raise ParseError(f"line {u + 1}: invalid character {ch!r}")
        rows[u] |= bits
        r = bits
        while r:
            low = r & -r
            v = low.bit_length() - 1
            r ^= low
            rows[v] |= 1 << u
    return Colouring(n, rows)
