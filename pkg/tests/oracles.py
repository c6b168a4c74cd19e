"""Independent reference implementations used only by the tests.

Nothing here imports the package: each oracle recomputes a quantity the slow,
obvious way so the library can be checked against it.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from itertools import product
from math import comb


# finite fields


def _poly_mulmod(a, b, mod, p):
    """Multiply coefficient tuples (low degree first) modulo a monic ``mod``."""
    e = len(mod) - 1
    out = [0] * (2 * e - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] = (out[i + j] + x * y) % p
    for k in range(len(out) - 1, e - 1, -1):
        c = out[k]
        if c:
            for t in range(e + 1):
                out[k - e + t] = (out[k - e + t] - c * mod[t]) % p
    return tuple(out[:e])


def _irreducible(p: int, e: int):
    """Some monic irreducible polynomial of degree e <= 3 (no roots suffices)."""
    for tail in product(range(p), repeat=e):
        mod = tuple(tail) + (1,)
        if all(sum(c * pow(x, k, p) for k, c in enumerate(mod)) % p for x in range(p)):
            return mod
    raise ValueError("no irreducible polynomial found")


class GF:
    """The field with p^e elements (e <= 3), elements as coefficient tuples."""

    def __init__(self, p: int, e: int = 1):
        self.p, self.e = p, e
        self.mod = _irreducible(p, e) if e > 1 else (0, 1)
        self.elements = list(product(range(p), repeat=e))
        self.zero = (0,) * e

    def embed(self, a: int):
        return (a % self.p,) + (0,) * (self.e - 1)

    def mul(self, a, b):
        if self.e == 1:
            return ((a[0] * b[0]) % self.p,)
        return _poly_mulmod(a, b, self.mod, self.p)

    @property
    def q(self) -> int:
        return self.p**self.e


@lru_cache(maxsize=None)
def nonzero_squares(p: int, e: int = 1) -> frozenset:
    F = GF(p, e)
    return frozenset(F.mul(x, x) for x in F.elements if x != F.zero)


def is_square_int(a: int, p: int, e: int = 1) -> bool:
    """Whether the integer a (nonzero mod p) is a square in F_{p^e}, by enumeration."""
    return GF(p, e).embed(a) in nonzero_squares(p, e)


def diagonal_form_class(entries, p: int, e: int = 1) -> tuple[int, int]:
    """(rank, disc bit) of the virtual form sum sign_i <a_i> over F_{p^e}.

    ``entries`` are (sign, a) pairs with sign = +1 or -1.
    """
    rank = sum(s for s, _ in entries)
    bit = sum(s for s, a in entries if not is_square_int(a, p, e)) % 2
    return rank, bit


# integer linear algebra


def bareiss_rank(A) -> int:
    """Rank over Q by fraction-free Gaussian elimination."""
    M = [list(map(int, r)) for r in A]
    if not M or not M[0]:
        return 0
    m, n = len(M), len(M[0])
    rank, prev = 0, 1
    for col in range(n):
        piv = next((i for i in range(rank, m) if M[i][col]), None)
        if piv is None:
            continue
        M[rank], M[piv] = M[piv], M[rank]
        for i in range(rank + 1, m):
            for j in range(col + 1, n):
                M[i][j] = (M[i][j] * M[rank][col] - M[i][col] * M[rank][j]) // prev
            M[i][col] = 0
        prev = M[rank][col]
        rank += 1
        if rank == m:
            break
    return rank


def det(A) -> int:
    """Exact determinant by Gaussian elimination over Q."""
    M = [[Fraction(x) for x in r] for r in A]
    n, sign, out = len(M), 1, Fraction(1)
    for c in range(n):
        piv = next((i for i in range(c, n) if M[i][c]), None)
        if piv is None:
            return 0
        if piv != c:
            M[c], M[piv] = M[piv], M[c]
            sign = -sign
        out *= M[c][c]
        for i in range(c + 1, n):
            f = M[i][c] / M[c][c]
            M[i] = [a - f * b for a, b in zip(M[i], M[c])]
    result = sign * out
    assert result.denominator == 1
    return int(result)


def matmul(A, B):
    return [[sum(a * b for a, b in zip(row, col)) for col in zip(*B)] for row in A]


def rational_rank(vectors) -> int:
    """Rank over Q of a list of rational vectors."""
    M = [[Fraction(x) for x in v] for v in vectors]
    rank = 0
    cols = len(M[0]) if M else 0
    for c in range(cols):
        piv = next((i for i in range(rank, len(M)) if M[i][c]), None)
        if piv is None:
            continue
        M[rank], M[piv] = M[piv], M[rank]
        for i in range(len(M)):
            if i != rank and M[i][c]:
                f = M[i][c] / M[rank][c]
                M[i] = [a - f * b for a, b in zip(M[i], M[rank])]
        rank += 1
    return rank


def affine_intersection(rows) -> tuple[bool, int]:
    """(nonempty, codimension) of {x : a.x = b for [a..., b] in rows} by rank comparison."""
    if not rows:
        return True, 0
    coeff = rational_rank([r[:-1] for r in rows])
    aug = rational_rank(rows)
    return coeff == aug, coeff


# graphs


def connected_components(n_vertices: int, edges) -> int:
    parent = list(range(n_vertices))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for i, j in edges:
        parent[find(i)] = find(j)
    return len({find(v) for v in range(n_vertices)})


def cycle_rank(n_vertices: int, edges) -> int:
    """Dimension of the cycle space: E - V + components."""
    return len(edges) - n_vertices + connected_components(n_vertices, edges)


# motives


def kunneth_torus(d: int) -> dict[tuple[int, int], int]:
    """M(G_m^d) = (1 + 1(1)[1])^{(x) d} as a multiset {(q, p): mult}."""
    return {(n, n): comb(d, n) for n in range(d + 1)}
