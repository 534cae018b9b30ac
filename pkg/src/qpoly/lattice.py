"""Positive definite integral lattices and lattice cosets.

A lattice of rank n is stored through the doubled Gram matrix
gram2[i][j] = 2 B(e_i, e_j) (diagonal entries 2 Q(e_i)), which keeps
half-integral bilinear forms in integer storage.  A coset is a lattice
plus a rational shift with small denominator.
"""

from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from typing import Iterator, List, Optional, Sequence, Tuple, Union

from .enumeration import gram_value, solve_below, solve_equal
from .matrixops import (
    Matrix,
    det,
    freeze,
    is_positive_definite,
    mat_vec,
    transpose,
)

MAX_RANK = 4
SHIFT_DENOM_CAP = 4

Value = Union[int, Fraction]


def _half(total) -> Value:
    q, r = divmod(total, 2)
    return q if r == 0 else Fraction(total, 2)


@dataclass(frozen=True)
class IntegralLattice:
    """Positive definite lattice with doubled Gram matrix storage."""

    gram2: Matrix

    def __post_init__(self):
        g = freeze(self.gram2)
        object.__setattr__(self, "gram2", g)
        if not 1 <= len(g) <= MAX_RANK:
            raise ValueError(f"rank must be in 1..{MAX_RANK}")
        if not is_positive_definite(g):
            raise ValueError("gram matrix must be symmetric positive definite")

    @classmethod
    def from_gram(cls, rows: Sequence[Sequence[int]]) -> "IntegralLattice":
        """Build from a standard (undoubled) integer Gram matrix."""
        return cls(tuple(tuple(2 * e for e in row) for row in rows))

    @classmethod
    def diagonal(cls, q_values: Sequence[int]) -> "IntegralLattice":
        """Diagonal lattice <q_1, ..., q_n> of the given Q-values."""
        n = len(q_values)
        return cls(
            tuple(
                tuple(2 * q_values[i] if i == j else 0 for j in range(n))
                for i in range(n)
            )
        )

    @property
    def rank(self) -> int:
        return len(self.gram2)

    def disc(self) -> Value:
        """Determinant of the standard Gram matrix, exact."""
        d = Fraction(det(self.gram2), 2**self.rank)
        return int(d) if d.denominator == 1 else d

    def q(self, x: Sequence[int]) -> Value:
        return _half(gram_value(self.gram2, x))


def shortest_vectors(lat: IntegralLattice, bound: int) -> List[Tuple[tuple, Value]]:
    """All nonzero vectors with Q(v) <= bound, sorted by value then vector."""
    zero = (0,) * lat.rank
    found = [
        (vec, _half(val2))
        for vec, val2 in solve_below(lat.gram2, (0,) * lat.rank, 0, 2 * bound)
        if vec != zero
    ]
    found.sort(key=lambda item: (item[1], item[0]))
    return found


@dataclass(frozen=True)
class Coset:
    """Lattice coset M + v with a bounded-denominator rational shift."""

    lattice: IntegralLattice
    shift: Tuple[Fraction, ...]

    def __post_init__(self):
        sh = tuple(Fraction(s) for s in self.shift)
        object.__setattr__(self, "shift", sh)
        if len(sh) != self.lattice.rank:
            raise ValueError("shift length must match lattice rank")
        if self.denominator > SHIFT_DENOM_CAP:
            raise ValueError(f"shift denominator exceeds {SHIFT_DENOM_CAP}")

    @property
    def denominator(self) -> int:
        return lcm(*(s.denominator for s in self.shift)) if self.shift else 1

    def q(self, x: Sequence) -> Fraction:
        """Q(x + shift), exact."""
        g = self.lattice.gram2
        y = [Fraction(x[i]) + self.shift[i] for i in range(len(x))]
        total = sum(y[i] * g[i][j] * y[j] for i in range(len(y)) for j in range(len(y)))
        return total / 2


def coset_is_integral(cs: Coset) -> bool:
    """True iff Q(M + v) lies in the integers.

    Finite test on degree-2 data: Q at v, e_i + v and e_i + e_j + v.
    """
    n = cs.lattice.rank
    points = [(0,) * n]
    points += [tuple(1 if k == i else 0 for k in range(n)) for i in range(n)]
    points += [
        tuple((1 if k == i else 0) + (1 if k == j else 0) for k in range(n))
        for i in range(n)
        for j in range(i, n)
    ]
    return all(cs.q(p).denominator == 1 for p in points)


def coset_represents(cs: Coset, a: int) -> Optional[tuple]:
    """A lattice vector x with Q(x + shift) = a, or None.  Exact and finite.

    The zero vector of the ambient space (x + shift = 0) does not count as
    a representation.
    """
    if a < 0:
        return None
    d = cs.denominator
    sigma = tuple(int(s * d) for s in cs.shift)
    gram = cs.lattice.gram2
    n = cs.lattice.rank
    stride = (d, tuple(s % d for s in sigma))
    for y in solve_equal(gram, (0,) * n, 0, 2 * d * d * a, stride=stride):
        if all(v == 0 for v in y):
            continue
        return tuple((y[i] - sigma[i]) // d for i in range(n))
    return None


def _row_hnf(rows: Sequence[Sequence[int]], n: int) -> List[List[int]]:
    # Row-style Hermite normal form; input has full column rank n.
    mat = [list(r) for r in rows]
    r = 0
    for col in range(n):
        while True:
            nz = [i for i in range(r, len(mat)) if mat[i][col] != 0]
            if not nz:
                raise ValueError("generators do not have full rank")
            i0 = min(nz, key=lambda i: abs(mat[i][col]))
            mat[r], mat[i0] = mat[i0], mat[r]
            done = True
            for i in range(r + 1, len(mat)):
                if mat[i][col] != 0:
                    q = mat[i][col] // mat[r][col]
                    mat[i] = [x - q * y for x, y in zip(mat[i], mat[r])]
                    if mat[i][col] != 0:
                        done = False
            if done:
                break
        if mat[r][col] < 0:
            mat[r] = [-x for x in mat[r]]
        for i in range(r):
            q = mat[i][col] // mat[r][col]
            if q:
                mat[i] = [x - q * y for x, y in zip(mat[i], mat[r])]
        r += 1
    return mat[:n]


def coset_lattice(cs: Coset) -> IntegralLattice:
    """The lattice generated by M and the shift vector, M + Z v."""
    n = cs.lattice.rank
    d = cs.denominator
    sigma = [int(s * d) for s in cs.shift]
    gens = [[d if i == j else 0 for j in range(n)] for i in range(n)]
    gens.append(sigma)
    basis = _row_hnf(gens, n)
    g = cs.lattice.gram2
    out = []
    for bi in basis:
        gb = mat_vec(g, bi)
        row = []
        for bj in basis:
            num = sum(x * y for x, y in zip(bj, gb))
            q, rem = divmod(num, d * d)
            if rem:
                raise ValueError("coset lattice is not integral on the doubled scale")
            row.append(q)
        out.append(tuple(row))
    return IntegralLattice(tuple(out))


def coset_lattice_index(cs: Coset) -> int:
    """Index [M + Zv : M]."""
    n = cs.lattice.rank
    d = cs.denominator
    sigma = [int(s * d) for s in cs.shift]
    gens = [[d if i == j else 0 for j in range(n)] for i in range(n)]
    gens.append(sigma)
    basis = _row_hnf(gens, n)
    h = abs(det(freeze(basis)))
    return d**n // h


def isometries(g1: Matrix, g2: Matrix) -> Iterator[Matrix]:
    """All integer U with U^t g2 U = g1 (doubled Gram matrices).

    Column j of U is the image of the j-th basis vector of the first
    lattice.  Backtracks over vectors of the second lattice with matching
    norms and pairwise products.
    """
    n = len(g1)
    if len(g2) != n or det(g1) != det(g2):
        return
    max_diag = max(g1[i][i] for i in range(n))
    by_norm: dict = {}
    zero = (0,) * n
    for vec, val2 in solve_below(g2, zero, 0, max_diag):
        if vec != zero:
            by_norm.setdefault(val2, []).append(vec)
    for vecs in by_norm.values():
        vecs.sort()

    cols: List[tuple] = []

    def pair(u, v) -> int:
        gu = mat_vec(g2, u)
        return sum(x * y for x, y in zip(v, gu))

    def extend(j: int) -> Iterator[Matrix]:
        if j == n:
            yield transpose(freeze(cols))
            return
        for cand in by_norm.get(g1[j][j], ()):
            if all(pair(cols[i], cand) == g1[i][j] for i in range(j)):
                cols.append(cand)
                yield from extend(j + 1)
                cols.pop()

    yield from extend(0)


def isometric(l1: IntegralLattice, l2: IntegralLattice) -> Optional[Matrix]:
    """An isometry matrix U with U^t gram2(l2) U = gram2(l1), or None."""
    if l1.rank != l2.rank:
        return None
    for u in isometries(l1.gram2, l2.gram2):
        return u
    return None


def automorphisms(lat: IntegralLattice) -> Iterator[Matrix]:
    return isometries(lat.gram2, lat.gram2)


def coset_isometric(c1: Coset, c2: Coset) -> Optional[Matrix]:
    """An isometry of the lattices carrying shift1 into shift2 + lattice2."""
    if c1.lattice.rank > 3 or c2.lattice.rank > 3:
        raise ValueError("coset isometry testing is limited to rank <= 3")
    if c1.lattice.rank != c2.lattice.rank:
        return None
    for u in isometries(c1.lattice.gram2, c2.lattice.gram2):
        image = mat_vec(u, c1.shift)
        if all((Fraction(x) - y).denominator == 1 for x, y in zip(image, c2.shift)):
            return u
    return None
