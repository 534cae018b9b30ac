"""Integral quadratic polynomials with positive definite quadratic part.

A polynomial f(x) = Q(x) + L(x) + c is stored with every coefficient
doubled so that all storage is plain integers:

    gram2[i][j] = 2 * A[i][j]   where Q(x) = x A x^t
    lin2[i]     = 2 * b[i]      where L(x) = b . x

so f(x) = (x gram2 x^t + lin2 . x) / 2 + c.  Triangular summands such as
x(x+1)/2 then have gram2 = [1] and lin2 = [1].  Values are exact: integers
or half-integers (Fraction).
"""

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Optional, Sequence, Tuple, Union

from .enumeration import gram_value, solve_below, solve_equal
from .matrixops import (
    Matrix,
    Vector,
    dot,
    det,
    freeze,
    identity,
    is_positive_definite,
    is_symmetric,
    mat_mul,
    mat_vec,
    solve_exact,
    transpose,
    vec_mat,
)

MAX_VARS = 8

Value = Union[int, Fraction]


@dataclass(frozen=True)
class QuadPoly:
    """f(x) = (x gram2 x^t + lin2 . x) / 2 + c over integer vectors x."""

    gram2: Matrix
    lin2: Vector
    c: int

    def __post_init__(self):
        g = freeze(self.gram2)
        object.__setattr__(self, "gram2", g)
        object.__setattr__(self, "lin2", tuple(self.lin2))
        n = len(g)
        if not 1 <= n <= MAX_VARS:
            raise ValueError(f"variable count must be in 1..{MAX_VARS}, got {n}")
        if not is_symmetric(g):
            raise ValueError("gram2 must be symmetric")
        if len(self.lin2) != n:
            raise ValueError("lin2 length must match gram2 size")
        if not all(isinstance(e, int) for row in g for e in row):
            raise ValueError("gram2 entries must be integers")
        if not all(isinstance(e, int) for e in self.lin2):
            raise ValueError("lin2 entries must be integers")
        if not isinstance(self.c, int):
            raise ValueError("constant term must be an integer")

    @property
    def n(self) -> int:
        return len(self.gram2)

    def is_positive_definite(self) -> bool:
        return is_positive_definite(self.gram2)


@dataclass(frozen=True)
class Completion:
    """Completed-square data: f(x) = Q(x + v) + m_f, plus the integer minimum."""

    v: Tuple[Fraction, ...]
    m_f: Fraction
    m_int: Value


@dataclass(frozen=True)
class AffineTransform:
    """Change of variables x -> x T + x0 with T unimodular and x0 integral."""

    t: Matrix
    x0: Vector

    def __post_init__(self):
        object.__setattr__(self, "t", freeze(self.t))
        object.__setattr__(self, "x0", tuple(self.x0))
        if abs(det(self.t)) != 1:
            raise ValueError("transform matrix must be unimodular")
        if len(self.x0) != len(self.t):
            raise ValueError("translation length must match matrix size")


def identity_transform(n: int) -> AffineTransform:
    return AffineTransform(identity(n), (0,) * n)


def _half(total: int) -> Value:
    q, r = divmod(total, 2)
    return q if r == 0 else Fraction(total, 2)


def evaluate(f: QuadPoly, x: Sequence[int]) -> Value:
    """Exact value f(x); an integer or a half-integer Fraction."""
    if len(x) != f.n:
        raise ValueError(f"expected {f.n} coordinates, got {len(x)}")
    return _half(gram_value(f.gram2, x) + dot(f.lin2, x)) + f.c


def is_integer_valued(f: QuadPoly) -> bool:
    """True iff f maps all integer vectors to integers.

    A quadratic polynomial is determined by its degree-2 data, so checking
    the constant, f(e_i) and f(e_i + e_j) for i <= j suffices.
    """
    n = f.n
    points = [tuple(1 if k == i else 0 for k in range(n)) for i in range(n)]
    points += [
        tuple((1 if k == i else 0) + (1 if k == j else 0) for k in range(n))
        for i in range(n)
        for j in range(i, n)
    ]
    return all(isinstance(evaluate(f, p), int) for p in points)


def quadratic_value(f: QuadPoly, x: Sequence) -> Fraction:
    """Q(x) for the quadratic part only; accepts rational coordinates."""
    total = sum(
        Fraction(x[i]) * f.gram2[i][j] * Fraction(x[j])
        for i in range(f.n)
        for j in range(f.n)
    )
    return total / 2


def integer_minimum(f: QuadPoly) -> Tuple[Value, Vector]:
    """Minimum of f over integer vectors and the lexicographically least argmin."""
    if not f.is_positive_definite():
        raise ValueError("quadratic part must be positive definite")
    best = None
    # f(0) = c always lies in the search region, so the sweep is nonempty.
    for vec, val2 in solve_below(f.gram2, f.lin2, 2 * f.c, 2 * f.c):
        key = (val2, vec)
        if best is None or key < best:
            best = key
    val2, vec = best
    return _half(val2), vec


def complete(f: QuadPoly) -> Completion:
    """Solve L(x) = 2B(v, x) exactly and locate both minima."""
    if not f.is_positive_definite():
        raise ValueError("quadratic part must be positive definite")
    b = [Fraction(e, 2) for e in f.lin2]
    v = solve_exact(f.gram2, b)
    m_f = f.c - quadratic_value(f, v)
    m_int, _ = integer_minimum(f)
    return Completion(v=v, m_f=m_f, m_int=m_int)


def apply_transform(f: QuadPoly, t: AffineTransform) -> QuadPoly:
    """g with g(x) = f(x T + x0); represented sets coincide."""
    if len(t.t) != f.n:
        raise ValueError("transform size must match polynomial")
    g2 = mat_mul(mat_mul(t.t, f.gram2), transpose(t.t))
    gx0 = mat_vec(f.gram2, t.x0)
    lin2 = tuple(
        2 * dot(t.t[i], gx0) + dot(f.lin2, t.t[i]) for i in range(f.n)
    )
    c_val = evaluate(f, t.x0)
    if not isinstance(c_val, int):
        raise ValueError("translation lands on a non-integer value; f is not integer-valued")
    return QuadPoly(gram2=g2, lin2=lin2, c=c_val)


def represents(f: QuadPoly, a: int) -> Optional[Vector]:
    """An integer vector x with f(x) = a, or None.  Exact and finite."""
    if not f.is_positive_definite():
        raise ValueError("quadratic part must be positive definite")
    for vec in solve_equal(f.gram2, f.lin2, 2 * f.c, 2 * a):
        return vec
    return None


def triangular_polynomial(coeffs: Sequence[int]) -> QuadPoly:
    """The polynomial sum of a_i x_i (x_i + 1) / 2 as a QuadPoly."""
    coeffs = tuple(coeffs)
    n = len(coeffs)
    g2 = tuple(tuple(coeffs[i] if i == j else 0 for j in range(n)) for i in range(n))
    return QuadPoly(gram2=g2, lin2=coeffs, c=0)


def content_gcd(f: QuadPoly) -> int:
    """gcd of all stored coefficients (doubled scale)."""
    vals = [e for row in f.gram2 for e in row] + list(f.lin2) + [2 * f.c]
    return gcd(*vals) if vals else 0
