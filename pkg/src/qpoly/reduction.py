"""Minkowski reduction and equivalence testing for ternary polynomials.

Reduction is done in two stages exactly as the definitions demand: first a
basis realizing the successive minima of the quadratic part (enumerated,
not approximated), then an integral translation moving the minimum of the
polynomial to the zero vector.  Ties are broken by a fixed lexicographic
key on the Gram matrix so the reduced quadratic part is canonical.
"""

from math import gcd
from typing import List, Tuple

from .enumeration import solve_below
from .lattice import isometries
from .matrixops import (
    Matrix,
    det,
    freeze,
    mat_mul,
    solve_exact,
    transpose,
    vec_mat,
)
from .polynomial import (
    AffineTransform,
    QuadPoly,
    apply_transform,
    evaluate,
    integer_minimum,
    is_integer_valued,
)


def _require_ternary(f: QuadPoly, op: str):
    if f.n != 3:
        raise ValueError(f"{op} is only supported for ternary polynomials (n=3)")


def _pair_reduce(gram: Matrix, trans: Matrix) -> Tuple[Matrix, Matrix]:
    # Greedy length reduction; keeps enumeration bounds small.
    g = [list(r) for r in gram]
    t = [list(r) for r in trans]
    n = len(g)
    changed = True
    while changed:
        changed = False
        order = sorted(range(n), key=lambda i: g[i][i])
        if order != list(range(n)):
            g = [[g[i][j] for j in order] for i in order]
            t = [t[i] for i in order]
            changed = True
        for i in range(n):
            for j in range(n):
                if i == j:
                    continue
                # minimize Q(e_j + k e_i) over integer k
                k = -round(g[i][j] / g[i][i])
                if k:
                    new_qjj = g[j][j] + 2 * k * g[i][j] + k * k * g[i][i]
                    if new_qjj < g[j][j]:
                        for col in range(n):
                            g[j][col] += k * g[i][col]
                        for col in range(n):
                            g[col][j] += k * g[col][i]
                        t[j] = [x + k * y for x, y in zip(t[j], t[i])]
                        changed = True
    return freeze(g), freeze(t)


def _rank(vectors: List[tuple]) -> int:
    from fractions import Fraction

    rows = [[Fraction(x) for x in v] for v in vectors]
    rank = 0
    col = 0
    n = len(rows[0]) if rows else 0
    while rank < len(rows) and col < n:
        piv = next((r for r in range(rank, len(rows)) if rows[r][col] != 0), None)
        if piv is None:
            col += 1
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        inv = 1 / rows[rank][col]
        rows[rank] = [x * inv for x in rows[rank]]
        for r in range(len(rows)):
            if r != rank and rows[r][col] != 0:
                f = rows[r][col]
                rows[r] = [x - f * y for x, y in zip(rows[r], rows[rank])]
        rank += 1
        col += 1
    return rank


def _successive_minima(gram: Matrix) -> Tuple[List[int], dict]:
    """Doubled successive minima of a ternary Gram and vectors per value."""
    n = len(gram)
    bound = max(gram[i][i] for i in range(n))
    zero = (0,) * n
    by_value: dict = {}
    for vec, val2 in solve_below(gram, zero, 0, bound):
        if vec != zero:
            by_value.setdefault(val2, []).append(vec)
    minima = []
    chosen: List[tuple] = []
    for val in sorted(by_value):
        for vec in sorted(by_value[val]):
            if _rank(chosen + [vec]) > len(chosen):
                chosen.append(vec)
                minima.append(val)
                if len(minima) == n:
                    return minima, by_value
    raise AssertionError("positive definite lattice must attain its minima")


def _gram_key(g: Matrix):
    return (
        g[0][0],
        g[1][1],
        g[2][2],
        abs(g[0][1]),
        abs(g[0][2]),
        abs(g[1][2]),
        g[0][1],
        g[0][2],
        g[1][2],
    )


def reduce_gram(gram: Matrix) -> Tuple[Matrix, Matrix]:
    """Canonical Minkowski-reduced form of a ternary Gram and the row
    transform T with T gram T^t equal to it."""
    pre, t0 = _pair_reduce(gram, freeze([[1 if i == j else 0 for j in range(3)] for i in range(3)]))
    minima, by_value = _successive_minima(pre)
    s1 = sorted(by_value.get(minima[0], []))
    s2 = sorted(by_value.get(minima[1], []))
    s3 = sorted(by_value.get(minima[2], []))
    best = None
    for v1 in s1:
        for v2 in s2:
            if _rank([v1, v2]) < 2:
                continue
            for v3 in s3:
                t = freeze([v1, v2, v3])
                if abs(det(t)) != 1:
                    continue
                g = mat_mul(mat_mul(t, pre), transpose(t))
                key = (_gram_key(g), t)
                if best is None or key < best[0]:
                    best = (key, g, t)
    if best is None:
        raise AssertionError("successive minima are attained by a basis in rank 3")
    _, g, t = best
    return g, mat_mul(t, t0)


def gram_is_minkowski_reduced(gram: Matrix) -> bool:
    """Definitional check: Q(e_i) <= Q(x) whenever gcd(x_i, ..., x_n) = 1."""
    n = len(gram)
    if any(gram[i][i] > gram[i + 1][i + 1] for i in range(n - 1)):
        return False
    bound = gram[n - 1][n - 1]
    zero = (0,) * n
    for vec, val2 in solve_below(gram, zero, 0, bound):
        if vec == zero:
            continue
        for i in range(n):
            if val2 < gram[i][i] and gcd(*vec[i:]) == 1:
                return False
    return True


def minkowski_reduce(f: QuadPoly) -> Tuple[QuadPoly, AffineTransform]:
    """Equivalent reduced polynomial and the transform realizing it.

    The quadratic part of the result is the canonical Minkowski-reduced
    Gram; the polynomial attains its minimum at the zero vector.
    """
    _require_ternary(f, "minkowski_reduce")
    if not f.is_positive_definite():
        raise ValueError("quadratic part must be positive definite")
    if not is_integer_valued(f):
        raise ValueError("polynomial must be integer-valued")
    _, t = reduce_gram(f.gram2)
    h = apply_transform(f, AffineTransform(t, (0,) * 3))
    _, argmin = integer_minimum(h)
    # g(x) = h(x + argmin) = f((x + argmin) T) = f(x T + argmin T)
    transform = AffineTransform(t, vec_mat(argmin, t))
    return apply_transform(f, transform), transform


def is_reduced(f: QuadPoly) -> bool:
    """Minkowski-reduced quadratic part and minimum attained at zero."""
    _require_ternary(f, "is_reduced")
    if not f.is_positive_definite():
        return False
    if not gram_is_minkowski_reduced(f.gram2):
        return False
    m_int, _ = integer_minimum(f)
    return m_int == f.c


def equivalent(f: QuadPoly, g: QuadPoly) -> bool:
    """Whether some x -> x T + x0 carries f onto g (ternary only)."""
    for poly, name in ((f, "first"), (g, "second")):
        _require_ternary(poly, "equivalent")
        if not poly.is_positive_definite():
            raise ValueError(f"{name} polynomial must be positive definite")
        if not is_integer_valued(poly):
            raise ValueError(f"{name} polynomial must be integer-valued")
    fr, _ = minkowski_reduce(f)
    gr, _ = minkowski_reduce(g)
    if fr.gram2 != gr.gram2:
        return False
    from fractions import Fraction

    for u_cols in isometries(fr.gram2, fr.gram2):
        u = transpose(u_cols)  # row convention: x -> x u
        h = apply_transform(fr, AffineTransform(u, (0,) * 3))
        rhs = [Fraction(a - b, 2) for a, b in zip(gr.lin2, h.lin2)]
        x0 = solve_exact(fr.gram2, rhs)
        if any(x.denominator != 1 for x in x0):
            continue
        x0 = tuple(int(x) for x in x0)
        if evaluate(h, x0) == gr.c:
            return True
    return False
