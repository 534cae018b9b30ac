"""Small exact linear algebra helpers on integer/rational matrices.

Matrices are tuples of row tuples; vectors are tuples.  Everything is
exact: integers in, integers (or Fractions) out.  Sizes are tiny (n <= 8),
so cofactor expansion is fine.
"""

from fractions import Fraction
from typing import Sequence, Tuple

Matrix = Tuple[Tuple[int, ...], ...]
Vector = Tuple[int, ...]


def freeze(rows: Sequence[Sequence]) -> Matrix:
    return tuple(tuple(r) for r in rows)


def identity(n: int) -> Matrix:
    return tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n))


def transpose(m: Matrix) -> Matrix:
    return tuple(zip(*m))


def is_symmetric(m: Matrix) -> bool:
    n = len(m)
    return all(len(r) == n for r in m) and all(
        m[i][j] == m[j][i] for i in range(n) for j in range(i)
    )


def mat_mul(a: Matrix, b: Matrix) -> Matrix:
    bt = transpose(b)
    return tuple(tuple(sum(x * y for x, y in zip(row, col)) for col in bt) for row in a)


def mat_vec(m: Matrix, v: Sequence) -> tuple:
    return tuple(sum(x * y for x, y in zip(row, v)) for row in m)


def vec_mat(v: Sequence, m: Matrix) -> tuple:
    return tuple(sum(v[i] * m[i][j] for i in range(len(v))) for j in range(len(m[0])))


def dot(u: Sequence, v: Sequence):
    return sum(x * y for x, y in zip(u, v))


def det(m: Matrix):
    """Determinant by cofactor expansion along the first row."""
    n = len(m)
    if n == 0:
        return 1
    if n == 1:
        return m[0][0]
    if n == 2:
        return m[0][0] * m[1][1] - m[0][1] * m[1][0]
    total = 0
    for j in range(n):
        if m[0][j] == 0:
            continue
        minor = tuple(tuple(row[k] for k in range(n) if k != j) for row in m[1:])
        total += (-1) ** j * m[0][j] * det(minor)
    return total


def minor_matrix(m: Matrix, i: int, j: int) -> Matrix:
    return tuple(
        tuple(row[k] for k in range(len(m)) if k != j)
        for r, row in enumerate(m)
        if r != i
    )


def adjugate(m: Matrix) -> Matrix:
    """Adjugate (transposed cofactor matrix); m * adj(m) = det(m) * I."""
    n = len(m)
    if n == 0:
        return ()
    if n == 1:
        return ((1,),)
    cof = [
        [(-1) ** (i + j) * det(minor_matrix(m, i, j)) for j in range(n)]
        for i in range(n)
    ]
    return transpose(freeze(cof))


def leading_minors(m: Matrix) -> list:
    """Determinants of the leading principal k x k submatrices, k = 1..n."""
    n = len(m)
    return [det(tuple(row[:k] for row in m[:k])) for k in range(1, n + 1)]


def is_positive_definite(m: Matrix) -> bool:
    return is_symmetric(m) and all(d > 0 for d in leading_minors(m))


def solve_exact(m: Matrix, rhs: Sequence) -> Tuple[Fraction, ...]:
    """Solve m x = rhs exactly over the rationals (m square, nonsingular)."""
    n = len(m)
    a = [[Fraction(m[i][j]) for j in range(n)] + [Fraction(rhs[i])] for i in range(n)]
    for col in range(n):
        piv = next((r for r in range(col, n) if a[r][col] != 0), None)
        if piv is None:
            raise ValueError("singular matrix")
        a[col], a[piv] = a[piv], a[col]
        inv = 1 / a[col][col]
        a[col] = [x * inv for x in a[col]]
        for r in range(n):
            if r != col and a[r][col] != 0:
                f = a[r][col]
                a[r] = [x - f * y for x, y in zip(a[r], a[col])]
    return tuple(a[i][n] for i in range(n))
