"""Exact enumeration kernel for positive definite integral quadratic data.

Everything here works with the *doubled* value convention: for a symmetric
integer matrix G the kernel handles

    P(y) = y G y^t + lin . y + const

over integer vectors y, either solving P(y) = target or listing all y with
P(y) <= target.  Callers encode Q(x) = x G x^t / 2 by doubling their
targets.  Bounds are computed with integer square roots only; no floats.

The per-coordinate ranges come from the real minimum of P over the
remaining coordinates, expressed through adjugates of leading principal
submatrices (Schur complement), so the search tree is exactly the solution
ellipsoid.
"""

import os
from math import isqrt
from typing import Iterator, Optional, Sequence, Tuple

from .matrixops import Matrix, adjugate, leading_minors, mat_vec

DEFAULT_BUDGET = 10**8


class BudgetExceeded(RuntimeError):
    """An enumeration exceeded its configured node budget."""


def enumeration_budget(default: int = DEFAULT_BUDGET) -> int:
    """Node ceiling for enumerations; QPOLY_BUDGET overrides the default."""
    env = os.environ.get("QPOLY_BUDGET")
    if env:
        try:
            return int(env)
        except ValueError:
            pass
    return default


def _quad_range(a: int, b: int, c: int) -> Optional[Tuple[int, int]]:
    # Integer solutions of a y^2 + b y + c <= 0 with a > 0, exact.
    disc = b * b - 4 * a * c
    if disc < 0:
        return None
    s = isqrt(disc)
    lo = -((b + s) // (2 * a))
    hi = (s - b) // (2 * a)
    if lo > hi:
        return None
    return lo, hi


def _solve_quadratic_eq(a: int, b: int, c: int) -> Tuple[int, ...]:
    # Integer roots of a y^2 + b y + c = 0 with a > 0.
    disc = b * b - 4 * a * c
    if disc < 0:
        return ()
    s = isqrt(disc)
    if s * s != disc:
        return ()
    roots = []
    for num in (-b - s, -b + s):
        if num % (2 * a) == 0:
            roots.append(num // (2 * a))
    return tuple(sorted(set(roots)))


class _Kernel:
    def __init__(self, gram: Matrix, stride, budget):
        n = len(gram)
        minors = leading_minors(gram)
        if any(d <= 0 for d in minors):
            raise ValueError("quadratic part is not positive definite")
        self.n = n
        self.gram = gram
        self.minors = [1] + minors  # minors[k] = det of leading k x k
        # Per level k (coordinate index k-1): adjugate of the (k-1) block,
        # the column w = G[:k-1, k-1], and the precomputed A w product.
        self.adj = [None] * (n + 1)
        self.aw = [None] * (n + 1)
        self.waw = [0] * (n + 1)
        for k in range(1, n + 1):
            block = tuple(row[: k - 1] for row in gram[: k - 1])
            a = adjugate(block)
            w = tuple(gram[i][k - 1] for i in range(k - 1))
            self.adj[k] = a
            self.aw[k] = mat_vec(a, w) if k > 1 else ()
            self.waw[k] = sum(wi * awi for wi, awi in zip(w, self.aw[k]))
        self.stride = stride
        self.budget = budget
        self.nodes = 0

    def _tick(self):
        self.nodes += 1
        if self.nodes > self.budget:
            raise BudgetExceeded(f"enumeration exceeded {self.budget} nodes")

    def run(self, lin, const, target, equality) -> Iterator[tuple]:
        yield from self._descend(self.n, list(lin), const, target, equality, [0] * self.n)

    def _descend(self, k, u, c0, target, equality, out):
        self._tick()
        g = self.gram
        dk1 = self.minors[k - 1]
        uk = u[k - 1]
        uprime = u[: k - 1]
        if k == 1:
            if equality:
                for y in _solve_quadratic_eq(g[0][0], uk, c0 - target):
                    if self.stride and (y - self.stride[1][0]) % self.stride[0]:
                        continue
                    out[0] = y
                    yield tuple(out)
            else:
                rng = _quad_range(g[0][0], uk, c0 - target)
                if rng:
                    for y in self._stride_values(0, *rng):
                        out[0] = y
                        value = g[0][0] * y * y + uk * y + c0
                        yield tuple(out), value
            return
        a_adj = self.adj[k]
        uau = sum(
            uprime[i] * sum(a_adj[i][j] * uprime[j] for j in range(k - 1))
            for i in range(k - 1)
        )
        awu = sum(x * y for x, y in zip(self.aw[k], uprime))
        a_coef = 4 * self.minors[k]
        b_coef = 4 * (dk1 * uk - awu)
        c_coef = 4 * dk1 * (c0 - target) - uau
        rng = _quad_range(a_coef, b_coef, c_coef)
        if rng is None:
            return
        for y in self._stride_values(k - 1, *rng):
            out[k - 1] = y
            unew = [u[i] + 2 * g[i][k - 1] * y for i in range(k - 1)]
            cnew = c0 + uk * y + g[k - 1][k - 1] * y * y
            yield from self._descend(k - 1, unew, cnew, target, equality, out)

    def _stride_values(self, idx, lo, hi):
        if not self.stride:
            return range(lo, hi + 1)
        d, residues = self.stride
        first = lo + (residues[idx] - lo) % d
        return range(first, hi + 1, d)


def solve_equal(
    gram: Matrix,
    lin: Sequence[int],
    const: int,
    target: int,
    stride=None,
    budget: Optional[int] = None,
) -> Iterator[tuple]:
    """All integer y with y G y^t + lin.y + const == target.

    ``stride=(d, residues)`` restricts to y_i == residues[i] (mod d).
    """
    kern = _Kernel(gram, stride, budget or enumeration_budget())
    return kern.run(lin, const, target, True)


def solve_below(
    gram: Matrix,
    lin: Sequence[int],
    const: int,
    bound: int,
    stride=None,
    budget: Optional[int] = None,
) -> Iterator[Tuple[tuple, int]]:
    """All integer y with y G y^t + lin.y + const <= bound, as (y, value)."""
    kern = _Kernel(gram, stride, budget or enumeration_budget())
    return kern.run(lin, const, bound, False)


def gram_value(gram: Matrix, y: Sequence[int]) -> int:
    """y G y^t (the doubled quadratic value)."""
    return sum(y[i] * gram[i][j] * y[j] for i in range(len(y)) for j in range(len(y)))
