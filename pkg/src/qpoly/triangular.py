"""Triangular forms: exact representation, universality, regularity sweeps,
descent at odd primes, and the correspondence with lattice cosets.

A triangular form with coefficients (a_1, ..., a_n) takes the value
sum a_i x_i (x_i + 1) / 2; it represents m exactly when the odd-square
equation sum a_i (2 x_i + 1)^2 = 8 m + sum a_i has an integer solution.
"""

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, isqrt
from typing import Dict, Optional, Sequence, Tuple

from .enumeration import BudgetExceeded, enumeration_budget
from .lattice import Coset, IntegralLattice
from .padic import (
    LocalVerdict,
    is_prime,
    local_obstruction_primes,
    odd_prime_factors,
    triangular_locally_represents,
)

SIEVE_BUDGET = 10**7


@dataclass(frozen=True)
class TriangularForm:
    """Coefficient vector of a triangular form, stored sorted ascending."""

    coeffs: Tuple[int, ...]

    def __post_init__(self):
        cs = tuple(sorted(self.coeffs))
        if not cs or any(not isinstance(c, int) or c < 1 for c in cs):
            raise ValueError("coefficients must be positive integers")
        object.__setattr__(self, "coeffs", cs)

    @property
    def n(self) -> int:
        return len(self.coeffs)

    @property
    def is_primitive(self) -> bool:
        return gcd(*self.coeffs) == 1

    @property
    def disc(self) -> int:
        prod = 1
        for c in self.coeffs:
            prod *= c
        return prod

    @property
    def successive_minima(self) -> Tuple[int, ...]:
        return self.coeffs


@dataclass(frozen=True)
class RegularityWitness:
    """Counterexample record: m is locally soluble everywhere but globally
    unrepresented (exact finite search up to the stated odd-vector bound)."""

    m: int
    local: Dict[int, LocalVerdict]
    search_bound: int


@dataclass(frozen=True)
class RegularityVerdict:
    status: str  # 'regular_up_to_N' or 'counterexample'
    bound: int
    witness: Optional[RegularityWitness]


def _odd_square_target(d: TriangularForm, m: int) -> int:
    return 8 * m + sum(d.coeffs)


def represents(d: TriangularForm, m: int) -> Optional[Tuple[int, ...]]:
    """A nonnegative witness vector with sum a_i T(x_i) = m, or None.

    Finite search: each odd square a_i (2x_i + 1)^2 is bounded by
    8m + sum a_i, and the last coordinate is solved directly.
    """
    if m < 0:
        raise ValueError("target must be nonnegative")
    coeffs = d.coeffs
    n = len(coeffs)
    target = _odd_square_target(d, m)
    xs = [0] * n

    def descend(idx: int, rem: int) -> bool:
        # idx runs from the largest coefficient down; rem is what the
        # first idx+1 odd squares must still sum to.
        a = coeffs[idx]
        if idx == 0:
            if rem % a:
                return False
            q = rem // a
            r = isqrt(q)
            if r * r != q or r % 2 == 0:
                return False
            xs[0] = (r - 1) // 2
            return True
        y = 1
        while a * y * y <= rem:
            xs[idx] = (y - 1) // 2
            if descend(idx - 1, rem - a * y * y):
                return True
            y += 2
        return False

    if descend(n - 1, target):
        return tuple(xs)
    return None


def represented_set(d: TriangularForm, bound: int, budget: Optional[int] = None) -> int:
    """Bitmask of the represented integers in [0, bound] (bit m set iff
    m is represented); dynamic programming over the coordinates."""
    limit = budget or enumeration_budget(SIEVE_BUDGET)
    if bound > limit:
        raise BudgetExceeded(f"sieve bound {bound} exceeds budget {limit}")
    full = (1 << (bound + 1)) - 1
    mask = 1
    for a in d.coeffs:
        shifted = 0
        x = 0
        while a * x * (x + 1) // 2 <= bound:
            shifted |= mask << (a * x * (x + 1) // 2)
            x += 1
        mask = shifted & full
    return mask


def truant(d: TriangularForm, cap: int = 1 << 16) -> Optional[int]:
    """Smallest nonnegative integer not represented, or None when every
    value up to cap is covered."""
    bound = 64
    while True:
        mask = represented_set(d, bound)
        full = (1 << (bound + 1)) - 1
        if mask != full:
            gap = mask ^ full
            return (gap & -gap).bit_length() - 1
        if bound >= cap:
            return None
        bound *= 4


def theorem_of_eight(d: TriangularForm) -> bool:
    """Universality via the Bosma-Kane criterion: a triangular form is
    universal iff it represents 1, 2, 4, 5 and 8."""
    return all(represents(d, m) is not None for m in (1, 2, 4, 5, 8))


def is_universal_up_to(d: TriangularForm, bound: int) -> bool:
    """Exact sieve check that every m in [0, bound] is represented."""
    return represented_set(d, bound) == (1 << (bound + 1)) - 1


def _local_primes_for(d: TriangularForm, m: int) -> Tuple[int, ...]:
    base = local_obstruction_primes(d)
    if d.n >= 3:
        return base
    # Below three variables the units-only closed form does not make the
    # remaining primes automatic; primes dividing 8m + sum may obstruct.
    extra = odd_prime_factors(_odd_square_target(d, m))
    return tuple(sorted(set(base) | extra))


def is_locally_represented(d: TriangularForm, m: int) -> bool:
    return all(
        triangular_locally_represents(d, m, p).soluble
        for p in _local_primes_for(d, m)
    )


def is_regular_up_to(d: TriangularForm, bound: int) -> RegularityVerdict:
    """Sweep m <= bound: every locally represented m must be represented.

    Returns the first failure as a counterexample witness; a clean sweep is
    the certificate 'regular up to bound', never a proof of regularity.
    """
    if not d.is_primitive:
        raise ValueError("regularity sweeps require a primitive form")
    mask = represented_set(d, bound)
    for m in range(bound + 1):
        if (mask >> m) & 1:
            continue
        if not is_locally_represented(d, m):
            continue
        # Candidate counterexample; confirm with the independent search.
        if represents(d, m) is not None:
            raise AssertionError("sieve and direct search disagree")
        local = {
            p: triangular_locally_represents(d, m, p, witness=True)
            for p in _local_primes_for(d, m)
        }
        return RegularityVerdict(
            status="counterexample",
            bound=bound,
            witness=RegularityWitness(
                m=m, local=local, search_bound=_odd_square_target(d, m)
            ),
        )
    return RegularityVerdict(status="regular_up_to_N", bound=bound, witness=None)


def descend(d: TriangularForm, q: int) -> TriangularForm:
    """Descent at an odd prime q for forms of shape (a, q^r b, q^s c) with
    q coprime to a, b, c and 1 <= r <= s: divide the two q-parts by
    q^min(2, r) and multiply the coprime slot by q^(2 - min(2, r))."""
    if q == 2 or not is_prime(q):
        raise ValueError(f"{q} must be an odd prime")
    if d.n != 3:
        raise ValueError("descent applies to ternary forms")
    vals = []
    for c in d.coeffs:
        v = 0
        while c % q == 0:
            c //= q
            v += 1
        vals.append(v)
    zero_slots = [i for i, v in enumerate(vals) if v == 0]
    if len(zero_slots) != 1:
        raise ValueError(
            f"form does not have the (a, q^r b, q^s c) shape at q={q}"
        )
    r = min(v for v in vals if v > 0)
    delta = min(2, r)
    new = []
    for coeff, v in zip(d.coeffs, vals):
        if v == 0:
            new.append(coeff * q ** (2 - delta))
        else:
            new.append(coeff // q**delta)
    return TriangularForm(tuple(new))


def behaves_well(d: TriangularForm, p: int) -> bool:
    """True iff the odd prime p divides at most one coefficient (the
    unimodular Jordan component has rank at least two)."""
    if p == 2 or not is_prime(p):
        raise ValueError(f"{p} must be an odd prime")
    if d.n != 3:
        raise ValueError("behaves_well applies to ternary forms")
    return sum(1 for c in d.coeffs if c % p == 0) <= 1


def to_coset(d: TriangularForm) -> Coset:
    """Coset model: diagonal lattice <4a_1, ..., 4a_n> shifted by the
    half-sum of the basis; d represents m iff the coset represents
    8m + sum a_i."""
    lat = IntegralLattice.diagonal(tuple(4 * c for c in d.coeffs))
    return Coset(lattice=lat, shift=tuple(Fraction(1, 2) for _ in d.coeffs))
