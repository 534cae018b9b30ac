"""p-adic solubility deciders for quadratic polynomials and triangular forms.

The general decider runs an iterative-deepening search over residue
solutions mod p^e and accepts through a Newton-lift certificate; rejection
happens as soon as some level has no residue solutions at all (sound at
any depth).  Triangular forms get closed-form fast paths for p = 2 and for
odd primes with unit coefficients.
"""

import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import isqrt
from typing import Dict, Iterator, Optional, Sequence, Set, Tuple

from .enumeration import BudgetExceeded, enumeration_budget
from .matrixops import dot, det, mat_vec
from .polynomial import QuadPoly, complete, evaluate, is_integer_valued

METHOD_2ADIC = "closed_form_2adic"
METHOD_ODD_UNIT = "closed_form_odd_unit"
METHOD_HENSEL = "hensel_lift"
METHOD_EXHAUSTED = "exhausted"

MOD_ENUM_BUDGET = 10**8


@dataclass(frozen=True)
class LocalVerdict:
    """Outcome of a solubility test over the p-adic integers.

    ``witness`` is (residue vector, modulus, kind); kind 'exact' marks a
    genuine integer solution (modulus None), 'newton' a residue certified
    by the lifting criterion, 'singular' a residue at the completed-square
    center (where the gradient vanishes).
    """

    p: int
    soluble: bool
    witness: Optional[Tuple[tuple, Optional[int], str]]
    method: str


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def primes() -> Iterator[int]:
    yield 2
    n = 3
    while True:
        if is_prime(n):
            yield n
        n += 2


def odd_prime_factors(n: int) -> Set[int]:
    n = abs(n)
    out = set()
    while n % 2 == 0:
        n //= 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            out.add(f)
            while n % f == 0:
                n //= f
        f += 2
    if n > 1:
        out.add(n)
    return out


def legendre(a: int, p: int) -> int:
    """Legendre symbol (a|p) for an odd prime p."""
    if p == 2 or not is_prime(p):
        raise ValueError(f"{p} is not an odd prime")
    a %= p
    if a == 0:
        return 0
    r = pow(a, (p - 1) // 2, p)
    return 1 if r == 1 else -1


def _vp(x: int, p: int) -> Optional[int]:
    # p-adic valuation; None stands for +infinity.
    if x == 0:
        return None
    v = 0
    while x % p == 0:
        x //= p
        v += 1
    return v


def sqrt_mod_prime_power(a: int, p: int, e: int) -> Optional[int]:
    """A square root of a modulo p^e for a a unit mod p (None if not a square)."""
    if p == 2:
        a %= 1 << e
        if e == 1:
            return a % 2 if a % 2 == 1 else None
        if e == 2:
            return 1 if a % 4 == 1 else None
        if a % 8 != 1:
            return None
        x = 1
        for k in range(3, e):
            if (x * x - a) % (1 << (k + 1)):
                x += 1 << (k - 1)
        return x % (1 << e)
    if legendre(a, p) != 1:
        return None
    x = _tonelli(a % p, p)
    pk = p
    while pk < p**e:
        # Hensel step: x <- x - (x^2 - a) / (2x) mod pk*p
        pk *= p
        inv = pow(2 * x, -1, pk)
        x = (x - (x * x - a) * inv) % pk
    return x % p**e


def _tonelli(a: int, p: int) -> int:
    # Square root mod odd prime p for a quadratic residue a.
    if p % 4 == 3:
        return pow(a, (p + 1) // 4, p)
    q, s = p - 1, 0
    while q % 2 == 0:
        q //= 2
        s += 1
    z = next(n for n in range(2, p) if legendre(n, p) == -1)
    c = pow(z, q, p)
    r = pow(a, (q + 1) // 2, p)
    t = pow(a, q, p)
    m = s
    while t != 1:
        i = 1
        x = t * t % p
        while x != 1:
            x = x * x % p
            i += 1
        b = pow(c, 1 << (m - i - 1), p)
        r = r * b % p
        c = b * b % p
        t = t * c % p
        m = i
    return r


def _doubled_value(f: QuadPoly, x: Sequence[int]) -> int:
    g = f.gram2
    total = 2 * f.c + dot(f.lin2, x)
    for i in range(f.n):
        total += x[i] * dot(g[i], x)
    return total


def represents_mod(
    f: QuadPoly, a: int, p: int, e: int, budget: Optional[int] = None
) -> Optional[tuple]:
    """Brute-force residue witness: x0 mod p^e with f(x0) = a (mod p^e).

    This is the oracle layer; it scans every residue vector, so the budget
    p^(e*n) is enforced up front.
    """
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    limit = budget or enumeration_budget(MOD_ENUM_BUDGET)
    if p ** (e * f.n) > limit:
        raise BudgetExceeded(f"residue enumeration p^(e*n) = {p**(e*f.n)} exceeds {limit}")
    pe = p**e
    if p == 2:
        if not is_integer_valued(f):
            raise ValueError("mod-2^e search requires an integer-valued polynomial")
        modulus, target = pe * 2, 2 * a
    else:
        modulus, target = pe, (2 * a) % pe
    for x in itertools.product(range(pe), repeat=f.n):
        if (_doubled_value(f, x) - target) % modulus == 0:
            return x
    return None


def rejection_cutoff(f: QuadPoly, a: int, p: int) -> int:
    """Deepening level past which an empty residue set is never checked
    again: v_p(det G) + v_p(a - c) + 2 v_p(2) + 3."""
    vdet = _vp(det(f.gram2), p) or 0
    vac = _vp(a - f.c, p)
    vac = 0 if vac is None else vac
    return vdet + vac + (2 if p == 2 else 0) + 3


def _newton_certified(f: QuadPoly, x: tuple, a: int, p: int) -> bool:
    diff = evaluate(f, x) - a
    if diff == 0:
        return True
    vgamma = _vp(int(diff), p)
    grad2 = [2 * g + l for g, l in zip(mat_vec(f.gram2, x), f.lin2)]
    for i, d2 in enumerate(grad2):
        vd = _vp(d2, p)
        if vd is None:
            continue
        vbeta = vd - (1 if p == 2 else 0)
        need = 2 * vbeta + 1
        if p == 2 and f.gram2[i][i] % 2:
            # half-integral leading coefficient: one extra order for soundness
            need += 1
        if vgamma >= need:
            return True
    return False


def represents_locally(
    f: QuadPoly,
    a: int,
    p: int,
    max_exp: Optional[int] = None,
    budget: Optional[int] = None,
) -> LocalVerdict:
    """Decide solubility of f(x) = a over the p-adic integers.

    Iterative deepening over residue solutions mod p^e.  Accepts on an
    exact integer solution or a Newton-certified residue; rejects as soon
    as some level carries no residue solutions at all.
    """
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    if not is_integer_valued(f):
        raise ValueError("local solubility requires an integer-valued polynomial")
    comp = complete(f)
    if comp.m_f == a and all(v.denominator % p for v in comp.v):
        # The completed-square center is the unique singular zero of the
        # gradient; when it is p-integral it solves f = a directly.
        if all(v.denominator == 1 for v in comp.v):
            vec = tuple(int(-v) for v in comp.v)
            return LocalVerdict(p, True, (vec, None, "exact"), METHOD_HENSEL)
        center = tuple(
            (-v.numerator * pow(v.denominator, -1, p**3)) % p**3 for v in comp.v
        )
        return LocalVerdict(p, True, (center, p**3, "singular"), METHOD_HENSEL)

    limit = budget or enumeration_budget()
    hard_cap = max_exp if max_exp is not None else None
    n = f.n
    nodes = 0
    level = 0
    sols = [()]  # solutions mod p^0
    deltas = list(itertools.product(range(p), repeat=n))
    while True:
        level += 1
        pe = p**level
        modulus = 2 * pe if p == 2 else pe
        target = 2 * a
        new_sols = []
        base = p ** (level - 1)
        for old in sols:
            for delta in deltas:
                nodes += 1
                if nodes > limit:
                    raise BudgetExceeded(
                        f"local decision for p={p} exceeded {limit} residue nodes"
                    )
                cand = (
                    tuple(o + base * d for o, d in zip(old, delta))
                    if old
                    else delta
                )
                if (_doubled_value(f, cand) - target) % modulus:
                    continue
                if evaluate(f, cand) == a:
                    return LocalVerdict(p, True, (cand, None, "exact"), METHOD_HENSEL)
                if _newton_certified(f, cand, a, p):
                    return LocalVerdict(p, True, (cand, pe, "newton"), METHOD_HENSEL)
                new_sols.append(cand)
        if not new_sols:
            # No residue solutions at this level, hence none mod any higher
            # power: insoluble.  This fires no later than the valuation
            # cutoff (see rejection_cutoff) on every insoluble input.
            return LocalVerdict(p, False, None, METHOD_EXHAUSTED)
        if hard_cap is not None and level >= hard_cap:
            raise BudgetExceeded(
                f"undecided for p={p} at the requested exponent cap {hard_cap}"
            )
        sols = new_sols


def represents_over_reals(f: QuadPoly, a: int) -> bool:
    """Real solubility: positive definite f takes the value a iff a >= m_f."""
    return a >= complete(f).m_f


def odd_square_model(coeffs: Sequence[int]) -> QuadPoly:
    """The polynomial sum of a_i (2 x_i + 1)^2 as a QuadPoly."""
    coeffs = tuple(coeffs)
    n = len(coeffs)
    g2 = tuple(
        tuple(8 * coeffs[i] if i == j else 0 for j in range(n)) for i in range(n)
    )
    return QuadPoly(gram2=g2, lin2=tuple(8 * c for c in coeffs), c=sum(coeffs))


def _tri_coeffs(d) -> Tuple[int, ...]:
    return tuple(getattr(d, "coeffs", d))


def _witness_2adic(coeffs: Sequence[int], m: int, exp: int = 9) -> Tuple[tuple, int, str]:
    # Constructive: along the first odd coefficient, (2x+1)^2 must equal
    # 1 + 8 m / a_i, a 2-adic square since it is 1 mod 8.
    i = next(k for k, c in enumerate(coeffs) if c % 2)
    mod = 1 << exp
    t = (1 + 8 * m * pow(coeffs[i], -1, mod)) % mod
    u = sqrt_mod_prime_power(t, 2, exp)
    x = [0] * len(coeffs)
    x[i] = (u - 1) // 2
    return tuple(x), mod, "newton"


def triangular_locally_represents(
    d, m: int, p: int, witness: bool = False
) -> LocalVerdict:
    """Solubility of a triangular form value m over Z_p with closed-form
    fast paths; falls back to the general decider on the odd-square model.

    Verdicts from fast paths never consult the fallback; a witness is
    attached only on request so the two routes stay independent.
    """
    coeffs = _tri_coeffs(d)
    if m < 0:
        raise ValueError("target must be nonnegative")
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    n = len(coeffs)
    s = sum(coeffs)
    if p == 2:
        wit = _witness_2adic(coeffs, m) if witness else None
        return LocalVerdict(2, True, wit, METHOD_2ADIC)
    units = [c % p != 0 for c in coeffs]
    target = 8 * m + s
    if all(units) and n >= 3:
        wit = _model_witness(coeffs, m, p) if witness else None
        return LocalVerdict(p, True, wit, METHOD_ODD_UNIT)
    if all(units) and n == 2:
        if target % p != 0 or s % p == 0:
            wit = _model_witness(coeffs, m, p) if witness else None
            return LocalVerdict(p, True, wit, METHOD_ODD_UNIT)
    return represents_locally(odd_square_model(coeffs), target, p)


def _model_witness(coeffs, m, p):
    verdict = represents_locally(odd_square_model(coeffs), 8 * m + sum(coeffs), p)
    return verdict.witness


def local_obstruction_primes(d) -> Tuple[int, ...]:
    """Primes dividing 2 d(Delta); outside this set, ternary and longer
    primitive forms are locally universal."""
    coeffs = _tri_coeffs(d)
    prod = 1
    for c in coeffs:
        prod *= c
    return tuple(sorted({2} | odd_prime_factors(prod)))
