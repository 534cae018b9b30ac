"""Search harnesses: escalator enumeration of universal ternary triangular
forms, regularity sweeps over a discriminant range, the unrepresented-value
constructor for binary quadratic parts, and the coprime-progression count
bound.

Reports are deterministic: entries are sorted by discriminant then
coefficients, and wall-clock timing lives in a single summary field that
consumers are expected to ignore when comparing runs.
"""

import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import Dict, List, Optional, Sequence, Tuple

from .enumeration import solve_equal
from .matrixops import Matrix, det, freeze, is_positive_definite
from .padic import is_prime, legendre
from .polynomial import QuadPoly
from .triangular import (
    TriangularForm,
    descend,
    is_regular_up_to,
    is_universal_up_to,
    represents,
    theorem_of_eight,
    truant,
)

EIGHT_TARGETS = (1, 2, 4, 5, 8)
BOX_LIMITS = (30, 21, 8)


@dataclass(frozen=True)
class SearchConfig:
    coeff_bound: int = 30
    disc_bound: int = 100
    verify_n: int = 5000
    budget: Optional[int] = None
    jobs: int = 1
    use_eight: bool = True  # --no-toe switches universality to the sieve
    cross_validate_n: Optional[int] = None

    def __post_init__(self):
        if min(self.coeff_bound, self.disc_bound, self.jobs) < 1:
            raise ValueError("bounds and job count must be positive")
        if self.verify_n < 8:
            raise ValueError("verify_n must cover the Theorem-of-Eight targets")


@dataclass
class SearchReport:
    kind: str
    config: Dict
    entries: List[Dict]
    exhaustive: Dict
    summary: Dict = field(default_factory=dict)
    timing_s: float = 0.0

    def candidates(self) -> List[Dict]:
        return [e for e in self.entries if e.get("accepted")]


def _sorted_entries(entries: List[Dict]) -> List[Dict]:
    return sorted(entries, key=lambda e: (e["disc"], e["coeffs"]))


def _universality(d: TriangularForm, cfg: SearchConfig) -> Tuple[bool, Optional[int]]:
    if cfg.use_eight:
        for m in EIGHT_TARGETS:
            if represents(d, m) is None:
                return False, m
        return True, None
    ok = is_universal_up_to(d, cfg.verify_n)
    return ok, None if ok else truant(d)


def escalate_universal_ternary(cfg: SearchConfig = SearchConfig()) -> SearchReport:
    """Escalator search for universal ternary triangular forms.

    Representing 1 forces the least coefficient to be 1, and each further
    coefficient is bounded by the truant of the current prefix: anything
    larger leaves that truant unrepresented forever.  The recorded levels
    make the pruning exhaustive over all primitive ternary forms.
    """
    start = time.monotonic()
    levels = [{"prefix": [], "range": [1, 1], "reason": "must represent 1"}]
    entries: List[Dict] = []
    t1 = truant(TriangularForm((1,)))
    hi2 = min(t1, cfg.coeff_bound)
    levels.append({"prefix": [1], "truant": t1, "range": [1, hi2]})
    exhaustive = t1 <= cfg.coeff_bound
    for a2 in range(1, hi2 + 1):
        prefix = TriangularForm((1, a2))
        t2 = truant(prefix)
        hi3 = min(t2, cfg.coeff_bound)
        exhaustive = exhaustive and t2 <= cfg.coeff_bound
        levels.append({"prefix": [1, a2], "truant": t2, "range": [a2, hi3]})
        for a3 in range(a2, hi3 + 1):
            d = TriangularForm((1, a2, a3))
            ok, fails_at = _universality(d, cfg)
            entry = {
                "coeffs": list(d.coeffs),
                "disc": d.disc,
                "accepted": ok,
                "universal": ok,
            }
            if not ok:
                entry["fails_at"] = fails_at
            elif cfg.cross_validate_n:
                if not is_universal_up_to(d, cfg.cross_validate_n):
                    raise AssertionError(
                        f"eight-criterion and sieve disagree on {d.coeffs}"
                    )
                entry["verified_up_to"] = cfg.cross_validate_n
            entries.append(entry)
    entries = _sorted_entries(entries)
    found = sum(1 for e in entries if e["accepted"])
    return SearchReport(
        kind="universal",
        config={"coeff_bound": cfg.coeff_bound, "use_eight": cfg.use_eight},
        entries=entries,
        exhaustive={"levels": levels, "covers_all_ternary": exhaustive},
        summary={"examined": len(entries), "universal": found},
        timing_s=time.monotonic() - start,
    )


def _primitive_triples(disc_bound: int):
    for a1 in range(1, disc_bound + 1):
        for a2 in range(a1, disc_bound // a1 + 1):
            for a3 in range(a2, disc_bound // (a1 * a2) + 1):
                if gcd(a1, a2, a3) == 1:
                    yield (a1, a2, a3)


def _descent_primes(coeffs: Sequence[int]):
    shared = set()
    for i in range(3):
        for j in range(i + 1, 3):
            g = gcd(coeffs[i], coeffs[j])
            shared |= {p for p in _odd_primes_of(g)}
    return sorted(shared)


def _odd_primes_of(n: int):
    out = []
    while n and n % 2 == 0:
        n //= 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            out.append(f)
            while n % f == 0:
                n //= f
        f += 2
    if n > 2:
        out.append(n)
    return out


def _classify_triple(args) -> Dict:
    coeffs, verify_n = args
    d = TriangularForm(coeffs)
    verdict = is_regular_up_to(d, verify_n)
    entry = {
        "coeffs": list(d.coeffs),
        "disc": d.disc,
        "status": verdict.status,
        "verify_n": verify_n,
        "accepted": verdict.status == "regular_up_to_N",
    }
    if verdict.witness is not None:
        entry["counterexample_m"] = verdict.witness.m
    if entry["accepted"]:
        descents = []
        for q in _descent_primes(d.coeffs):
            try:
                down = descend(d, q)
            except ValueError:
                continue
            sub = is_regular_up_to(down, verify_n)
            descents.append(
                {
                    "q": q,
                    "descended": list(down.coeffs),
                    "status": sub.status,
                    "counterexample_m": sub.witness.m if sub.witness else None,
                }
            )
        if descents:
            entry["descents"] = descents
    return entry


def enumerate_regular_ternary(cfg: SearchConfig = SearchConfig()) -> SearchReport:
    """Classify every primitive ternary triangular form with discriminant
    at most disc_bound by a regularity sweep up to verify_n.

    Survivors are certified 'regular up to N' only.  For each survivor of
    descent shape, the descended form is swept at the same bound.
    """
    start = time.monotonic()
    triples = list(_primitive_triples(cfg.disc_bound))
    work = [(t, cfg.verify_n) for t in triples]
    if cfg.jobs > 1:
        with ProcessPoolExecutor(max_workers=cfg.jobs) as pool:
            entries = list(pool.map(_classify_triple, work, chunksize=8))
    else:
        entries = [_classify_triple(w) for w in work]
    entries = _sorted_entries(entries)
    survivors = [e for e in entries if e["accepted"]]
    return SearchReport(
        kind="regular",
        config={"disc_bound": cfg.disc_bound, "verify_n": cfg.verify_n},
        entries=entries,
        exhaustive={
            "triples_swept": len(triples),
            "disc_range": [1, cfg.disc_bound],
            "sweep_bound": cfg.verify_n,
        },
        summary={
            "examined": len(entries),
            "survivors": len(survivors),
            "counterexamples": len(entries) - len(survivors),
        },
        timing_s=time.monotonic() - start,
    )


def _q_value_mod(gram2: Matrix, w: Sequence[Fraction], modulus: int) -> int:
    # q(w) = w gram2 w^t / 2 reduced mod modulus (denominators invertible).
    num = sum(
        Fraction(w[i]) * gram2[i][j] * Fraction(w[j])
        for i in range(2)
        for j in range(2)
    ) / 2
    return num.numerator * pow(num.denominator, -1, modulus) % modulus


def find_unrepresented(
    gram2: Matrix, polys: Sequence[Tuple[Sequence, int]], k: int = 0
) -> int:
    """Smallest N >= max(k, 1) not represented by any f_i = q + 2b(w_i, .) + c_i.

    Follows the constructive recipe: odd primes p_1 < ... < p_t with -d a
    nonresidue, N = p_i + c_i - q(w_i) mod p_i^2 by CRT; the result is
    re-verified by exact enumeration before being returned.
    """
    gram2 = freeze(gram2)
    if len(gram2) != 2 or not is_positive_definite(gram2):
        raise ValueError("q must be a positive definite binary quadratic part")
    if not 1 <= len(polys) <= 8:
        raise ValueError("between 1 and 8 offset polynomials are supported")
    if k < 0:
        raise ValueError("k must be nonnegative")
    shifts = [tuple(Fraction(x) for x in w) for w, _ in polys]
    consts = [c for _, c in polys]
    d2 = det(gram2)  # 4 * disc(q); Legendre-equivalent to disc for odd p
    primes: List[int] = []
    p = 3
    while len(primes) < len(polys):
        if is_prime(p) and legendre(-d2 % p, p) == -1:
            primes.append(p)
        p += 2
    residues = []
    for (w, c), pi in zip(polys, primes):
        w = tuple(Fraction(x) for x in w)
        if any(wi.denominator % pi == 0 for wi in w):
            raise ValueError(f"offset vector {w} is not {pi}-integral")
        qw = _q_value_mod(gram2, w, pi * pi)
        residues.append((pi + c - qw) % (pi * pi))
    modulus = 1
    residue = 0
    for pi, r in zip(primes, residues):
        m2 = pi * pi
        # CRT combine residue mod modulus with r mod m2
        inc = (r - residue) * pow(modulus, -1, m2) % m2
        residue += modulus * inc
        modulus *= m2
    base = max(k, 1)
    n_value = base + (residue - base) % modulus
    for w, c in zip(shifts, consts):
        if _binary_represents(gram2, w, c, n_value):
            raise RuntimeError(
                "constructed value failed its enumeration check; input malformed"
            )
    return n_value


def _binary_represents(gram2: Matrix, w, c: int, target: int) -> bool:
    # f(x) = q(x + w) + c - q(w) + q(w)... directly: q(x + w) = target - c + q(w)
    den = 1
    for wi in w:
        den = den * wi.denominator // gcd(den, wi.denominator)
    qw2 = sum(
        Fraction(w[i]) * gram2[i][j] * Fraction(w[j]) for i in range(2) for j in range(2)
    )
    rhs = den * den * (2 * (target - c) + qw2)
    if rhs.denominator != 1:
        return False
    sigma = tuple(int(wi * den) for wi in w)
    stride = (den, tuple(s % den for s in sigma)) if den > 1 else None
    for _ in solve_equal(gram2, (0, 0), 0, int(rhs), stride=stride):
        return True
    return False


def coprime_count_bound(
    primes_set: Sequence[int], a: int, d: int, n: int
) -> Tuple[int, Fraction]:
    """Count of {d, a+d, ..., (n-1)a+d} coprime to every prime in the set,
    paired with the guaranteed lower bound
    n (p~ - 1) / (p~ + t - 1) - 2^t + 1."""
    ts = sorted(set(primes_set))
    for p in ts:
        if not is_prime(p):
            raise ValueError(f"{p} is not prime")
        if gcd(a, p) != 1:
            raise ValueError(f"step {a} is divisible by {p}")
    count = 0
    for j in range(n):
        value = j * a + d
        if all(value % p for p in ts):
            count += 1
    t = len(ts)
    if t == 0:
        bound = Fraction(n)
    else:
        p_min = ts[0]
        bound = Fraction(n * (p_min - 1), p_min + t - 1) - 2**t + 1
    return count, bound


def minimum_box_bound(f: QuadPoly) -> Fraction:
    """gamma(f) = min(3/2 mu3, 7/2 mu2, 31 mu1) for a reduced ternary f."""
    g = f.gram2
    return min(
        Fraction(3 * g[2][2], 4), Fraction(7 * g[1][1], 4), Fraction(31 * g[0][0], 2)
    )


def box_violations(f: QuadPoly) -> List[tuple]:
    """Integer points outside |x1|<=30, |x2|<=21, |x3|<=8 where a reduced
    minimum-0 ternary f dips below gamma(f).  Exact; expected empty."""
    from .enumeration import solve_below

    gamma2 = 2 * minimum_box_bound(f)
    # strict f < gamma: doubled value <= ceil(2 gamma) - 1
    bound = -((-gamma2.numerator) // gamma2.denominator) - 1
    out = []
    for vec, val2 in solve_below(f.gram2, f.lin2, 2 * f.c, bound):
        if val2 < gamma2 and any(
            abs(x) > lim for x, lim in zip(vec, BOX_LIMITS)
        ):
            out.append(vec)
    return sorted(out)
