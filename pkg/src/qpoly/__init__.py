"""Representation, universality and regularity tools for positive integral
quadratic polynomials, triangular forms and lattice cosets."""

from .enumeration import BudgetExceeded, enumeration_budget
from .lattice import (
    Coset,
    IntegralLattice,
    automorphisms,
    coset_is_integral,
    coset_isometric,
    coset_lattice,
    coset_lattice_index,
    coset_represents,
    isometric,
    isometries,
    shortest_vectors,
)
from .padic import (
    LocalVerdict,
    legendre,
    local_obstruction_primes,
    rejection_cutoff,
    represents_locally,
    represents_mod,
    represents_over_reals,
    triangular_locally_represents,
)
from .polynomial import (
    AffineTransform,
    Completion,
    QuadPoly,
    apply_transform,
    complete,
    evaluate,
    identity_transform,
    integer_minimum,
    is_integer_valued,
    represents as quadpoly_represents,
    triangular_polynomial,
)
from .reduction import equivalent, is_reduced, minkowski_reduce, reduce_gram
from .search import (
    SearchConfig,
    SearchReport,
    box_violations,
    coprime_count_bound,
    enumerate_regular_ternary,
    escalate_universal_ternary,
    find_unrepresented,
    minimum_box_bound,
)
from .triangular import (
    RegularityVerdict,
    RegularityWitness,
    TriangularForm,
    behaves_well,
    descend,
    is_regular_up_to,
    is_universal_up_to,
    represented_set,
    represents,
    theorem_of_eight,
    to_coset,
    truant,
)

__version__ = "0.1.0"
