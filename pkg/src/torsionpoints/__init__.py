"""Exact computation of torsion points and torsion cosets on subvarieties of G_m^n."""

from .cosets import TorsionCoset, coset_contains_point, coset_equal, coset_in_variety
from .cyclotomic import (
    CyclotomicElement,
    Factorization,
    ModulusMismatchError,
    arithmetic,
    cyclotomic_polynomial,
    factorize,
    is_zero,
    root_power,
    totient,
)
from .laurent import (
    LaurentPolynomial,
    TorsionPoint,
    canonicalize,
    evaluate_at_torsion,
    is_identically_zero,
    specialize,
    substitute_monomial_map,
    vanishes_at,
)
from .normal_forms import hermite_normal_form, saturate_and_canonicalize, smith_normal_form
from .pigeonhole import (
    NotExactOrderError,
    ShortMultiple,
    TorsionDecomposition,
    decompose,
    short_multiple,
    unit_adjust,
    verify_decomposition,
)
from .solver import (
    TorsionReport,
    VarietySystem,
    brute_force_torsion,
    coset_certificate,
    order_bound,
    orbit_representatives,
    solve,
)

__version__ = "0.1.0"
