"""Polynomials, Gröbner bases and ideal operations with ``p`` as a formal variable."""

from .groebner import Budget, BudgetExhausted, DEFAULT_BUDGET, Engine, MonomialOrder
from .ideal import (
    Ideal,
    colon,
    eliminate,
    exact_quotient,
    groebner_basis,
    ideal_contains,
    ideal_equal,
    intersect,
    normal_form,
    radical_contains,
    saturate,
    specialize,
)
from .poly import (
    ParseError,
    PolyMatrix,
    Polynomial,
    Ring,
    format_poly,
    jacobian,
    minors,
    parse_many,
    parse_poly,
    sort_names,
)
