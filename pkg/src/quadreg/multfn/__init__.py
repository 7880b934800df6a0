"""Completely multiplicative functions: specs, primes, characters, bulk evaluation."""

from .bulk import (
    eval_exponents,
    eval_form_grid,
    eval_progression,
    eval_values,
    form_values,
    int_power,
    linear_factors,
)
from .characters import (
    DirichletCharacter,
    dirichlet_characters,
    legendre_symbol,
    root_of_unity,
)
from .functions import (
    Archimedean,
    Character,
    Conjugate,
    FinitePerturbation,
    Liouville,
    ModifiedCharacter,
    MultFn,
    One,
    Product,
    SparseFlip,
    eval,
    eval_range,
    modified_character,
)
from .primes import (
    PrimeTable,
    build_prime_table,
    default_table,
    factorize,
    factorize_many,
    primes_up_to,
    set_factor_cache_capacity,
)

__all__ = [
    "Archimedean", "Character", "Conjugate", "DirichletCharacter", "FinitePerturbation",
    "Liouville", "ModifiedCharacter", "MultFn", "One", "PrimeTable", "Product", "SparseFlip",
    "build_prime_table", "default_table", "dirichlet_characters", "eval", "eval_exponents",
    "eval_form_grid", "eval_progression", "eval_range", "eval_values", "factorize",
    "factorize_many", "form_values", "int_power", "legendre_symbol", "linear_factors",
    "modified_character", "primes_up_to", "root_of_unity", "set_factor_cache_capacity",
]
