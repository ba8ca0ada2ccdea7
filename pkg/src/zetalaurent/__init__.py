"""Multiprecision Stieltjes constants, eta coefficients, lambda-parameterized
zeta series and Li-criterion sums, with a registry of numerical identity checks."""

__version__ = "0.1.0"

from .mpcore import (
    ConvergenceError,
    DomainError,
    PrecisionContext,
    PrecisionError,
    UsageError,
    default_context,
    make_context,
)
from .stieltjes import eta, eta_table, gamma_eta_recursion, gamma_stieltjes, gamma_table
from .zeta_series import hurwitz_lambda, zeta_lambda, zeta_prime_lambda
from .li_sums import li_sum_table, s2, s_gamma, s_lambda
from .identities import list_identities, run_all, run_identity

__all__ = [
    "ConvergenceError", "DomainError", "PrecisionContext", "PrecisionError", "UsageError",
    "default_context", "make_context",
    "eta", "eta_table", "gamma_eta_recursion", "gamma_stieltjes", "gamma_table",
    "hurwitz_lambda", "zeta_lambda", "zeta_prime_lambda",
    "li_sum_table", "s2", "s_gamma", "s_lambda",
    "list_identities", "run_all", "run_identity",
]
