"""Arbitrary-precision reals, constants and tanh-sinh quadrature."""

from .core import (
    ArbReal,
    arcsin,
    arctan,
    const_pi,
    const_pi_check,
    context,
    cos,
    exp,
    guard_digits,
    ln,
    nth_root,
    pow_int,
    pow_rational,
    round_to,
    sin,
    sqrt,
    to_decimal,
    working_context,
)
from .constants import (
    alpha_decimal,
    beta_decimal,
    catalan_g_check,
    const_catalan_g,
    const_ln,
    const_zeta3,
    ln_alpha,
    ln_alpha_check,
    omega_decimal,
    sqrt5_decimal,
    zeta3_check,
)
from .quadrature import Integrand, clausen2, quad_tanh_sinh, tanh_sinh

__all__ = [
    "ArbReal",
    "alpha_decimal",
    "arcsin",
    "arctan",
    "beta_decimal",
    "catalan_g_check",
    "clausen2",
    "const_catalan_g",
    "const_ln",
    "const_pi",
    "const_pi_check",
    "const_zeta3",
    "context",
    "cos",
    "exp",
    "guard_digits",
    "Integrand",
    "ln",
    "ln_alpha",
    "ln_alpha_check",
    "nth_root",
    "omega_decimal",
    "pow_int",
    "pow_rational",
    "quad_tanh_sinh",
    "round_to",
    "sin",
    "sqrt",
    "sqrt5_decimal",
    "tanh_sinh",
    "to_decimal",
    "working_context",
    "zeta3_check",
]
