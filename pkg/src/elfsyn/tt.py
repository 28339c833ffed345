"""Truth tables as plain ints: bit i holds the output under assignment i.

Variable j of assignment i is bit j of i, so tables over n variables are
2**n bits wide.  All helpers keep tables at full width; cofactors stay
functions of n variables that simply ignore the cofactored one.
"""

from __future__ import annotations

_var_cache: dict[tuple[int, int], int] = {}
_mask_cache: dict[int, int] = {}


def full_mask(n_vars: int) -> int:
    m = _mask_cache.get(n_vars)
    if m is None:
        m = (1 << (1 << n_vars)) - 1
        _mask_cache[n_vars] = m
    return m


def var_pattern(var: int, n_vars: int) -> int:
    """Table of the projection onto variable `var` (0101.., 0011.., ...)."""
    p = _var_cache.get((var, n_vars))
    if p is None:
        block = 1 << var
        unit = ((1 << block) - 1) << block
        width = 1 << n_vars
        p = unit * (((1 << width) - 1) // ((1 << (2 * block)) - 1))
        _var_cache[(var, n_vars)] = p
    return p


def cofactor0(t: int, var: int, n_vars: int) -> int:
    block = 1 << var
    lo = t & ~var_pattern(var, n_vars) & full_mask(n_vars)
    return lo | (lo << block)


def cofactor1(t: int, var: int, n_vars: int) -> int:
    block = 1 << var
    hi = t & var_pattern(var, n_vars)
    return hi | (hi >> block)


def depends_on(t: int, var: int, n_vars: int) -> bool:
    return cofactor0(t, var, n_vars) != cofactor1(t, var, n_vars)
