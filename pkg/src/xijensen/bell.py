"""Partial ordinary Bell polynomials.

``bell_partial_ordinary(i, j, p)`` is the coefficient of x**i in
``(p[0] x + p[1] x**2 + ...)**j``.  It is evaluated with the multinomial
sum over partitions of i into exactly j parts, so it works for any element
type supporting ``+``, ``*``, ``**`` and multiplication by int (Fractions,
:class:`~xijensen.polynomial.Poly`, rational functions, sympy symbols).
"""

from __future__ import annotations

from functools import lru_cache
from math import factorial
from typing import Sequence

from .errors import InputError


@lru_cache(maxsize=None)
def partitions_with_parts(i: int, j: int, largest: int | None = None) -> tuple[tuple[tuple[int, int], ...], ...]:
    """Partitions of i into exactly j positive parts, as (part, multiplicity) pairs.

    Parts are listed in decreasing order and bounded by ``largest``.
    """
    if largest is None:
        largest = i
    if j == 0:
        return ((),) if i == 0 else ()
    if i < j:
        return ()
    out = []
    top = min(largest, i - (j - 1))
    for part in range(top, 0, -1):
        # at least one copy of `part`, the rest strictly smaller
        for mult in range(1, j + 1):
            rem_i, rem_j = i - part * mult, j - mult
            if rem_i < rem_j or rem_i < 0:
                break
            if rem_j == 0:
                if rem_i == 0:
                    out.append(((part, mult),))
                continue
            for tail in partitions_with_parts(rem_i, rem_j, part - 1):
                out.append(((part, mult),) + tail)
    return tuple(out)


@lru_cache(maxsize=None)
def bell_terms(i: int, j: int) -> tuple[tuple[int, tuple[tuple[int, int], ...]], ...]:
    """Multinomial coefficient j!/prod(l_k!) paired with each partition."""
    terms = []
    for parts in partitions_with_parts(i, j):
        coef = factorial(j)
        for _, mult in parts:
            coef //= factorial(mult)
        terms.append((coef, parts))
    return tuple(terms)


def bell_partial_ordinary(i: int, j: int, p: Sequence):
    """B-hat_{i,j}(p_1, p_2, ...) with ``p[0]`` playing p_1.

    Raises InputError when ``p`` has fewer than ``i - j + 1`` entries and the
    value actually depends on them.
    """
    if i < 0 or j < 0:
        raise InputError("Bell polynomial indices must be non-negative")
    if j == 0:
        delta = 1 if i == 0 else 0
        return p[0] * 0 + delta if len(p) else delta
    if i < j:
        return p[0] * 0 if len(p) else 0
    needed = i - j + 1
    if len(p) < needed:
        raise InputError(f"B_{{{i},{j}}} needs {needed} sequence entries, got {len(p)}")
    total = None
    powers: dict[tuple[int, int], object] = {}
    for coef, parts in bell_terms(i, j):
        term = None
        for part, mult in parts:
            key = (part, mult)
            if key not in powers:
                powers[key] = p[part - 1] ** mult
            term = powers[key] if term is None else term * powers[key]
        term = term * coef if coef != 1 else term
        total = term if total is None else total + term
    return total
