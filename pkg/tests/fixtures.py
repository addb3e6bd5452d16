"""Curated inputs shared by several test modules."""

from fractions import Fraction

import random

from symchab.core import ValuedSeries, antiderivative

F = Fraction


def S(coeffs, p=2):
    return ValuedSeries.from_coeffs(p, coeffs)


LINE = S({(0, 0): 2, (1, 0): 1, (0, 1): 1})

# Series for membership checks: the tropical line first, then a mix of
# dimensions, primes and negative valuations.
CURATED = [
    LINE,
    S({(0, 0): 1, (1, 0): 2, (0, 1): 4, (1, 1): 1}),
    S({(0, 0): 8, (2, 0): 1, (0, 2): 1, (1, 1): 2}),
    S({(0, 0): 1, (3, 0): F(1, 8), (0, 3): F(1, 8)}),
    S({(0, 0): 3, (1, 0): 3, (0, 1): 3}, p=3),
    S({(1, 0): 1, (0, 1): 1, (2, 2): F(1, 16)}),
    S({(0, 0): 16, (1, 0): 4, (2, 0): 1, (0, 1): 2, (1, 1): 1}),
    S({(0,): 4, (1,): 2, (3,): 1}),
    S({(0, 0, 0): 2, (1, 0, 0): 1, (0, 1, 0): 1, (0, 0, 1): 1}),
    S({(0, 0, 0): 4, (2, 0, 0): 1, (0, 1, 0): 2, (0, 0, 1): F(1, 2), (1, 1, 1): 1}),
]


# Systems whose torus roots all have positive valuations and whose tropical
# intersections are transverse.  Found by a fixed-seed search and frozen.
CURATED_SYSTEMS = [
    ({(0, 0): 2, (0, 2): 3, (1, 0): 160}, {(0, 0): 32, (0, 3): 20, (1, 0): -32, (2, 0): -8}),
    ({(0, 0): -64, (1, 0): 8, (3, 0): 12}, {(0, 0): -32, (0, 3): -2, (1, 0): 40, (2, 0): 4}),
    ({(0, 0): 32, (0, 3): 10, (2, 1): -4}, {(0, 0): 16, (0, 1): 48, (2, 1): 64, (3, 0): 40}),
    ({(0, 0): 96, (0, 1): 20, (0, 2): 6, (2, 1): 5}, {(0, 0): -4, (0, 3): -2, (3, 0): -1}),
    ({(0, 0): 96, (0, 1): 96, (2, 1): 2}, {(0, 0): 160, (0, 2): -16, (1, 1): 32, (2, 1): 64}),
    ({(0, 0): -4, (0, 1): 32, (1, 0): 48, (2, 0): 3}, {(0, 0): 320, (0, 2): 6, (1, 0): 80, (3, 0): 64}),
    ({(0, 0): -16, (2, 0): 96, (2, 1): -2}, {(0, 0): 192, (0, 3): -8, (3, 0): 10}),
    ({(0, 0): 96, (1, 0): 320, (3, 0): -2}, {(0, 0): 320, (0, 2): 3, (1, 0): -64, (1, 1): 10}),
    ({(0, 0): 32, (0, 2): 4, (1, 0): 12}, {(0, 0): 40, (1, 1): 320, (2, 0): 24, (2, 1): 20}),
    ({(0, 0): 16, (1, 0): -32, (2, 1): 24}, {(0, 0): 48, (0, 2): 6, (1, 0): -4, (2, 0): 2}),
    ({(0, 0): 8, (0, 1): -1, (2, 0): 1}, {(0, 0): 40, (0, 2): 3, (1, 0): -2}),
    ({(0, 0): 320, (0, 2): 10, (0, 3): 192, (2, 0): 3}, {(0, 0): 192, (0, 2): 96, (0, 3): 1}),
]


# (f, h, m): one-variable f, perturbation direction h, disk radius valuation m
FAMILIES = [
    ({(0,): 2, (1,): -3, (2,): 1}, {(3,): 1}, 0),
    ({(0,): 4, (2,): 1}, {(1,): 1}, 1),
    ({(0,): 8, (1,): -1, (3,): 1}, {(0,): 1, (4,): 1}, F(1, 2)),
]


def pure_part(k: int, n_terms: int, r: random.Random | None = None):
    """Antiderivative of omega with ord of reduction k-1: even coefficients below
    t^(k-1), a unit at t^(k-1), arbitrary integers above."""
    coeffs = {}
    for n in range(n_terms):
        if n < k - 1:
            c = 2 * (r.randrange(-4, 5) if r else 1)
        elif n == k - 1:
            c = 1 if r is None else r.choice([1, 3, -1, 5])
        else:
            c = r.randrange(-9, 10) if r else 1
        if c:
            coeffs[(n,)] = c
    return antiderivative(S(coeffs))
