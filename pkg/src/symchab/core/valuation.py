"""p-adic valuations on exact rationals and the truncation depth scan."""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache

#: The valuation of 0.  Comparisons and ``min`` against Fractions behave as
#: the extended order with +inf as maximum, and ``inf + x == inf``.
INF = math.inf

Val = Fraction | float  # float only ever as INF


@lru_cache(maxsize=None)
def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    i = 3
    while i * i <= n:
        if n % i == 0:
            return False
        i += 2
    return True


def check_prime(p: int) -> int:
    if not isinstance(p, int) or not is_prime(p):
        raise ValueError(f"{p!r} is not a prime")
    return p


def _vp_int(n: int, p: int) -> int:
    n = abs(n)
    e = 0
    while n % p == 0:
        n //= p
        e += 1
    return e


def val_p(x, p: int) -> Val:
    """Exponent of ``p`` in the rational ``x``; ``INF`` for zero.

    >>> val_p(8, 2), val_p(Fraction(4, 3), 2), val_p(Fraction(1, 12), 2)
    (Fraction(3, 1), Fraction(2, 1), Fraction(-2, 1))
    """
    check_prime(p)
    x = Fraction(x)
    if x == 0:
        return INF
    return Fraction(_vp_int(x.numerator, p) - _vp_int(x.denominator, p))


def parse_val(s) -> Val:
    if isinstance(s, str) and s.strip().lower() in ("inf", "+inf", "infinity"):
        return INF
    if isinstance(s, float):
        if s == INF:
            return INF
        raise TypeError("valuations must be exact")
    return Fraction(s)


def _floor_log(n: int, p: int) -> int:
    e = 0
    q = p
    while q <= n:
        q *= p
        e += 1
    return e


@lru_cache(maxsize=None)
def delta_slope(k: int, p: int, slope: Fraction) -> int:
    """max{N >= 0 : v_p(k+N) >= slope*N + v_p(k)} for a positive rational slope.

    The inequality is non-strict: this is the limit of the ``slope - eps``
    condition as eps -> 0+, since equality cases pass for every eps > 0 and
    strict shortfalls fail once eps is small enough.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    slope = Fraction(slope)
    if slope <= 0:
        raise ValueError("slope must be positive")
    a, b = slope.numerator, slope.denominator
    vk = _vp_int(k, p)
    best = 0
    n = 0
    while True:
        # passes iff b*(v(k+N) - v(k)) >= a*N
        if b * (_vp_int(k + n, p) - vk) >= a * n:
            best = n
        # v(k+N) <= log_p(k+N) < floor(log_p(k+N)) + 1; once slope*N reaches
        # that and the gap is increasing ((k+N)*slope >= 2 > 1/ln p), no later
        # N can pass.
        if a * n >= b * (_floor_log(k + n, p) + 1) and (k + n) * a >= 2 * b:
            return best
        n += 1
