"""Independent reference computations used only by the tests."""

from __future__ import annotations

import itertools
from fractions import Fraction

import sympy

from symchab.core.valuation import INF, val_p


def values_at(f, w):
    return [(t.val + sum(Fraction(u) * x for u, x in zip(t.exponent, w)), t.exponent) for t in f.terms]


def tie_scan(f, w) -> bool:
    """Brute force: is the minimum term value at w attained at least twice?"""
    vals = [v for v, _ in values_at(f, w)]
    m = min(vals)
    return vals.count(m) >= 2


def argmin_exponents(f, w) -> set:
    vals = values_at(f, w)
    m = min(v for v, _ in vals)
    return {u for v, u in vals if v == m}


def rational_grid(lows, step: Fraction, count: int):
    axes = [[Fraction(lo) + step * j for j in range(count)] for lo in lows]
    return [tuple(w) for w in itertools.product(*axes)]


def grid_vert_union(f, lows, step=Fraction(1, 4), count=40) -> set:
    """Union of argmin sets over a finite grid in the box (an inner approximation of vert_P)."""
    out = set()
    for w in rational_grid(lows, step, count):
        out |= argmin_exponents(f, w)
    return out


def delta_eps(k: int, p: int, ell: int, eps: Fraction = Fraction(1, 10**6), n_max: int = 5000) -> int:
    """max{N : v(k+N) >= (1/ell - eps) N + v(k)} by a plain scan with a concrete eps."""
    slope = Fraction(1, ell) - eps
    vk = val_p(k, p)
    best = 0
    for n in range(n_max):
        if val_p(k + n, p) >= slope * n + vk:
            best = n
    return best


def lambda_mixed_volume(polys, volume, minkowski_sum) -> Fraction:
    """MV as the lambda_1...lambda_d coefficient of vol(sum lambda_i Q_i),
    recovered by exact polynomial interpolation."""
    from sympy.polys.matrices import DomainMatrix

    d = len(polys)
    monos = [m for m in itertools.product(range(d + 1), repeat=d) if sum(m) == d]
    cands = sorted(itertools.product(range(1, 5), repeat=d), key=lambda t: (sum(t), t))

    def qq_matrix(rows):
        return DomainMatrix([[sympy.QQ(x) for x in r] for r in rows], (len(rows), len(rows[0])), sympy.QQ)

    rows, rhs, extra = [], [], 0
    for pt in cands:
        row = [int(sympy.prod([c**e for c, e in zip(pt, m)])) for m in monos]
        full = len(rows) >= len(monos)
        if not full and qq_matrix(rows + [row]).rank() == len(rows):
            continue
        acc = None
        for q, c in zip(polys, pt):
            s = q.scale(c)
            acc = s if acc is None else minkowski_sum(acc, s)
        vol = volume(acc)
        rows.append(row)
        rhs.append(vol)
        if full:
            extra += 1
            if extra == 2:
                break
    n = len(monos)
    M = qq_matrix(rows[:n])
    b = DomainMatrix([[sympy.QQ(r.numerator, r.denominator)] for r in rhs[:n]], (n, 1), sympy.QQ)
    sol = M.lu_solve(b).to_Matrix()
    # the extra rows must be consistent with the interpolant
    for row, r in zip(rows[n:], rhs[n:]):
        assert sum(sympy.Rational(c) * x for c, x in zip(row, sol)) == sympy.Rational(r.numerator, r.denominator)
    coeff = sympy.Rational(sol[monos.index((1,) * d)])
    return Fraction(int(coeff.p), int(coeff.q))


def resultant_torus_degree(f1, f2, t1, t2) -> int:
    """Degree of Res_{t2}(f1, f2) in t1 after removing factors of t1."""
    r = sympy.Poly(sympy.resultant(f1, f2, t2), t1)
    while r.eval(0) == 0 and not r.is_zero:
        r = sympy.Poly(sympy.quo(r.as_expr(), t1), t1)
    return r.degree()


def brute_force_points(curve, F) -> int:
    """#X(F) by trying every (x, y) pair, plus the point at infinity."""
    h, g = curve.reduced()
    n = 1
    for x in F.elements():
        gx, hx = F.poly_eval(g, x), F.poly_eval(h, x)
        for y in F.elements():
            if F.add(F.mul(y, y), F.mul(gx, y)) == hx:
                n += 1
    return n


def singular_points_char2(curve, F) -> list:
    """Affine singular points over F by direct evaluation of both partials."""
    h, g = curve.reduced()
    dg = [i * c for i, c in enumerate(g)][1:]
    dh = [i * c for i, c in enumerate(h)][1:]
    out = []
    for x in F.elements():
        gx, hx = F.poly_eval(g, x), F.poly_eval(h, x)
        for y in F.elements():
            on = F.add(F.mul(y, y), F.mul(gx, y)) == hx
            fy = gx  # 2y + g(x) in characteristic 2
            fx = F.add(F.mul(F.poly_eval(dg, x), y), F.poly_eval(dh, x))
            if on and fy == 0 and fx == 0:
                out.append((x, y))
    return out


def val_or_inf(x, p):
    return INF if x == 0 else val_p(x, p)


def newton_polygon_root_valuations(coeffs, p) -> list:
    """Valuations of the roots (with multiplicity) of sum c_i x^i, read off the
    lower convex hull of the points (i, v_p(c_i)).  Roots at 0 are omitted."""
    pts = [(i, val_p(c, p)) for i, c in enumerate(coeffs) if c != 0]
    hull: list = []
    for q in pts:
        while len(hull) >= 2 and (hull[-1][1] - hull[-2][1]) * (q[0] - hull[-2][0]) >= (q[1] - hull[-2][1]) * (
            hull[-1][0] - hull[-2][0]
        ):
            hull.pop()
        hull.append(q)
    out = []
    for a, b in zip(hull, hull[1:]):
        out += [Fraction(a[1] - b[1], b[0] - a[0])] * (b[0] - a[0])
    return sorted(out)


def resultant_t1_coeffs(f1, f2, t1, t2) -> list:
    """Coefficients (low to high) of Res_{t2}(f1, f2) as a polynomial in t1."""
    r = sympy.Poly(sympy.resultant(f1, f2, t2), t1)
    return [Fraction(int(c.p), int(c.q)) for c in reversed(r.all_coeffs())]
