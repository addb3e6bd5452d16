"""Residue-disk arithmetic for odd hyperelliptic curves and the total point bound."""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from functools import lru_cache
from typing import Mapping, Sequence

import sympy

from .core.valuation import check_prime, delta_slope
from .finite_field import GF, field
from .polytope import MAX_DIM, permanent

#: hard cap on brute-force field degree
MAX_E = 12

ARITHMETIC_ONLY = "arithmetic only"
UNDER_HYPOTHESES = "bound under asserted hypotheses"


class CurveError(ValueError):
    """Malformed or unsupported curve model."""


def _strip(coeffs: Sequence[int]) -> tuple[int, ...]:
    c = [int(x) for x in coeffs]
    while c and c[-1] == 0:
        c.pop()
    return tuple(c)


def _reject_duplicates(pairs):
    keys = [k for k, _ in pairs]
    dup = sorted({k for k in keys if keys.count(k) > 1})
    if dup:
        raise CurveError(f"duplicate keys in curve spec: {dup}")
    return dict(pairs)


@dataclass(frozen=True)
class CurveSpec:
    """y^2 + g(x) y = h(x) with deg h = 2*genus + 1 and deg g <= genus.

    ``h`` and ``g`` are integer coefficient lists, lowest degree first.
    """

    genus: int
    p: int
    h: tuple[int, ...]
    g: tuple[int, ...] = ()
    rank_assumption: int | None = None
    assumption_A: bool = False
    orders: Mapping[str, tuple] | None = dc_field(default=None, compare=False, hash=False)

    def __post_init__(self):
        if not isinstance(self.genus, int) or self.genus < 1:
            raise CurveError("genus must be a positive integer")
        check_prime(self.p)
        h, g = _strip(self.h), _strip(self.g)
        if len(h) != 2 * self.genus + 2:
            raise CurveError(f"deg h must be {2 * self.genus + 1}")
        if len(g) > self.genus + 1:
            raise CurveError(f"deg g must be <= {self.genus}")
        if h[-1] % self.p == 0:
            raise CurveError("leading coefficient of h vanishes mod p")
        if self.rank_assumption is not None and self.rank_assumption < 0:
            raise CurveError("rank_assumption must be >= 0")
        object.__setattr__(self, "h", h)
        object.__setattr__(self, "g", g)

    def reduced(self) -> tuple[tuple[int, ...], tuple[int, ...]]:
        p = self.p
        return _strip([c % p for c in self.h]), _strip([c % p for c in self.g])

    def odd_model(self) -> tuple[int, ...]:
        """f = 4h + g^2, so that (2y + g)^2 = f."""
        out = [0] * max(len(self.h), 2 * len(self.g) - 1)
        for i, c in enumerate(self.h):
            out[i] += 4 * c
        for i, a in enumerate(self.g):
            for j, b in enumerate(self.g):
                out[i + j] += a * b
        return _strip(out)

    def to_json(self) -> dict:
        doc = {"genus": self.genus, "p": self.p, "h": list(self.h), "g": list(self.g)}
        if self.rank_assumption is not None:
            doc["rank_assumption"] = self.rank_assumption
        doc["assumption_A"] = self.assumption_A
        if self.orders is not None:
            doc["orders"] = {k: [list(r) for r in v] for k, v in self.orders.items()}
        return doc

    @classmethod
    def from_json(cls, doc) -> "CurveSpec":
        if isinstance(doc, (str, bytes)):
            doc = json.loads(doc, object_pairs_hook=_reject_duplicates)
        orders = doc.get("orders")
        if orders is not None:
            orders = {k: tuple(tuple(int(x) for x in r) for r in v) for k, v in orders.items()}
        return cls(
            genus=doc["genus"],
            p=doc["p"],
            h=tuple(doc["h"]),
            g=tuple(doc.get("g", ())),
            rank_assumption=doc.get("rank_assumption"),
            assumption_A=bool(doc.get("assumption_A", False)),
            orders=orders,
        )


# ---------------------------------------------------------------------------
# reduction and point counts


def _deriv(c: Sequence[int]) -> tuple[int, ...]:
    return tuple(i * c[i] for i in range(1, len(c)))


@lru_cache(maxsize=None)
def _splitting_degree_mod2(g: tuple[int, ...]) -> int:
    """lcm of the degrees of the irreducible factors of g over F_2."""
    x = sympy.Symbol("x")
    poly = sympy.Poly(list(reversed(g)), x, modulus=2)
    degs = [f.degree() for f, _ in poly.factor_list()[1]]
    return math.lcm(*degs) if degs else 1


def good_reduction(curve: CurveSpec) -> bool:
    """Nonsingularity of the reduced model (the odd model is smooth at infinity
    once deg h = 2g+1 survives reduction, which construction enforces)."""
    p = curve.p
    if p != 2:
        f = curve.odd_model()
        if len(f) != 2 * curve.genus + 2 or f[-1] % p == 0:
            return False
        x = sympy.Symbol("x")
        disc = sympy.discriminant(sympy.Poly(list(reversed(f)), x))
        return int(disc) % p != 0
    h, g = curve.reduced()
    if not g:
        # y^2 = h(x) in characteristic 2 is singular wherever h' vanishes,
        # and h' (of degree 2g) has a root over the algebraic closure.
        return False
    L = _splitting_degree_mod2(g)
    F = field(2, L)
    dg, dh = _deriv(g), _deriv(h)
    for x0 in F.elements():
        if F.poly_eval(g, x0) != 0:
            continue
        y0 = F.sqrt(F.poly_eval(h, x0))
        # d/dx (y^2 + g y - h) = g'(x) y - h'(x)
        if F.mul(F.poly_eval(dg, x0), y0) == F.poly_eval(dh, x0):
            return False
    return True


def _check_e(e: int) -> None:
    if not isinstance(e, int) or e < 1:
        raise ValueError("field degree must be a positive integer")
    if e > MAX_E:
        raise ValueError(f"field degree {e} exceeds the brute-force limit {MAX_E}")


def _x_fiber_sizes(curve: CurveSpec, F: GF):
    """Yield (x, number of affine points above x) over F."""
    h, g = curve.reduced()
    if F.p == 2:
        for x in F.elements():
            gx = F.poly_eval(g, x)
            if gx == 0:
                yield x, 1
            else:
                c = F.mul(F.poly_eval(h, x), F.inv(F.mul(gx, gx)))
                yield x, 2 if F.trace(c) == 0 else 0
    else:
        f = [c % F.p for c in curve.odd_model()]
        for x in F.elements():
            fx = F.poly_eval(f, x)
            yield x, 1 if fx == 0 else (2 if F.is_square(fx) else 0)


def count_points(curve: CurveSpec, e: int) -> int:
    """#X(F_{p^e}) on the reduced odd model, including its single point at infinity."""
    _check_e(e)
    F = field(curve.p, e)
    return 1 + sum(n for _, n in _x_fiber_sizes(curve, F))


def hasse_weil_cap(g: int, p: int, e: int) -> int:
    """floor(1 + 2g p^(e/2) + p^e)."""
    return 1 + p**e + math.isqrt(4 * g * g * p**e)


def affine_points(curve: CurveSpec, e: int) -> list[tuple[int, int]]:
    """All affine points (x, y) of the reduced model over F_{p^e}."""
    _check_e(e)
    F = field(curve.p, e)
    h, g = curve.reduced()
    pts = []
    for x in F.elements():
        gx = F.poly_eval(g, x)
        hx = F.poly_eval(h, x)
        if F.p == 2:
            if gx == 0:
                pts.append((x, F.sqrt(hx)))
            else:
                c = F.mul(hx, F.inv(F.mul(gx, gx)))
                pts.extend((x, F.mul(gx, z)) for z in F.artin_schreier_roots(c))
        else:
            # y = (-g +- sqrt(g^2 + 4h)) / 2
            disc = F.add(F.mul(gx, gx), F.mul(F.from_int(4), hx))
            s = F.sqrt(disc)
            if s is None:
                continue
            half = F.inv(F.from_int(2))
            roots = {F.mul(F.sub(s, gx), half), F.mul(F.sub(F.neg(s), gx), half)}
            pts.extend((x, y) for y in sorted(roots))
    return pts


@dataclass(frozen=True, order=True)
class ClosedPoint:
    """A Frobenius orbit of size ``degree``; ``x``/``y`` encode its least
    member in F_{p^degree}.  The point at infinity has x = y = None."""

    degree: int
    x: int | None
    y: int | None

    @property
    def is_infinity(self) -> bool:
        return self.x is None

    @property
    def key(self) -> str:
        return "inf" if self.is_infinity else f"{self.degree}:{self.x},{self.y}"

    def to_json(self) -> dict:
        return {"degree": self.degree, "x": self.x, "y": self.y, "key": self.key}

    def sort_key(self):
        return (self.degree, -1 if self.x is None else self.x, -1 if self.y is None else self.y)


INFINITY = ClosedPoint(1, None, None)


@dataclass(frozen=True)
class ClosedPointSet:
    points: tuple[ClosedPoint, ...]
    counts: dict[int, int]  # a_e


def _orbit(F: GF, pt: tuple[int, int]) -> list[tuple[int, int]]:
    orb = [pt]
    cur = (F.frobenius(pt[0]), F.frobenius(pt[1]))
    while cur != pt:
        orb.append(cur)
        cur = (F.frobenius(cur[0]), F.frobenius(cur[1]))
    return orb


def closed_points(curve: CurveSpec, max_degree: int) -> ClosedPointSet:
    """Closed points of degree <= max_degree and their counts a_e."""
    pts = [INFINITY]
    counts = {}
    for e in range(1, max_degree + 1):
        F = field(curve.p, e)
        seen = set()
        n = 1 if e == 1 else 0
        for pt in affine_points(curve, e):
            if pt in seen:
                continue
            orb = _orbit(F, pt)
            seen.update(orb)
            if len(orb) == e:
                rep = min(orb)
                pts.append(ClosedPoint(e, rep[0], rep[1]))
                n += 1
        counts[e] = n
    return ClosedPointSet(tuple(sorted(pts, key=ClosedPoint.sort_key)), counts)


def mobius(n: int) -> int:
    out = 1
    q = 2
    while q * q <= n:
        if n % q == 0:
            n //= q
            if n % q == 0:
                return 0
            out = -out
        q += 1
    return -out if n > 1 else out


def orbit_counts_from_totals(totals: Mapping[int, int]) -> dict[int, int]:
    """a_e = (1/e) sum_{m | e} mu(e/m) #X(F_{p^m})."""
    out = {}
    for e in sorted(totals):
        s = sum(mobius(e // m) * totals[m] for m in range(1, e + 1) if e % m == 0)
        if s % e:
            raise ArithmeticError("Moebius sum not divisible by e")
        out[e] = s // e
    return out


# ---------------------------------------------------------------------------
# symmetric-power residue disks


@dataclass(frozen=True)
class ResidueDiskProfile:
    parts: tuple[tuple[ClosedPoint, int], ...]

    @property
    def degree(self) -> int:
        return sum(pt.degree * s for pt, s in self.parts)

    @property
    def n_p(self) -> int:
        return math.prod(math.factorial(s) for _, s in self.parts)

    @property
    def key(self) -> str:
        return "+".join(f"{pt.key}*{s}" for pt, s in self.parts)

    def multiplicities(self) -> list[int]:
        """s of each of the d local coordinates, in part order."""
        out = []
        for pt, s in self.parts:
            out.extend([s] * (pt.degree * s))
        return out

    def to_json(self) -> dict:
        return {"key": self.key, "parts": [[pt.to_json(), s] for pt, s in self.parts], "N_P": self.n_p}


def sym_profiles(curve: CurveSpec, d: int) -> list[ResidueDiskProfile]:
    """All F_p-points of Sym^d X, as multisets of closed points."""
    if d < 1:
        raise ValueError("d must be >= 1")
    cps = closed_points(curve, d).points
    out = []

    def rec(start: int, remaining: int, acc: list):
        if remaining == 0:
            out.append(ResidueDiskProfile(tuple(acc)))
            return
        for i in range(start, len(cps)):
            pt = cps[i]
            for s in range(1, remaining // pt.degree + 1):
                acc.append((pt, s))
                rec(i + 1, remaining - s * pt.degree, acc)
                acc.pop()

    rec(0, d, [])
    return sorted(out, key=lambda pr: pr.key)


def profile_count(counts: Mapping[int, int], d: int) -> int:
    """Coefficient of t^d in prod_e (1 - t^e)^(-a_e)."""
    poly = [1] + [0] * d
    for e, a in counts.items():
        for _ in range(a):
            for n in range(e, d + 1):
                poly[n] += poly[n - e]
    return poly[d]


def sym_count_bound(g: int, p: int, d: int) -> int:
    """floor((1 + 2g p^(d/2) + p^d)^d), computed exactly."""
    if d == 0:
        return 1
    if d % 2 == 0:
        return (1 + 2 * g * p ** (d // 2) + p**d) ** d
    # (X + Y sqrt p)^d = A + B sqrt p
    X, Y = 1 + p**d, 2 * g * p ** ((d - 1) // 2)
    A = B = 0
    for i in range(d + 1):
        term = math.comb(d, i) * X ** (d - i) * Y**i
        if i % 2 == 0:
            A += term * p ** (i // 2)
        else:
            B += term * p ** (i // 2)
    return A + math.isqrt(B * B * p)


# ---------------------------------------------------------------------------
# vanishing orders, disk matrices, bounds


def delta(k: int, p: int, ell: int) -> int:
    """max{N >= 0 : v_p(k+N) >= N/ell + v_p(k)}, the small-eps truncation depth.

    >>> [delta(k, 2, 2) for k in (1, 2, 3, 4)]
    [3, 2, 5, 0]
    """
    if ell < 1:
        raise ValueError("ell must be >= 1")
    check_prime(p)
    return delta_slope(k, p, Fraction(1, ell))


def vanishing_order(curve: CurveSpec, point, a: int) -> int:
    """Order of vanishing of x^a dx / (2y + g) at a point of the reduction (p odd).

    ``point`` is a ClosedPoint, the string ``"inf"``, or ``(e, x, y)`` with
    coordinates encoded in F_{p^e}.
    """
    p = curve.p
    if p == 2:
        raise CurveError("vanishing orders in characteristic 2 must be supplied by the user")
    if not 0 <= a <= curve.genus - 1:
        raise ValueError(f"a must lie in [0, {curve.genus - 1}]")
    if point == "inf" or (isinstance(point, ClosedPoint) and point.is_infinity):
        return 2 * curve.genus - 2 - 2 * a
    if isinstance(point, ClosedPoint):
        e, x0, y0 = point.degree, point.x, point.y
    else:
        e, x0, y0 = point
    _check_e(e)
    F = field(p, e)
    h, g = curve.reduced()
    gx = F.poly_eval(g, x0)
    lhs = F.add(F.mul(y0, y0), F.mul(gx, y0))
    if lhs != F.poly_eval(h, x0):
        raise ValueError("point is not on the reduced curve")
    big_y = F.add(F.mul(F.from_int(2), y0), gx)
    if big_y != 0:
        # x - x0 is a uniformizer and dx / Y is a unit
        return a if x0 == 0 else 0
    # Weierstrass point: Y uniformizes, ord(x - x0) = 2, ord(dx / Y) = 0
    return 2 * a if x0 == 0 else 0


@dataclass(frozen=True)
class DiskMatrix:
    A: tuple[tuple[int, ...], ...]
    provenance: tuple[tuple[tuple[int, int, int], ...], ...]  # (k, delta, ell) per entry

    @property
    def order(self) -> int:
        return len(self.A)

    def to_json(self) -> dict:
        return {
            "A": [list(r) for r in self.A],
            "provenance": [[{"k": k, "delta": dl, "ell": ell} for k, dl, ell in r] for r in self.provenance],
        }

    @classmethod
    def from_json(cls, doc) -> "DiskMatrix":
        return cls(
            tuple(tuple(r) for r in doc["A"]),
            tuple(tuple((c["k"], c["delta"], c["ell"]) for c in r) for r in doc["provenance"]),
        )


def worst_case_entry(p: int, g: int, ell: int) -> tuple[int, int, int]:
    """(entry, k, delta) maximizing k + delta(k, p, ell) over k in 1..2g-1; least k on ties."""
    best = None
    for k in range(1, 2 * g):
        dl = delta(k, p, ell)
        if best is None or k + dl > best[0]:
            best = (k + dl, k, dl)
    return best


def disk_matrix(
    profile: ResidueDiskProfile | None,
    orders: Sequence[Sequence[int]] | None = None,
    *,
    p: int,
    d: int,
    g: int,
    worst_case: bool = False,
    strict: bool = False,
) -> DiskMatrix:
    """A_P with entries k_ij + delta(k_ij, p, ell).

    ell is d by default.  ``strict=True`` uses ell = s_i, the multiplicity of
    the point carrying coordinate i, which needs a profile.
    """
    if d < 1 or d > MAX_DIM:
        raise ValueError(f"d must be between 1 and {MAX_DIM}")
    if worst_case == (orders is not None):
        raise ValueError("give exactly one of explicit orders or worst_case")
    if strict:
        if profile is None:
            raise ValueError("strict mode needs a residue-disk profile")
        ells = profile.multiplicities()
        if len(ells) != d:
            raise ValueError("profile degree does not match d")
    else:
        ells = [d] * d
    rows, prov = [], []
    for i in range(d):
        row, prow = [], []
        for j in range(d):
            if worst_case:
                entry, k, dl = worst_case_entry(p, g, ells[i])
            else:
                if len(orders) != d or any(len(r) != d for r in orders):
                    raise ValueError(f"orders must be a {d}x{d} matrix")
                k = int(orders[i][j])
                if k < 1:
                    raise ValueError("vanishing-order indices k must be >= 1")
                dl = delta(k, p, ells[i])
                entry = k + dl
            row.append(entry)
            prow.append((k, dl, ells[i]))
        rows.append(tuple(row))
        prov.append(tuple(prow))
    return DiskMatrix(tuple(rows), tuple(prov))


def per_prime(A) -> Fraction:
    """sum_i sum_{|R| = i} Per(A[R, first i columns]) / i!, with the empty minor counted as 1.

    >>> per_prime([[8, 8], [8, 8]])
    Fraction(81, 1)
    """
    m = A.A if isinstance(A, DiskMatrix) else A
    d = len(m)
    total = Fraction(1)
    for i in range(1, d + 1):
        for rows in itertools.combinations(range(d), i):
            total += permanent([[m[r][c] for c in range(i)] for r in rows]) / math.factorial(i)
    return total


def _frac_json(x: Fraction) -> dict:
    x = Fraction(x)
    return {"num": str(x.numerator), "den": str(x.denominator)}


def _frac_from(doc) -> Fraction:
    return Fraction(int(doc["num"]), int(doc["den"]))


@dataclass(frozen=True)
class DiskRow:
    profile_key: str
    matrix: DiskMatrix
    per: Fraction
    per_prime: Fraction
    n_p: int
    contribution: Fraction
    orders_source: str  # "orders" | "worst-case"

    def to_json(self) -> dict:
        return {
            "profile": self.profile_key,
            "matrix": self.matrix.to_json(),
            "per": _frac_json(self.per),
            "per_prime": _frac_json(self.per_prime),
            "N_P": self.n_p,
            "contribution": _frac_json(self.contribution),
            "orders_source": self.orders_source,
        }

    @classmethod
    def from_json(cls, doc) -> "DiskRow":
        return cls(
            doc["profile"],
            DiskMatrix.from_json(doc["matrix"]),
            _frac_from(doc["per"]),
            _frac_from(doc["per_prime"]),
            doc["N_P"],
            _frac_from(doc["contribution"]),
            doc["orders_source"],
        )


@dataclass(frozen=True)
class BoundReport:
    p: int
    d: int
    g: int
    rows: tuple[DiskRow, ...]
    disk_count: int
    disk_count_source: str  # "enumerated" | "hasse-weil" | "user-cap"
    total: Fraction
    conservative_total: Fraction
    assumptions: dict
    label: str

    def to_json(self) -> dict:
        return {
            "p": self.p,
            "d": self.d,
            "g": self.g,
            "rows": [r.to_json() for r in self.rows],
            "disk_count": self.disk_count,
            "disk_count_source": self.disk_count_source,
            "total": _frac_json(self.total),
            "conservative_total": _frac_json(self.conservative_total),
            "assumptions": dict(self.assumptions),
            "label": self.label,
        }

    @classmethod
    def from_json(cls, doc) -> "BoundReport":
        return cls(
            doc["p"],
            doc["d"],
            doc["g"],
            tuple(DiskRow.from_json(r) for r in doc["rows"]),
            doc["disk_count"],
            doc["disk_count_source"],
            _frac_from(doc["total"]),
            _frac_from(doc["conservative_total"]),
            dict(doc["assumptions"]),
            doc["label"],
        )


def _label(g: int, d: int, rank: int | None, assumption_A: bool) -> str:
    if rank is None or rank > g - d:
        return ARITHMETIC_ONLY
    # the assumption is automatic in rank <= 1
    return UNDER_HYPOTHESES if (assumption_A or rank <= 1) else ARITHMETIC_ONLY


def _row(key: str, A: DiskMatrix, n_p: int, source: str) -> DiskRow:
    pp = per_prime(A)
    return DiskRow(key, A, permanent(A.A), pp, n_p, pp / n_p, source)


def total_bound(
    curve: CurveSpec | None = None,
    *,
    d: int,
    p: int | None = None,
    g: int | None = None,
    worst_case: bool = False,
    disk_cap: int | None = None,
    orders: Mapping[str, Sequence[Sequence[int]]] | None = None,
    strict: bool = False,
    rank_assumption: int | None = None,
    assumption_A: bool | None = None,
) -> BoundReport:
    """Sum over residue disks of Per(A_P)' / N_P.

    With a curve, disks are enumerated from its reduction; each disk uses the
    orders given for its profile key, falling back to the worst case when
    ``worst_case`` is set.  Without a curve, (p, g) must be given and every
    disk is a worst-case disk; the disk count is ``disk_cap`` or, absent a
    cap, the Hasse-Weil count.
    """
    if curve is not None:
        if (p is not None and p != curve.p) or (g is not None and g != curve.genus):
            raise ValueError("p/g flags disagree with the curve")
        if disk_cap is not None:
            raise ValueError("a disk cap applies to worst-case mode without a curve")
        p, g = curve.p, curve.genus
        if orders is None:
            orders = curve.orders
        if rank_assumption is None:
            rank_assumption = curve.rank_assumption
        if assumption_A is None:
            assumption_A = curve.assumption_A
    else:
        if p is None or g is None:
            raise ValueError("worst-case mode without a curve needs p and g")
        if not worst_case:
            raise ValueError("without a curve only the worst-case bound is available")
        if orders:
            raise ValueError("explicit orders need a curve to enumerate disks")
        if strict:
            raise ValueError("strict mode needs enumerated disks")
        check_prime(p)
    assumption_A = bool(assumption_A)
    label = _label(g, d, rank_assumption, assumption_A)
    assumptions = {"rank_assumption": rank_assumption, "assumption_A": assumption_A, "strict": strict}

    if curve is None:
        A = disk_matrix(None, p=p, d=d, g=g, worst_case=True)
        if disk_cap is not None:
            if disk_cap < 0:
                raise ValueError("disk cap must be >= 0")
            count, source = disk_cap, "user-cap"
        else:
            count, source = sym_count_bound(g, p, d), "hasse-weil"
        row = _row("worst-case", A, 1, "worst-case")
        total = row.per_prime * count
        return BoundReport(p, d, g, (row,), count, source, total, total, assumptions, label)

    if not good_reduction(curve):
        raise CurveError("the model does not have good reduction at p")
    rows = []
    for prof in sym_profiles(curve, d):
        explicit = (orders or {}).get(prof.key)
        if explicit is not None:
            A = disk_matrix(prof, explicit, p=p, d=d, g=g, strict=strict)
            source = "orders"
        elif worst_case:
            A = disk_matrix(prof, p=p, d=d, g=g, worst_case=True, strict=strict)
            source = "worst-case"
        else:
            raise ValueError(f"no vanishing orders for disk {prof.key} and worst case not requested")
        rows.append(_row(prof.key, A, prof.n_p, source))
    total = sum((r.contribution for r in rows), Fraction(0))
    conservative = sum((r.per_prime for r in rows), Fraction(0))
    return BoundReport(p, d, g, tuple(rows), len(rows), "enumerated", total, conservative, assumptions, label)
