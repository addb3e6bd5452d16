"""Intersection counts for square systems of valued series: BKK bounds, tropical
local multiplicities, coordinate strata and the deformation of non-transverse
systems."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

import sympy

from ._exact import cone_is_trivial, rank, solve, sub, vec
from .core.series import BoxDomain, Exponent, ValuedSeries, ValuedTerm
from .core.tropical import gamma_w, truncate_pure, vert_domain, vert_w
from .core.valuation import INF, Val, val_p
from .polytope import MAX_DIM, Polytope, convex_hull, mixed_volume, permanent


class DeformationError(RuntimeError):
    """The epsilon search could not preserve the tropical data."""


@dataclass(frozen=True)
class SeriesSystem:
    members: tuple[ValuedSeries, ...]
    domain: BoxDomain | None = None

    def __post_init__(self):
        members = tuple(self.members)
        if not members:
            raise ValueError("empty system")
        d = members[0].dim
        if len(members) != d:
            raise ValueError(f"a system in {d} variables needs {d} members, got {len(members)}")
        if any(f.dim != d for f in members) or any(f.prime != members[0].prime for f in members):
            raise ValueError("members must share prime and dimension")
        if d > MAX_DIM:
            raise ValueError(f"dimension {d} exceeds {MAX_DIM}")
        dom = self.domain if self.domain is not None else BoxDomain.uniform(d)
        if dom.dim != d:
            raise ValueError("domain dimension mismatch")
        object.__setattr__(self, "members", members)
        object.__setattr__(self, "domain", dom)

    @property
    def prime(self) -> int:
        return self.members[0].prime

    @property
    def dim(self) -> int:
        return self.members[0].dim

    def to_json(self) -> dict:
        return {
            "domain": [str(x) for x in self.domain.m],
            "members": [f.to_json() for f in self.members],
        }

    @classmethod
    def from_json(cls, doc) -> "SeriesSystem":
        members = tuple(ValuedSeries.from_json(f) for f in doc["members"])
        dom = doc.get("domain")
        return cls(members, BoxDomain(tuple(Fraction(x) for x in dom)) if dom is not None else None)


def is_nondegenerate(f: ValuedSeries) -> bool:
    """Every variable occurs as a pure power t_i^n (n > 0) in the support."""
    have = set()
    for u in f.exponents():
        nz = [i for i, e in enumerate(u) if e]
        if len(nz) == 1:
            have.add(nz[0])
    return len(have) == f.dim


def newton_polytope(f: ValuedSeries) -> Polytope:
    if not f.is_polynomial:
        raise ValueError("Newton polytopes are taken of polynomial members; truncate first")
    return convex_hull(f.exponents(), f.dim)


def _as_int(x: Fraction) -> int:
    if x.denominator != 1:
        raise ArithmeticError(f"mixed volume of lattice polytopes came out non-integral: {x}")
    return x.numerator


def bernstein_bound(sys: SeriesSystem) -> int:
    """MV of the members' Newton polytopes."""
    return _as_int(mixed_volume(*[newton_polytope(f) for f in sys.members]))


# ---------------------------------------------------------------------------
# local multiplicities


def _local_cones(terms: list[ValuedTerm]):
    """Cones of the local tropical hypersurface at w: pieces where a, b tie
    for the minimum among the vert_w terms."""
    exps = [t.exponent for t in terms]
    cones = []
    for a, b in itertools.combinations(exps, 2):
        eq = [sub(a, b)]
        ub = [sub(a, c) for c in exps if c != a and c != b]
        cones.append((ub, eq))
    return cones


def is_isolated(sys: SeriesSystem, w) -> bool:
    """Whether w is an isolated point of the intersection of the members' tropicalizations."""
    d = sys.dim
    per_member = []
    for f in sys.members:
        _, terms = vert_w(f, w, sys.domain)
        if len(terms) < 2:
            return False
        per_member.append(_local_cones(sorted(terms, key=lambda t: t.exponent)))
    for choice in itertools.product(*per_member):
        ub = [r for c in choice for r in c[0]]
        eq = [r for c in choice for r in c[1]]
        if not cone_is_trivial(ub, eq, d):
            return False
    return True


def local_multiplicity(sys: SeriesSystem, w) -> int:
    """MV of the local Newton polytopes gamma_w(f_i): the number of common
    zeros of valuation exactly w, with multiplicity, at an isolated interior
    point w of the tropical intersection."""
    w = vec(w)
    if not sys.domain.is_interior(w):
        raise ValueError("w must lie in the interior of the domain")
    for i, f in enumerate(sys.members):
        if len(vert_w(f, w, sys.domain)[1]) < 2:
            raise ValueError(f"w is not in the tropicalization of member {i + 1}")
    if not is_isolated(sys, w):
        raise ValueError("w is not an isolated point of the tropical intersection")
    return _as_int(mixed_volume(*[gamma_w(f, w, sys.domain) for f in sys.members]))


def tropical_intersection(sys: SeriesSystem) -> list[tuple[tuple[Fraction, ...], int]]:
    """Isolated interior points of the tropical intersection with their local multiplicities."""
    d = sys.dim
    pair_lists = []
    for f in sys.members:
        verts = sorted(vert_domain(f, sys.domain), key=lambda t: t.exponent)
        pair_lists.append(list(itertools.combinations(verts, 2)))
    found = set()
    for choice in itertools.product(*pair_lists):
        rows = [sub(a.exponent, b.exponent) for a, b in choice]
        rhs = [b.val - a.val for a, b in choice]
        if rank(rows) < d:
            continue
        w = solve(rows, rhs)
        if w is None or w in found or not sys.domain.is_interior(w):
            continue
        if all({a, b} <= vert_w(f, w, sys.domain)[1] for f, (a, b) in zip(sys.members, choice)):
            found.add(w)
    out = []
    for w in sorted(found):
        if is_isolated(sys, w):
            out.append((w, local_multiplicity(sys, w)))
    return out


# ---------------------------------------------------------------------------
# strata


@dataclass(frozen=True)
class StableCount:
    interior: int | Fraction
    strata: dict[tuple[int, ...], int | Fraction]  # nonzero coordinates -> bound; () is the origin
    total: int | Fraction
    mode: str

    def to_json(self) -> dict:
        def enc(x):
            x = Fraction(x)
            return {"num": str(x.numerator), "den": str(x.denominator)}

        return {
            "mode": self.mode,
            "interior": enc(self.interior),
            "strata": [{"coords": list(k), "bound": enc(v)} for k, v in sorted(self.strata.items())],
            "total": enc(self.total),
        }


def _polynomial_members(sys: SeriesSystem, ell: int | None) -> list[ValuedSeries]:
    out = []
    for f in sys.members:
        if f.is_polynomial:
            out.append(f)
        else:
            out.append(truncate_pure(f, sys.domain, ell if ell is not None else sys.dim))
    return out


def _restrict_to(f: ValuedSeries, coords: tuple[int, ...]) -> ValuedSeries | None:
    """f with t_j = 0 for j not in coords, as a series in the remaining variables."""
    terms = []
    for t in f.terms:
        if all(t.exponent[j] == 0 for j in range(f.dim) if j not in coords):
            terms.append(ValuedTerm(tuple(t.exponent[j] for j in coords), t.val, t.exact))
    if not terms:
        return None
    return ValuedSeries(f.prime, len(coords), tuple(terms), pure=f.pure)


def _origin_bound(members: list[ValuedSeries]) -> int:
    for f in members:
        c = f.constant()
        if c is not None and c.exact is not None:
            return 0  # a nonzero exact constant rules the origin out
    return 1


def _degree_matrix(members: list[ValuedSeries]) -> list[list[int]]:
    if not all(f.pure for f in members):
        raise ValueError("permanent mode needs pure members")
    return [[ValuedSeries.max_degree_in(j, f.terms) for j in range(f.dim)] for f in members]


def stable_count_bound(sys: SeriesSystem, mode: str = "exact", ell: int | None = None) -> StableCount:
    """Interior BKK bound plus one bound per coordinate stratum.

    The stratum where exactly the coordinates in T are nonzero uses the first
    |T| members restricted to t_j = 0 (j not in T).  ``mode="permanent"``
    replaces each mixed volume by Per/|T|! of the pure members' degree
    matrix, the axis-simplex estimate.
    """
    if mode not in ("exact", "permanent"):
        raise ValueError("mode must be 'exact' or 'permanent'")
    d = sys.dim
    members = _polynomial_members(sys, ell)
    degs = _degree_matrix(members) if mode == "permanent" else None

    def bound(coords: tuple[int, ...]):
        k = len(coords)
        if mode == "permanent":
            return permanent([[degs[i][j] for j in coords] for i in range(k)]) / math.factorial(k)
        restricted = []
        for i in range(k):
            r = _restrict_to(members[i], coords)
            if r is None:
                raise ValueError(f"member {i + 1} vanishes identically on the stratum {coords}")
            restricted.append(r)
        return _as_int(mixed_volume(*[newton_polytope(r) for r in restricted]))

    full = tuple(range(d))
    interior = bound(full)
    strata: dict[tuple[int, ...], int | Fraction] = {}
    for k in range(d - 1, 0, -1):
        for coords in itertools.combinations(range(d), k):
            strata[coords] = bound(coords)
    strata[()] = _origin_bound(members)
    total = interior + sum(strata.values())
    if isinstance(total, Fraction) and total.denominator == 1:
        total = total.numerator
    return StableCount(interior, strata, total, mode)


# ---------------------------------------------------------------------------
# deformation


def _mono_value(u: Exponent, q: Sequence[Fraction]) -> Fraction:
    out = Fraction(1)
    for x, e in zip(q, u):
        if e:
            out *= x**e
    return out


def _eval(coeffs: dict[Exponent, Fraction], q) -> Fraction:
    return sum((c * _mono_value(u, q) for u, c in coeffs.items()), Fraction(0))


def nonvanishing_poly(f: ValuedSeries, points: Iterable) -> ValuedSeries:
    """A polynomial h with M(h) inside M(f) that is nonzero at every point.

    Points are processed in order.  When the running h vanishes at the next
    point q, the first monomial of f (constant, then by total degree, t1
    before t2) that is nonzero at q is added with coefficient p^e, e >= 0
    the least exponent keeping every earlier value's valuation intact.
    """
    if not is_nondegenerate(f):
        raise ValueError("f is degenerate: some variable has no pure power in its support")
    pts = [vec(q) for q in points]
    if any(len(q) != f.dim for q in pts):
        raise ValueError("point dimension mismatch")
    if any(all(x == 0 for x in q) for q in pts):
        raise ValueError("the origin is not allowed")
    p = f.prime
    order = f.monomials()
    h: dict[Exponent, Fraction] = {}
    done: list = []
    for q in pts:
        if h and _eval(h, q) != 0:
            done.append(q)
            continue
        m = next(u for u in order if _mono_value(u, q) != 0)
        if not h:
            c = Fraction(1)
        else:
            e = 0
            for qi in done:
                mv = _mono_value(m, qi)
                if mv != 0:
                    e = max(e, int(math.floor(val_p(_eval(h, qi), p) - val_p(mv, p))) + 1)
            c = Fraction(p) ** e
        h[m] = h.get(m, Fraction(0)) + c
        if h[m] == 0:
            del h[m]
        done.append(q)
    for q in pts:
        if _eval(h, q) == 0:
            raise AssertionError("nonvanishing construction failed")  # pragma: no cover
    if not h:
        # no points: any monomial of f will do
        h = {order[0]: Fraction(1)}
    return ValuedSeries.from_coeffs(p, h, dim=f.dim)


def _add(f: ValuedSeries, h: ValuedSeries, eps: Fraction) -> ValuedSeries | None:
    coeffs = {t.exponent: t.exact for t in f.terms}
    for t in h.terms:
        coeffs[t.exponent] = coeffs.get(t.exponent, Fraction(0)) + eps * t.exact
    coeffs = {u: c for u, c in coeffs.items() if c != 0}
    if not coeffs:
        return None
    return ValuedSeries.from_coeffs(f.prime, coeffs, dim=f.dim)


def _vert_signature(f: ValuedSeries, P: BoxDomain) -> frozenset:
    return frozenset((t.exponent, t.val) for t in vert_domain(f, P))


def default_samples(P: BoxDomain, steps: int = 7) -> list[tuple[Fraction, ...]]:
    """Grid m + j/2 (j < steps) in each coordinate."""
    axis = [[mi + Fraction(j, 2) for j in range(steps)] for mi in P.m]
    return [tuple(w) for w in itertools.product(*axis)]


@dataclass(frozen=True)
class Perturbation:
    member: int
    h: ValuedSeries | None
    eps_val: Val
    eps: Fraction

    def to_json(self) -> dict:
        return {
            "member": self.member,
            "h": None if self.h is None else self.h.to_json(),
            "eps": {"num": str(self.eps.numerator), "den": str(self.eps.denominator)},
            "eps_val": "inf" if self.eps_val == INF else str(self.eps_val),
        }


@dataclass(frozen=True)
class DeformationReport:
    original: SeriesSystem
    deformed: SeriesSystem
    perturbations: tuple[Perturbation, ...]
    witnesses: tuple[tuple[tuple[Fraction, ...], ...], ...]
    samples: tuple[tuple[Fraction, ...], ...]
    trop_preserved: bool
    gamma_preserved: bool
    witnesses_cleared: bool = field(default=True)

    def to_json(self) -> dict:
        return {
            "deformed": self.deformed.to_json(),
            "perturbations": [p.to_json() for p in self.perturbations],
            "witnesses": [[[str(x) for x in q] for q in ws] for ws in self.witnesses],
            "samples": len(self.samples),
            "checks": {
                "trop_preserved": self.trop_preserved,
                "gamma_preserved": self.gamma_preserved,
                "witnesses_cleared": self.witnesses_cleared,
            },
        }


def deform_system(
    sys: SeriesSystem,
    witnesses: Sequence[Sequence],
    samples: Sequence | None = None,
    max_steps: int = 64,
) -> DeformationReport:
    """Replace f_r by f_r + eps_r h_r, r = 1..d in order, so that the new member
    no longer vanishes at the witnesses while vert_P and gamma_w (on the
    samples) are unchanged.  eps_r = p^e for the least e in [0, max_steps)
    that passes the recomputed checks."""
    d = sys.dim
    if len(witnesses) != d:
        raise ValueError("give one witness list per member")
    P = sys.domain
    samples = [vec(w) for w in (samples if samples is not None else default_samples(P))]
    if any(not P.contains(w) for w in samples):
        raise ValueError("sample weights must lie in the domain")
    members = list(sys.members)
    perts = []
    wits = tuple(tuple(vec(q) for q in ws) for ws in witnesses)
    for r, ws in enumerate(wits):
        f = members[r]
        if not ws:
            perts.append(Perturbation(r, None, INF, Fraction(0)))
            continue
        if not (f.is_polynomial and f.is_exact):
            raise ValueError(f"member {r + 1} must be an exact polynomial to be deformed")
        h = nonvanishing_poly(f, ws)
        before = _vert_signature(f, P)
        gammas = [gamma_w(f, w, P) for w in samples]
        for e in range(max_steps):
            eps = Fraction(sys.prime) ** e
            g = _add(f, h, eps)
            if g is None or any(g.evaluate(q) == 0 for q in ws):
                continue
            if _vert_signature(g, P) != before:
                continue
            if any(gamma_w(g, w, P) != gm for w, gm in zip(samples, gammas)):
                continue
            members[r] = g
            perts.append(Perturbation(r, h, Fraction(e), eps))
            break
        else:
            raise DeformationError(
                f"member {r + 1}: no eps = p^e with e < {max_steps} preserves the tropical data"
            )
    deformed = SeriesSystem(tuple(members), P)
    trop_ok = all(_vert_signature(a, P) == _vert_signature(b, P) for a, b in zip(sys.members, deformed.members))
    gamma_ok = all(
        gamma_w(a, w, P) == gamma_w(b, w, P) for a, b in zip(sys.members, deformed.members) for w in samples
    )
    cleared = all(deformed.members[r].evaluate(q) != 0 for r, ws in enumerate(wits) for q in ws)
    return DeformationReport(sys, deformed, tuple(perts), wits, tuple(samples), trop_ok, gamma_ok, cleared)


# ---------------------------------------------------------------------------
# exact zero counts


def _sympy_poly(f: ValuedSeries, xs) -> sympy.Expr:
    if not (f.is_polynomial and f.is_exact):
        raise ValueError("exact polynomial members are required")
    expr = sympy.Integer(0)
    for t in f.terms:
        mono = sympy.Integer(1)
        for x, e in zip(xs, t.exponent):
            mono *= x**e
        expr += sympy.Rational(t.exact.numerator, t.exact.denominator) * mono
    return expr


def torus_zero_count(sys: SeriesSystem) -> int | None:
    """Number of common zeros in the torus (algebraic closure), with multiplicity.

    Computed as dim_Q Q[t, z] / (f_1, ..., f_d, 1 - z t_1...t_d) from a
    Groebner basis; ``None`` if that quotient is infinite-dimensional.
    """
    d = sys.dim
    ts = sympy.symbols(f"t1:{d + 1}")
    z = sympy.Symbol("z")
    eqs = [_sympy_poly(f, ts) for f in sys.members]
    eqs.append(1 - z * sympy.Mul(*ts))
    gens = list(ts) + [z]
    G = sympy.groebner(eqs, *gens, order="grevlex", domain=sympy.QQ)
    if G.exprs == [1]:
        return 0
    if not G.is_zero_dimensional:
        return None
    leads = [sympy.Poly(g, *gens).monoms(order="grevlex")[0] for g in G.exprs]
    bounds = []
    for i in range(len(gens)):
        pure = [lm[i] for lm in leads if all(e == 0 for j, e in enumerate(lm) if j != i)]
        bounds.append(min(pure))
    count = 0
    for mono in itertools.product(*[range(b) for b in bounds]):
        if not any(all(m >= l for m, l in zip(mono, lm)) for lm in leads):
            count += 1
    return count


def disk_zero_count(f: ValuedSeries, m=0) -> int:
    """Zeros of a one-variable f with valuation >= m, with multiplicity: the
    largest exponent attaining the minimum at weight m."""
    if f.dim != 1:
        raise ValueError("disk_zero_count is for one-variable series")
    _, terms = vert_w(f, (m,), BoxDomain((Fraction(m),)))
    return max(t.exponent[0] for t in terms)


__all__ = [
    "DeformationError",
    "DeformationReport",
    "Perturbation",
    "SeriesSystem",
    "StableCount",
    "bernstein_bound",
    "default_samples",
    "deform_system",
    "disk_zero_count",
    "is_isolated",
    "is_nondegenerate",
    "local_multiplicity",
    "newton_polytope",
    "nonvanishing_poly",
    "stable_count_bound",
    "torus_zero_count",
    "tropical_intersection",
]
