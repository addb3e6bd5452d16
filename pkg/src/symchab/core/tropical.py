"""Height graphs, vert sets, tropicalizations and local Newton polytopes."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .._exact import feasible_point, nullspace, rank, solve, sub, vec
from ..polytope import Polytope, convex_hull
from .series import POLYNOMIAL, BoxDomain, Exponent, ValuedSeries, ValuedTerm
from .valuation import Val, delta_slope, val_p


class TailError(ValueError):
    """The stored support does not determine the requested vert set."""


class DomainError(ValueError):
    """A weight vector lies outside the declared domain."""


def _default_domain(f: ValuedSeries, domain: BoxDomain | None) -> BoxDomain:
    if domain is None:
        return BoxDomain.uniform(f.dim)
    if domain.dim != f.dim:
        raise ValueError("domain dimension does not match the series")
    return domain


def _check_tail(f: ValuedSeries, slopes: Sequence[Fraction]) -> None:
    """Make sure no omitted term can reach the minimum at weights >= slopes.

    An omitted term ``t_i^n`` of a certified pure part has valuation at least
    ``-v(n)``, and it is strictly beaten by the stored ``t_i^k`` term once
    ``n > k + delta_slope(k, p, w_i)``; so the stored part must reach that
    degree.
    """
    if f.tail.kind == "polynomial":
        return
    for i, (k, known) in enumerate(zip(f.tail.ks, f.tail.known)):
        if k is None or known is None:
            continue
        s = Fraction(slopes[i])
        if s <= 0:
            raise TailError(f"variable {i + 1}: truncated pure part is not controlled at weight {s}")
        cutoff = k + delta_slope(k, f.prime, s)
        if known < cutoff:
            raise TailError(
                f"variable {i + 1}: stored through degree {known}, need {cutoff} for weights >= {s}"
            )


def _active_terms(f: ValuedSeries, m: Sequence[Fraction]) -> list[ValuedTerm]:
    """Drop terms strictly dominated everywhere on the box: u' <= u coordinatewise
    and smaller value at the corner m."""
    terms = list(f.terms)
    corner = [t.value_at(m) for t in terms]
    keep = []
    for i, t in enumerate(terms):
        dominated = False
        for j, s in enumerate(terms):
            if j != i and corner[j] < corner[i] and all(a <= b for a, b in zip(s.exponent, t.exponent)):
                dominated = True
                break
        if not dominated:
            keep.append(t)
    return keep


def vert_w(f: ValuedSeries, w, domain: BoxDomain | None = None) -> tuple[Val, frozenset[ValuedTerm]]:
    """(m_f(w), vert_w(f)): the least term valuation at weight w and the terms attaining it."""
    P = _default_domain(f, domain)
    w = vec(w)
    if not P.contains(w):
        raise DomainError(f"w = {tuple(map(str, w))} is outside the domain")
    _check_tail(f, w)
    values = [(t.value_at(w), t) for t in f.terms]
    m = min(v for v, _ in values)
    return m, frozenset(t for v, t in values if v == m)


def trop_membership(f: ValuedSeries, w, domain: BoxDomain | None = None) -> bool:
    """True iff the minimum at w is attained at least twice."""
    return len(vert_w(f, w, domain)[1]) >= 2


def _minimal_region(t: ValuedTerm, others: Iterable[ValuedTerm], m: Sequence[Fraction]):
    """Rows of {x >= 0 : t is minimal at w = m + x} as A x <= b."""
    a_ub, b_ub = [], []
    for s in others:
        if s is t:
            continue
        diff = sub(t.exponent, s.exponent)
        a_ub.append(diff)
        # v_t + <t, m+x> <= v_s + <s, m+x>
        b_ub.append(s.value_at(m) - t.value_at(m))
    return a_ub, b_ub


def vert_domain_witnesses(f: ValuedSeries, domain: BoxDomain | None = None) -> dict[ValuedTerm, tuple]:
    """vert_{P}(f) with, for each member, a weight in P at which it is minimal."""
    P = _default_domain(f, domain)
    _check_tail(f, P.m)
    active = _active_terms(f, P.m)
    out = {}
    for t in active:
        a_ub, b_ub = _minimal_region(t, active, P.m)
        x = feasible_point(a_ub, b_ub, nvars=f.dim) if a_ub else (Fraction(0),) * f.dim
        if x is not None:
            out[t] = tuple(mi + xi for mi, xi in zip(P.m, x))
    return out


def vert_domain(f: ValuedSeries, domain: BoxDomain | None = None) -> frozenset[ValuedTerm]:
    """The finite union of vert_w(f) over w in the box.

    Each candidate term is tested exactly: it belongs iff its normal cone in
    the lower hull of the lifted support (the set of w where it is minimal)
    meets the box, decided by a phase-one simplex over the rationals.
    """
    return frozenset(vert_domain_witnesses(f, domain))


def gamma_w(f: ValuedSeries, w, domain: BoxDomain | None = None) -> Polytope:
    """Convex hull of the exponents in vert_w(f)."""
    _, terms = vert_w(f, w, domain)
    return convex_hull([t.exponent for t in terms], f.dim)


# ---------------------------------------------------------------------------
# tropical cells (d <= 3)


@dataclass(frozen=True)
class Polyhedron:
    """{w : eq_rows w = eq_rhs, ub_rows w <= ub_rhs}, pointed in practice
    because the box constraints are always included."""

    dim: int
    eq_rows: tuple
    eq_rhs: tuple
    ub_rows: tuple
    ub_rhs: tuple

    def contains(self, w) -> bool:
        w = vec(w)
        return all(sum(a * x for a, x in zip(r, w)) == b for r, b in zip(self.eq_rows, self.eq_rhs)) and all(
            sum(a * x for a, x in zip(r, w)) <= b for r, b in zip(self.ub_rows, self.ub_rhs)
        )

    def _recession_contains(self, r) -> bool:
        return all(sum(a * x for a, x in zip(row, r)) == 0 for row in self.eq_rows) and all(
            sum(a * x for a, x in zip(row, r)) <= 0 for row in self.ub_rows
        )

    def vertices(self) -> list[tuple[Fraction, ...]]:
        rows = list(self.eq_rows) + list(self.ub_rows)
        rhs = list(self.eq_rhs) + list(self.ub_rhs)
        n_eq = len(self.eq_rows)
        found = set()
        for combo in itertools.combinations(range(len(rows)), self.dim):
            if any(i not in combo for i in range(n_eq)) and n_eq <= self.dim:
                continue
            sol = solve([rows[i] for i in combo], [rhs[i] for i in combo])
            if sol is not None and self.contains(sol):
                found.add(sol)
        return sorted(found)

    def rays(self) -> list[tuple[Fraction, ...]]:
        rows = list(self.eq_rows) + list(self.ub_rows)
        found = set()
        for combo in itertools.combinations(range(len(rows)), self.dim - 1):
            sub_rows = [rows[i] for i in combo]
            if self.dim > 1 and rank(sub_rows) != self.dim - 1:
                continue
            ns = nullspace(sub_rows, self.dim)
            if len(ns) != 1:
                continue
            for sign in (1, -1):
                r = tuple(sign * x for x in ns[0])
                if self._recession_contains(r):
                    lead = next(abs(x) for x in r if x != 0)
                    found.add(tuple(x / lead for x in r))
        return sorted(found)

    def is_empty(self) -> bool:
        return not self.vertices()

    def affine_dim(self) -> int:
        vs = self.vertices()
        if not vs:
            return -1
        dirs = [sub(v, vs[0]) for v in vs[1:]] + self.rays()
        return rank(dirs) if dirs else 0

    def is_subset_of(self, other: "Polyhedron") -> bool:
        return all(other.contains(v) for v in self.vertices()) and all(
            other._recession_contains(r) for r in self.rays()
        )


@dataclass(frozen=True)
class TropCell:
    """Closed region where the two given terms tie for the minimum."""

    terms: tuple[Exponent, Exponent]
    region: Polyhedron
    vertices: tuple
    rays: tuple
    dim: int

    def contains(self, w) -> bool:
        return self.region.contains(w)

    def to_json(self) -> dict:
        return {
            "terms": [list(u) for u in self.terms],
            "dim": self.dim,
            "vertices": [[str(x) for x in v] for v in self.vertices],
            "rays": [[str(x) for x in r] for r in self.rays],
        }


def _pair_region(a: ValuedTerm, b: ValuedTerm, terms: list[ValuedTerm], P: BoxDomain) -> Polyhedron:
    d = P.dim
    eq_rows = (sub(a.exponent, b.exponent),)
    eq_rhs = (b.val - a.val,)
    ub_rows, ub_rhs = [], []
    for c in terms:
        if c is a or c is b:
            continue
        ub_rows.append(sub(a.exponent, c.exponent))
        ub_rhs.append(c.val - a.val)
    for i in range(d):
        ub_rows.append(tuple(Fraction(-1 if j == i else 0) for j in range(d)))
        ub_rhs.append(-P.m[i])
    return Polyhedron(d, eq_rows, eq_rhs, tuple(ub_rows), tuple(ub_rhs))


def trop_cells(f: ValuedSeries, domain: BoxDomain | None = None) -> list[TropCell]:
    """Maximal closed cells of the tie locus of f inside the box (d <= 3)."""
    P = _default_domain(f, domain)
    if f.dim > 3:
        raise ValueError("trop_cells supports d <= 3; use trop_membership in higher dimension")
    verts = sorted(vert_domain(f, P), key=lambda t: t.exponent)
    regions = []
    for a, b in itertools.combinations(verts, 2):
        reg = _pair_region(a, b, verts, P)
        vs = reg.vertices()
        if not vs:
            continue
        regions.append(((a.exponent, b.exponent), reg, vs, reg.rays()))
    cells = []
    dims = [reg.affine_dim() for _, reg, _, _ in regions]
    for i, (pair, reg, vs, rs) in enumerate(regions):
        if dims[i] < f.dim - 1:
            if any(
                j != i and (dims[j] > dims[i] or j < i) and reg.is_subset_of(regions[j][1])
                for j in range(len(regions))
            ):
                continue
        elif any(
            j < i and dims[j] == dims[i] and reg.is_subset_of(regions[j][1]) and regions[j][1].is_subset_of(reg)
            for j in range(len(regions))
        ):
            continue
        cells.append(TropCell(pair, reg, tuple(vs), tuple(rs), dims[i]))
    return cells


# ---------------------------------------------------------------------------
# auxiliary polynomials and truncation


def auxiliary_polynomial(f: ValuedSeries, S: Iterable[Exponent], domain: BoxDomain | None = None) -> ValuedSeries:
    """Restriction of f to the exponents in S, which must contain pi(vert_P(f)).

    On the box the result has the same vert sets, hence the same
    tropicalization and local Newton polytopes, as f.
    """
    P = _default_domain(f, domain)
    S = {tuple(u) for u in S}
    missing = [t.exponent for t in vert_domain(f, P) if t.exponent not in S]
    if missing:
        raise ValueError(f"S misses vert exponents {sorted(missing)}")
    if f.tail.kind == "pure":
        for u in S:
            for i, (k, known) in enumerate(zip(f.tail.ks, f.tail.known)):
                if k is not None and known is not None and u[i] > known and f.term(u) is None:
                    raise ValueError(f"exponent {u} lies beyond the stored support; coefficient unknown")
    return f.restrict(S)


def truncation_cutoffs(f: ValuedSeries, ell: int) -> tuple[int | None, ...]:
    """Per-variable degree k_i + delta(k_i, p, ell) beyond which terms are dropped."""
    if f.tail.kind != "pure":
        raise ValueError("truncation needs a pure tail certificate")
    slope = Fraction(1, ell)
    return tuple(None if k is None else k + delta_slope(k, f.prime, slope) for k in f.tail.ks)


def truncate_pure(F: ValuedSeries, P: BoxDomain | None, ell: int) -> ValuedSeries:
    """Drop every t_i^n with n > k_i + delta(k_i, p, ell).

    Valid on boxes with every lower bound >= 1/ell (the eps -> 0 limit of
    [1/ell - eps, inf)); the default domain is exactly [1/ell, inf)^d.  On
    such boxes the dropped terms are strictly beaten by the t_i^{k_i} term, so
    vert sets are unchanged.
    """
    if ell < 1:
        raise ValueError("ell must be a positive integer")
    if F.tail.kind != "pure":
        raise ValueError("truncate_pure needs a pure tail certificate")
    if P is None:
        P = BoxDomain.uniform(F.dim, Fraction(1, ell))
    if P.dim != F.dim:
        raise ValueError("domain dimension does not match the series")
    if any(mi < Fraction(1, ell) for mi in P.m):
        raise DomainError(f"truncation at ell={ell} is only certified for weights >= 1/{ell}")
    cutoffs = truncation_cutoffs(F, ell)
    for i, (c, known) in enumerate(zip(cutoffs, F.tail.known)):
        if c is not None and known is not None and known < c:
            raise TailError(f"variable {i + 1}: stored through degree {known}, cutoff is {c}")
    keep = []
    for t in F.terms:
        nz = [i for i, e in enumerate(t.exponent) if e]
        if nz and cutoffs[nz[0]] is not None and t.exponent[nz[0]] > cutoffs[nz[0]]:
            continue
        keep.append(t)
    return ValuedSeries(F.prime, F.dim, tuple(keep), POLYNOMIAL, F.pure)


def pure_power_series(prime: int, coeff, n_terms: int) -> ValuedSeries:
    """sum_{n=1}^{n_terms} coeff(n) t^n as a one-variable polynomial (test helper)."""
    terms = {}
    for n in range(1, n_terms + 1):
        c = Fraction(coeff(n))
        if c:
            terms[(n,)] = c
    return ValuedSeries.from_coeffs(prime, terms, dim=1)


__all__ = [
    "DomainError",
    "Polyhedron",
    "TailError",
    "TropCell",
    "auxiliary_polynomial",
    "gamma_w",
    "trop_cells",
    "trop_membership",
    "truncate_pure",
    "truncation_cutoffs",
    "val_p",
    "vert_domain",
    "vert_domain_witnesses",
    "vert_w",
]
