from __future__ import annotations

import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from fixtures import CURATED, pure_part
from oracles import argmin_exponents, grid_vert_union, rational_grid, tie_scan
from symchab.core import (
    INF,
    BoxDomain,
    DomainError,
    TailCertificate,
    TailError,
    ValuedSeries,
    ValuedTerm,
    antiderivative,
    assemble_pure,
    auxiliary_polynomial,
    gamma_w,
    trop_cells,
    trop_membership,
    truncate_pure,
    val_p,
    vert_domain,
    vert_domain_witnesses,
    vert_w,
)
from symchab.polytope import convex_hull

F = Fraction


def S(coeffs, p=2, **kw):
    return ValuedSeries.from_coeffs(p, coeffs, **kw)


LINE = S({(0, 0): 2, (1, 0): 1, (0, 1): 1})


def exps(terms):
    return sorted(t.exponent for t in terms)


# -- valuations ---------------------------------------------------------------


def test_val_p_examples():
    assert val_p(8, 2) == 3
    assert val_p(0, 2) == INF
    assert val_p(F(4, 3), 2) == 2
    assert val_p(F(1, 12), 2) == -2


def test_val_p_rejects_composite():
    with pytest.raises(ValueError):
        val_p(3, 4)


def test_inf_is_absorbing_maximum():
    assert INF + F(5) == INF
    assert min(INF, F(-3)) == -3
    assert F(10**9) < INF


@given(st.integers(-10**6, 10**6).filter(bool), st.integers(-10**6, 10**6).filter(bool), st.sampled_from([2, 3, 5, 7]))
def test_val_p_is_a_valuation(a, b, p):
    assert val_p(a * b, p) == val_p(a, p) + val_p(b, p)
    if a + b:
        assert val_p(a + b, p) >= min(val_p(a, p), val_p(b, p))


# -- series construction ------------------------------------------------------


def test_zero_series_rejected():
    with pytest.raises(ValueError):
        S({(0,): 0})


def test_duplicate_exponent_rejected():
    with pytest.raises(ValueError):
        ValuedSeries(2, 1, (ValuedTerm((1,), F(0)), ValuedTerm((1,), F(1))))


def test_exact_value_must_match_valuation():
    with pytest.raises(ValueError):
        ValuedSeries(2, 1, (ValuedTerm((1,), F(0), F(2)),))


def test_pure_flag_requires_pure_support():
    with pytest.raises(ValueError):
        ValuedSeries.from_coeffs(2, {(1, 1): 1}, pure=True)


def test_json_round_trip():
    f = ValuedSeries(
        2, 2, (ValuedTerm((0, 0), F(1, 2)), ValuedTerm((1, 0), F(0), F(3)), ValuedTerm((0, 2), F(-1), F(1, 2)))
    )
    assert ValuedSeries.from_json(f.to_json()) == f
    part = antiderivative(S({(0,): 1, (2,): 1}), known_through=5)
    assert ValuedSeries.from_json(part.to_json()) == part


# -- vert sets ------------------------------------------------------------------


def test_vert_w_examples():
    m, terms = vert_w(LINE, (1, 1))
    assert m == 1 and len(terms) == 3
    m, terms = vert_w(LINE, (2, 3))
    assert m == 1 and exps(terms) == [(0, 0)]
    mono = S({(1,): 5}, p=2)
    for w in (0, 1, F(7, 3)):
        assert len(vert_w(mono, (w,))[1]) == 1


def test_vert_w_outside_domain():
    with pytest.raises(DomainError):
        vert_w(LINE, (-1, 0))
    with pytest.raises(DomainError):
        vert_w(LINE, (1, 1), BoxDomain((2, 0)))


def test_vert_domain_examples():
    assert exps(vert_domain(LINE)) == [(0, 0), (0, 1), (1, 0)]
    f = S({(0,): 1, (1,): 4})
    # 4t has value 2 + w > 0 for all w >= 0: the constant always wins
    assert exps(vert_domain(f)) == [(0,)]
    assert exps(vert_domain(f, BoxDomain((3,)))) == [(0,)]
    assert grid_vert_union(f, [0]) == {(0,)}
    assert grid_vert_union(f, [3]) == {(0,)}


def test_vert_domain_witnesses_are_genuine():
    f = S({(0, 0): 1, (3, 0): F(1, 4), (0, 2): 8, (1, 1): F(1, 2), (2, 2): 1})
    for t, w in vert_domain_witnesses(f).items():
        assert BoxDomain.uniform(2).contains(w)
        assert t in vert_w(f, w)[1]


@st.composite
def small_polys(draw, dim=2, max_terms=6):
    n = draw(st.integers(1, max_terms))
    exps_ = draw(
        st.lists(st.tuples(*[st.integers(0, 4)] * dim), min_size=n, max_size=n, unique=True)
    )
    vals = draw(st.lists(st.integers(-3, 6), min_size=n, max_size=n))
    return ValuedSeries.from_valuations(2, {u: v for u, v in zip(exps_, vals)}, dim=dim)


@given(small_polys(), st.tuples(st.fractions(0, 6, max_denominator=4), st.fractions(0, 6, max_denominator=4)))
def test_vert_w_nonempty_and_attains_minimum(f, w):
    m, terms = vert_w(f, w)
    assert terms
    assert all(t.value_at(w) == m for t in terms)
    assert all(t.value_at(w) >= m for t in f.terms)
    assert {t.exponent for t in terms} == argmin_exponents(f, w)


@given(small_polys())
def test_vert_domain_contains_grid_union(f):
    # the exact vert set contains every argmin seen on a grid, and each member has a witness
    exact = {t.exponent for t in vert_domain(f)}
    assert grid_vert_union(f, [0, 0], F(1, 2), 16) <= exact
    for t, w in vert_domain_witnesses(f).items():
        assert t in vert_w(f, w)[1]


@given(small_polys(dim=1, max_terms=5))
def test_vert_domain_one_variable_matches_fine_grid(f):
    # in one variable every breakpoint has denominator <= 4 here, so a fine grid is exact
    exact = {t.exponent for t in vert_domain(f)}
    assert grid_vert_union(f, [0], F(1, 12), 12 * 12) == exact


# -- membership and cells -------------------------------------------------------


def test_trop_membership_examples():
    assert trop_membership(LINE, (2, 1))
    assert not trop_membership(LINE, (2, 3))
    assert not trop_membership(S({(1, 1): 3}), (1, 2))


def test_trop_cells_line():
    cells = trop_cells(LINE)
    assert len(cells) == 3
    by_pair = {c.terms: c for c in cells}
    diag = by_pair[((0, 1), (1, 0))]
    assert diag.dim == 1 and diag.vertices == ((0, 0), (1, 1)) and not diag.rays
    assert by_pair[((0, 0), (1, 0))].rays == ((0, 1),)  # w1 = 1 <= w2
    assert by_pair[((0, 0), (0, 1))].rays == ((1, 0),)  # w2 = 1 <= w1


def test_trop_cells_small_cases():
    assert trop_cells(S({(2, 1): 1})) == []
    cells = trop_cells(S({(0,): 1, (1,): 1}))
    assert len(cells) == 1 and cells[0].vertices == ((0,),) and cells[0].dim == 0


def test_trop_cells_rejects_dim_4():
    with pytest.raises(ValueError):
        trop_cells(S({(0, 0, 0, 0): 1, (1, 0, 0, 0): 1}))




@pytest.mark.parametrize("f", CURATED, ids=lambda f: str(f))
def test_membership_matches_tie_scan_and_cells(f):
    d = f.dim
    step, count = (F(1, 4), 32) if d <= 2 else (F(1, 3), 10)
    cells = trop_cells(f)
    for w in rational_grid([0] * d, step, count):
        mem = trop_membership(f, w)
        assert mem == tie_scan(f, w)
        if BoxDomain.uniform(d).is_interior(w):
            assert mem == any(c.contains(w) for c in cells)


# -- gamma_w and auxiliary polynomials ------------------------------------------


def test_gamma_w_examples():
    assert gamma_w(LINE, (1, 1)) == convex_hull([(0, 0), (1, 0), (0, 1)])
    assert gamma_w(LINE, (2, 1)) == convex_hull([(0, 0), (0, 1)])
    assert gamma_w(S({(2, 3): 7}), (1, 1)).vertices == ((2, 3),)


def test_auxiliary_polynomial_identity_and_errors():
    assert auxiliary_polynomial(LINE, LINE.exponents()) == LINE
    with pytest.raises(ValueError):
        auxiliary_polynomial(LINE, [(0, 0), (1, 0)])


def log_series(n_terms=60):
    """sum_{n>=1} t^n / n over Q_2, stored through n_terms."""
    omega = S({(n,): 1 for n in range(n_terms)})
    return antiderivative(omega)


def test_auxiliary_polynomial_of_log_series():
    F_ = log_series()
    aux = auxiliary_polynomial(F_, [(n,) for n in range(5)], BoxDomain((F(1, 2),)))
    assert aux.is_polynomial
    assert {t.exponent: t.exact for t in aux.terms} == {(1,): 1, (2,): F(1, 2), (3,): F(1, 3), (4,): F(1, 4)}


def test_dropping_non_vert_term_keeps_membership():
    f = S({(0, 0): 1, (1, 0): 1, (0, 1): 1, (2, 2): 1024})
    assert (2, 2) not in {t.exponent for t in vert_domain(f)}
    g = auxiliary_polynomial(f, [(0, 0), (1, 0), (0, 1)])
    for w in rational_grid([0, 0], F(1, 3), 10):
        assert trop_membership(f, w) == trop_membership(g, w)


def unit_multiple(c: Fraction, p: int, r: random.Random) -> Fraction:
    while True:
        u = Fraction(r.choice([1, -1]) * r.randrange(1, 50), r.randrange(1, 50))
        if val_p(u, p) == 0:
            return c * u


@pytest.mark.parametrize("seed", range(8))
def test_same_valuations_same_tropical_data(seed):
    r = random.Random(seed)
    f = S({(0, 0): 4, (1, 0): 1, (0, 1): 2, (2, 1): F(1, 2), (1, 2): 8})
    g = S({t.exponent: unit_multiple(t.exact, 2, r) for t in f.terms})
    assert {(t.exponent, t.val) for t in vert_domain(f)} == {(t.exponent, t.val) for t in vert_domain(g)}
    for w in rational_grid([0, 0], F(1, 2), 10):
        assert trop_membership(f, w) == trop_membership(g, w)
        assert gamma_w(f, w) == gamma_w(g, w)


# -- pure series ------------------------------------------------------------------


def test_antiderivative_examples():
    assert [(t.exponent, t.exact) for t in antiderivative(S({(0,): 1}))] == [((1,), 1)]
    k = 5
    part = antiderivative(S({(k - 1,): 1}))
    assert [(t.exponent, t.exact) for t in part] == [((k,), F(1, k))]
    assert part.tail.ks == (k,)
    part = antiderivative(S({(0,): 1, (1,): 1, (2,): 1}))
    assert [t.val for t in part] == [0, -1, 0]
    with pytest.raises(ValueError):
        antiderivative(S({(0,): F(1, 2)}))


def test_assemble_pure_examples():
    t1 = S({(1,): 1})
    f = assemble_pure([t1, t1], constant_val=F(0))
    assert exps(f.terms) == [(0, 0), (0, 1), (1, 0)] and all(t.val == 0 for t in f.terms)
    four = S({(1,): 1, (2,): F(1, 2), (3,): F(1, 3), (4,): F(1, 4)})
    assert len(assemble_pure([four, four])) == 9
    with pytest.raises(ValueError):
        assemble_pure([S({(1,): 1}), S({(1,): 1}, p=3)])


@given(st.lists(st.integers(1, 6), min_size=1, max_size=3), st.booleans())
def test_assemble_pure_is_pure(ks, with_const):
    parts = [antiderivative(S({(k - 1,): 1, (k + 2,): 3})) for k in ks]
    f = assemble_pure(parts, constant_val=F(0) if with_const else INF)
    assert f.pure
    assert all(sum(1 for e in t.exponent if e) <= 1 for t in f.terms)
    assert f.tail.kind == "pure" and f.tail.ks == tuple(ks)


def test_truncate_pure_cutoffs():
    for k, cutoff in ((1, 4), (4, 4), (3, 8), (2, 4)):
        F_ = assemble_pure([pure_part(k, 40)])
        T = truncate_pure(F_, None, 2)
        assert max(t.exponent[0] for t in T) == cutoff


def test_truncate_pure_refuses_small_box():
    F_ = assemble_pure([log_series()])
    with pytest.raises(DomainError):
        truncate_pure(F_, BoxDomain((F(1, 100),)), 2)
    # the refusal is necessary: at w = 1/100 a far term wins
    _, terms = vert_w(log_series(200), (F(1, 100),))
    assert max(t.exponent[0] for t in terms) > 4


def test_truncated_pure_tail_check():
    short = antiderivative(S({(n,): 1 for n in range(3)}), known_through=2)
    with pytest.raises(TailError):
        vert_w(short, (F(1, 2),))
    longer = antiderivative(S({(n,): 1 for n in range(6)}), known_through=5)
    assert vert_w(longer, (F(1, 2),))[1]


@given(st.lists(st.integers(1, 5), min_size=2, max_size=2), st.integers(0, 10**6))
def test_truncation_preserves_gamma(ks, seed):
    r = random.Random(seed)
    parts = [pure_part(k, 40, r) for k in ks]
    F_ = assemble_pure(parts, constant_val=F(0))
    P = BoxDomain.uniform(2, F(1, 2))
    T = truncate_pure(F_, P, 2)
    late = F_.restrict([u for u in F_.exponents() if max(u) <= 30])
    for _ in range(100):
        w = tuple(F(1, 2) + F(r.randrange(0, 40), r.randrange(1, 9)) for _ in range(2))
        assert gamma_w(T, w, P) == gamma_w(late, w, P)


def test_tail_certificate_validation():
    with pytest.raises(ValueError):
        TailCertificate("pure", (0,))
    with pytest.raises(ValueError):
        TailCertificate("other")
    with pytest.raises(ValueError):
        # t^2 must carry valuation -v(2) = -1
        ValuedSeries(2, 1, (ValuedTerm((2,), F(0)),), TailCertificate("pure", (2,)), pure=True)
