"""Sparse multivariate power series with exact and/or valuation-only coefficients."""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Iterable, Mapping

from .valuation import INF, Val, check_prime, parse_val, val_p

Exponent = tuple[int, ...]


def _fmt_val(v: Val) -> str:
    return "inf" if v == INF else str(v)


@dataclass(frozen=True)
class ValuedTerm:
    """One monomial ``a_u x^u`` known through ``v(a_u)`` and possibly ``a_u`` itself."""

    exponent: Exponent
    val: Val
    exact: Fraction | None = None

    def value_at(self, w) -> Fraction:
        """v(a_u) + <u, w>, the term's valuation when v(x) = w."""
        return self.val + sum((Fraction(u) * wi for u, wi in zip(self.exponent, w)), Fraction(0))

    def __str__(self) -> str:
        mono = "*".join(
            f"t{i + 1}" if e == 1 else f"t{i + 1}^{e}" for i, e in enumerate(self.exponent) if e
        ) or "1"
        coeff = str(self.exact) if self.exact is not None else f"[v={_fmt_val(self.val)}]"
        return f"{coeff}*{mono}"


@dataclass(frozen=True)
class TailCertificate:
    """Why the stored support is enough.

    ``polynomial``: the stored terms are the whole series.

    ``pure``: for each variable ``i`` with ``ks[i]`` set, the one-variable part
    in ``t_i`` is an antiderivative whose derivative has coefficients of
    valuation >= 0, and ``ks[i]`` is the least exponent whose derivative
    coefficient is a unit (so the ``t_i^k`` term has valuation ``-v(k)``).
    ``known[i]`` is the degree through which that part is stored completely
    (``None`` means the part has no omitted terms).  Variables with
    ``ks[i] is None`` are stored completely.
    """

    kind: str = "polynomial"
    ks: tuple[int | None, ...] = ()
    known: tuple[int | None, ...] = ()

    def __post_init__(self):
        if self.kind not in ("polynomial", "pure"):
            raise ValueError(f"unknown tail kind {self.kind!r}")
        if self.kind == "pure":
            if not self.ks or all(k is None for k in self.ks):
                raise ValueError("pure tail certificate needs at least one k_i")
            if any(k is not None and k < 1 for k in self.ks):
                raise ValueError("k_i must be >= 1")
            if not self.known:
                object.__setattr__(self, "known", (None,) * len(self.ks))
            if len(self.known) != len(self.ks):
                raise ValueError("known and ks must have the same length")


POLYNOMIAL = TailCertificate()


@dataclass(frozen=True)
class BoxDomain:
    """P_m = {w : w_i >= m_i}."""

    m: tuple[Fraction, ...]

    def __post_init__(self):
        m = tuple(Fraction(x) for x in self.m)
        if any(x < 0 for x in m):
            raise ValueError("box domain lower bounds must be >= 0")
        object.__setattr__(self, "m", m)

    @classmethod
    def uniform(cls, dim: int, lower=0) -> "BoxDomain":
        return cls((Fraction(lower),) * dim)

    @property
    def dim(self) -> int:
        return len(self.m)

    def contains(self, w) -> bool:
        return len(w) == self.dim and all(Fraction(wi) >= mi for wi, mi in zip(w, self.m))

    def is_interior(self, w) -> bool:
        return len(w) == self.dim and all(Fraction(wi) > mi for wi, mi in zip(w, self.m))


@dataclass(frozen=True)
class ValuedSeries:
    prime: int
    dim: int
    terms: tuple[ValuedTerm, ...]
    tail: TailCertificate = POLYNOMIAL
    pure: bool = False
    _index: dict = field(default=None, init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        check_prime(self.prime)
        terms = tuple(sorted(self.terms, key=lambda t: t.exponent))
        if not terms:
            raise ValueError("the zero series is not allowed")
        index = {}
        for t in terms:
            if len(t.exponent) != self.dim:
                raise ValueError(f"exponent {t.exponent} does not have length {self.dim}")
            if any((not isinstance(e, int)) or e < 0 for e in t.exponent):
                raise ValueError(f"exponent {t.exponent} must be nonnegative integers")
            if t.exponent in index:
                raise ValueError(f"duplicate exponent {t.exponent}")
            if t.val == INF:
                raise ValueError("zero coefficients must not be stored")
            if t.exact is not None and val_p(t.exact, self.prime) != t.val:
                raise ValueError(f"valuation of {t.exact} does not match stored {t.val}")
            index[t.exponent] = t
        if self.pure and not all(sum(1 for e in t.exponent if e) <= 1 for t in terms):
            raise ValueError("pure series may only contain terms C*t_i^N")
        if self.tail.kind == "pure":
            if not self.pure:
                raise ValueError("a pure tail certificate requires a pure series")
            if len(self.tail.ks) != self.dim:
                raise ValueError("tail certificate has wrong number of variables")
            for i, (k, known) in enumerate(zip(self.tail.ks, self.tail.known)):
                if k is None:
                    continue
                e = tuple(k if j == i else 0 for j in range(self.dim))
                if e not in index or index[e].val != -val_p(k, self.prime):
                    raise ValueError(
                        f"variable {i}: the t^{k} term must be stored with valuation -v({k})"
                    )
                if known is not None and known < self.max_degree_in(i, terms):
                    raise ValueError("known degree is below the stored support")
        object.__setattr__(self, "terms", terms)
        object.__setattr__(self, "_index", index)

    # constructors -------------------------------------------------------

    @classmethod
    def from_coeffs(cls, prime: int, coeffs: Mapping, dim: int | None = None, **kw) -> "ValuedSeries":
        """Build from ``{exponent: rational}``; zero coefficients are dropped."""
        items = [(tuple(u), Fraction(c)) for u, c in coeffs.items()]
        if dim is None:
            dim = len(items[0][0]) if items else 0
        terms = [ValuedTerm(u, val_p(c, prime), c) for u, c in items if c != 0]
        return cls(prime, dim, tuple(terms), **kw)

    @classmethod
    def from_valuations(cls, prime: int, vals: Mapping, dim: int | None = None, **kw) -> "ValuedSeries":
        items = [(tuple(u), parse_val(v)) for u, v in vals.items()]
        if dim is None:
            dim = len(items[0][0]) if items else 0
        return cls(prime, dim, tuple(ValuedTerm(u, v) for u, v in items), **kw)

    # accessors ----------------------------------------------------------

    def __iter__(self):
        return iter(self.terms)

    def __len__(self) -> int:
        return len(self.terms)

    def term(self, u: Exponent) -> ValuedTerm | None:
        return self._index.get(tuple(u))

    def exponents(self) -> list[Exponent]:
        return [t.exponent for t in self.terms]

    @property
    def is_polynomial(self) -> bool:
        return self.tail.kind == "polynomial"

    @property
    def is_exact(self) -> bool:
        return all(t.exact is not None for t in self.terms)

    @staticmethod
    def max_degree_in(i: int, terms: Iterable[ValuedTerm]) -> int:
        return max((t.exponent[i] for t in terms), default=0)

    def constant(self) -> ValuedTerm | None:
        return self.term((0,) * self.dim)

    def monomials(self) -> list[Exponent]:
        """M(f), in a fixed order: total degree, then t1 before t2 before ..."""
        return sorted(self.exponents(), key=lambda u: (sum(u), tuple(-e for e in u)))

    def evaluate(self, point) -> Fraction:
        if not self.is_polynomial or not self.is_exact:
            raise ValueError("only exact polynomials can be evaluated")
        pt = [Fraction(x) for x in point]
        total = Fraction(0)
        for t in self.terms:
            mono = Fraction(1)
            for x, e in zip(pt, t.exponent):
                if e:
                    mono *= x**e
            total += t.exact * mono
        return total

    def restrict(self, exps: Iterable[Exponent]) -> "ValuedSeries":
        """Keep only the stored terms whose exponent lies in ``exps``, as a polynomial."""
        keep = set(map(tuple, exps))
        return ValuedSeries(
            self.prime, self.dim, tuple(t for t in self.terms if t.exponent in keep), POLYNOMIAL, self.pure
        )

    def with_terms(self, terms: Iterable[ValuedTerm]) -> "ValuedSeries":
        return replace(self, terms=tuple(terms))

    def __str__(self) -> str:
        return " + ".join(map(str, self.terms))

    # JSON -----------------------------------------------------------------

    def to_json(self) -> dict:
        out_terms = []
        for t in self.terms:
            if t.exact is not None:
                out_terms.append(
                    {"exp": list(t.exponent), "num": str(t.exact.numerator), "den": str(t.exact.denominator)}
                )
            else:
                out_terms.append({"exp": list(t.exponent), "val": str(t.val)})
        tail: dict = {"kind": self.tail.kind}
        if self.tail.kind == "pure":
            tail["k"] = list(self.tail.ks)
            tail["known"] = list(self.tail.known)
        doc = {"prime": self.prime, "dim": self.dim, "terms": out_terms, "tail": tail}
        if self.pure:
            doc["pure"] = True
        return doc

    @classmethod
    def from_json(cls, doc) -> "ValuedSeries":
        if isinstance(doc, str):
            doc = json.loads(doc)
        prime = doc["prime"]
        dim = doc["dim"]
        terms = []
        for t in doc["terms"]:
            u = tuple(t["exp"])
            if "num" in t:
                c = Fraction(int(t["num"]), int(t.get("den", "1")))
                if c == 0:
                    continue
                terms.append(ValuedTerm(u, val_p(c, prime), c))
            else:
                terms.append(ValuedTerm(u, parse_val(t["val"])))
        tdoc = doc.get("tail", {"kind": "polynomial"})
        if tdoc["kind"] == "pure":
            ks = tuple(tdoc["k"])
            tail = TailCertificate("pure", ks, tuple(tdoc.get("known") or (None,) * len(ks)))
        else:
            tail = TailCertificate(tdoc["kind"])
        pure = doc.get("pure", tail.kind == "pure")
        return cls(prime, dim, tuple(terms), tail, pure)


def is_pure_support(exps: Iterable[Exponent]) -> bool:
    return all(sum(1 for e in u if e) <= 1 for u in exps)


def antiderivative(omega: ValuedSeries, known_through: int | None = None) -> ValuedSeries:
    """Term-wise antiderivative of a one-variable series with integral coefficients.

    ``known_through`` is the degree through which ``omega`` is stored
    completely; ``None`` means ``omega`` is exactly its stored terms.  The
    result carries a pure tail certificate whose k is one more than the
    order of vanishing of the reduction of ``omega``.

    >>> w = ValuedSeries.from_coeffs(2, {(0,): 1, (1,): 1, (2,): 1})
    >>> [t.val for t in antiderivative(w)]
    [Fraction(0, 1), Fraction(-1, 1), Fraction(0, 1)]
    """
    if omega.dim != 1:
        raise ValueError("antiderivative expects a one-variable series")
    if any(t.val < 0 for t in omega.terms):
        raise ValueError("omega must have coefficients of valuation >= 0")
    units = [t.exponent[0] for t in omega.terms if t.val == 0]
    if not units:
        raise ValueError("omega has no unit coefficient in its stored support; k is undetermined")
    k = min(units) + 1
    p = omega.prime
    terms = []
    for t in omega.terms:
        n = t.exponent[0] + 1
        if t.exact is not None:
            c = t.exact / n
            terms.append(ValuedTerm((n,), val_p(c, p), c))
        else:
            terms.append(ValuedTerm((n,), t.val - val_p(n, p)))
    known = None if known_through is None else known_through + 1
    return ValuedSeries(p, 1, tuple(terms), TailCertificate("pure", (k,), (known,)), pure=True)


def assemble_pure(
    parts: list[ValuedSeries],
    constant_val: Val = Fraction(0),
    constant: Fraction | None = None,
) -> ValuedSeries:
    """f_1(t_1) + ... + f_d(t_d) + C as one pure d-variable series.

    The constant is exact if ``constant`` is given; otherwise it is a
    valuation-only term of valuation ``constant_val`` (``INF`` for none).
    """
    if not parts:
        raise ValueError("need at least one part")
    p = parts[0].prime
    d = len(parts)
    terms = []
    ks: list[int | None] = []
    known: list[int | None] = []
    for i, f in enumerate(parts):
        if f.prime != p:
            raise ValueError("all parts must share the prime")
        if f.dim != 1:
            raise ValueError("parts must be one-variable series")
        if f.constant() is not None:
            raise ValueError("parts must have no constant term; pass the constant separately")
        for t in f.terms:
            u = tuple(t.exponent[0] if j == i else 0 for j in range(d))
            terms.append(ValuedTerm(u, t.val, t.exact))
        if f.tail.kind == "pure":
            ks.append(f.tail.ks[0])
            known.append(f.tail.known[0])
        else:
            ks.append(None)
            known.append(None)
    if constant is not None:
        constant = Fraction(constant)
        if constant != 0:
            terms.append(ValuedTerm((0,) * d, val_p(constant, p), constant))
    elif constant_val != INF:
        terms.append(ValuedTerm((0,) * d, parse_val(constant_val)))
    if any(k is not None for k in ks):
        tail = TailCertificate("pure", tuple(ks), tuple(known))
    else:
        tail = POLYNOMIAL
    return ValuedSeries(p, d, tuple(terms), tail, pure=True)
