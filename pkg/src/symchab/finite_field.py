"""Small prime-power fields F_{p^e} with integer-encoded elements.

An element ``c_0 + c_1 a + ... + c_{e-1} a^{e-1}`` (``a`` a root of the fixed
modulus) is stored as the integer ``sum c_i p^i``.  The modulus is the monic
irreducible of degree ``e`` with the least such encoding, so encodings are
reproducible across runs.
"""

from __future__ import annotations

from functools import lru_cache

from sympy.polys.domains import ZZ
from sympy.polys.galoistools import gf_irreducible_p

from .core.valuation import check_prime

#: log/exp tables are built up to this field size
TABLE_LIMIT = 1 << 20


def _digits(n: int, p: int, e: int) -> list[int]:
    out = []
    for _ in range(e):
        n, r = divmod(n, p)
        out.append(r)
    return out


def _undigits(ds, p: int) -> int:
    n = 0
    for c in reversed(ds):
        n = n * p + c
    return n


@lru_cache(maxsize=None)
def least_irreducible(p: int, e: int) -> tuple[int, ...]:
    """Coefficients (low to high, monic) of the least irreducible of degree e over F_p."""
    check_prime(p)
    if e < 1:
        raise ValueError("degree must be >= 1")
    for n in range(p**e):
        low = _digits(n, p, e)
        coeffs_high = [1] + low[::-1]
        if gf_irreducible_p(coeffs_high, p, ZZ):
            return tuple(low) + (1,)
    raise AssertionError("no irreducible polynomial found")  # pragma: no cover


class GF:
    """F_{p^e}.  Use :func:`field` to get the cached instance."""

    def __init__(self, p: int, e: int):
        check_prime(p)
        self.p = p
        self.e = e
        self.q = p**e
        self.modulus = least_irreducible(p, e)
        self._exp: list[int] | None = None
        self._log: list[int] | None = None
        if self.q <= TABLE_LIMIT:
            self._build_tables()

    def __repr__(self) -> str:
        return f"GF({self.p}^{self.e})"

    # arithmetic -------------------------------------------------------

    def add(self, a: int, b: int) -> int:
        if self.p == 2:
            return a ^ b
        if self.e == 1:
            return (a + b) % self.p
        p = self.p
        out, place = 0, 1
        while a or b:
            out += ((a % p + b % p) % p) * place
            a //= p
            b //= p
            place *= p
        return out

    def neg(self, a: int) -> int:
        if self.p == 2:
            return a
        return _undigits([(-c) % self.p for c in _digits(a, self.p, self.e)], self.p)

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def _slow_mul(self, a: int, b: int) -> int:
        p, e = self.p, self.e
        da, db = _digits(a, p, e), _digits(b, p, e)
        prod = [0] * (2 * e - 1)
        for i, x in enumerate(da):
            if x:
                for j, y in enumerate(db):
                    prod[i + j] = (prod[i + j] + x * y) % p
        mod = self.modulus
        for k in range(len(prod) - 1, e - 1, -1):
            c = prod[k]
            if c:
                for j in range(e + 1):
                    prod[k - e + j] = (prod[k - e + j] - c * mod[j]) % p
        return _undigits(prod[:e], p)

    def _build_tables(self) -> None:
        q = self.q
        if q == 2:
            self._exp, self._log = [1], [0, 0]
            return
        for gen in range(2, q):
            exp = [1]
            x = gen
            while x != 1:
                exp.append(x)
                x = self._slow_mul(x, gen)
            if len(exp) == q - 1:
                break
        log = [0] * q
        for i, x in enumerate(exp):
            log[x] = i
        self._exp, self._log = exp, log

    def mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        if self._exp is None:
            return self._slow_mul(a, b)
        return self._exp[(self._log[a] + self._log[b]) % (self.q - 1)]

    def pow(self, a: int, n: int) -> int:
        if n == 0:
            return 1
        if a == 0:
            return 0
        if self._exp is not None:
            return self._exp[(self._log[a] * n) % (self.q - 1)]
        out = 1
        while n:
            if n & 1:
                out = self.mul(out, a)
            a = self.mul(a, a)
            n >>= 1
        return out

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("inverse of 0")
        return self.pow(a, self.q - 2)

    def frobenius(self, a: int) -> int:
        return self.pow(a, self.p)

    def from_int(self, n: int) -> int:
        """Image of an integer under Z -> F_p -> F_q."""
        return n % self.p

    def elements(self) -> range:
        return range(self.q)

    def poly_eval(self, coeffs, x: int) -> int:
        """Evaluate an integer polynomial (low-to-high coefficients) at x."""
        acc = 0
        for c in reversed(coeffs):
            acc = self.add(self.mul(acc, x), self.from_int(c))
        return acc

    # characters and roots -------------------------------------------------

    def is_square(self, a: int) -> bool:
        if a == 0 or self.p == 2:
            return True
        if self._log is not None:
            return self._log[a] % 2 == 0
        return self.pow(a, (self.q - 1) // 2) == 1

    def sqrt(self, a: int) -> int | None:
        """A square root (the one with even log, or a^(q/2) in characteristic 2)."""
        if a == 0:
            return 0
        if self.p == 2:
            return self.pow(a, self.q // 2)
        if not self.is_square(a):
            return None
        if self._log is not None:
            return self._exp[self._log[a] // 2]
        return next(y for y in range(1, self.q) if self.mul(y, y) == a)

    def trace(self, a: int) -> int:
        """Absolute trace to F_p, as an integer in [0, p)."""
        t = 0
        x = a
        for _ in range(self.e):
            t = self.add(t, x)
            x = self.frobenius(x)
        return t

    def artin_schreier_roots(self, c: int) -> list[int]:
        """Solutions of z^2 + z = c (characteristic 2)."""
        if self.p != 2:
            raise ValueError("Artin-Schreier equation z^2 + z = c is used in characteristic 2 only")
        if self.trace(c) != 0:
            return []
        table = self._as_table()
        return list(table.get(c, ()))

    @lru_cache(maxsize=None)
    def _as_table(self) -> dict[int, tuple[int, ...]]:
        out: dict[int, list[int]] = {}
        for z in range(self.q):
            out.setdefault(self.mul(z, z) ^ z, []).append(z)
        return {k: tuple(v) for k, v in out.items()}


@lru_cache(maxsize=None)
def field(p: int, e: int) -> GF:
    return GF(p, e)
