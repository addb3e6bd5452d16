"""Exact rational linear algebra and a small feasibility LP.

Everything here works on ``fractions.Fraction`` so that geometric predicates
(rank, sidedness, feasibility) are decided without rounding.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

Vector = tuple[Fraction, ...]


def as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, float):
        raise TypeError("floating point input is not accepted; pass int, str or Fraction")
    return Fraction(x)


def vec(xs) -> Vector:
    return tuple(as_fraction(x) for x in xs)


def dot(a: Sequence, b: Sequence) -> Fraction:
    return sum((x * y for x, y in zip(a, b)), Fraction(0))


def sub(a: Sequence, b: Sequence) -> Vector:
    return tuple(x - y for x, y in zip(a, b))


def add(a: Sequence, b: Sequence) -> Vector:
    return tuple(x + y for x, y in zip(a, b))


def row_echelon(rows: Sequence[Sequence]) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form; returns (rows, pivot columns)."""
    m = [[as_fraction(x) for x in r] for r in rows]
    if not m:
        return [], []
    ncols = len(m[0])
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = 1 / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m[:r], pivots


def rank(rows: Sequence[Sequence]) -> int:
    return len(row_echelon(rows)[1])


def nullspace(rows: Sequence[Sequence], ncols: int) -> list[Vector]:
    """Basis of {x : rows @ x = 0}."""
    if not rows:
        return [tuple(Fraction(int(i == j)) for j in range(ncols)) for i in range(ncols)]
    red, pivots = row_echelon(rows)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        x = [Fraction(0)] * ncols
        x[f] = Fraction(1)
        for r, pc in enumerate(pivots):
            x[pc] = -red[r][f]
        basis.append(tuple(x))
    return basis


def solve(a: Sequence[Sequence], b: Sequence) -> Vector | None:
    """Unique solution of the square system a x = b, or None if singular."""
    n = len(a)
    aug = [list(vec(row)) + [as_fraction(bi)] for row, bi in zip(a, b)]
    red, pivots = row_echelon(aug)
    if len(pivots) != n or pivots[-1] == n:
        return None
    return tuple(red[i][n] for i in range(n))


def det(a: Sequence[Sequence]) -> Fraction:
    m = [list(vec(r)) for r in a]
    n = len(m)
    out = Fraction(1)
    for c in range(n):
        piv = next((i for i in range(c, n) if m[i][c] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != c:
            m[c], m[piv] = m[piv], m[c]
            out = -out
        out *= m[c][c]
        for i in range(c + 1, n):
            if m[i][c] != 0:
                f = m[i][c] / m[c][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[c])]
    return out


def feasible_point(
    a_ub: Sequence[Sequence] = (),
    b_ub: Sequence = (),
    a_eq: Sequence[Sequence] = (),
    b_eq: Sequence = (),
    nvars: int | None = None,
) -> Vector | None:
    """Find x >= 0 with a_ub x <= b_ub and a_eq x = b_eq, or return None.

    Phase-one simplex on a dense Fraction tableau with Bland's rule, so it
    always terminates and the answer is exact.
    """
    if nvars is None:
        nvars = len(a_ub[0]) if a_ub else len(a_eq[0])
    rows: list[list[Fraction]] = []
    rhs: list[Fraction] = []
    n_slack = len(a_ub)
    # columns: x (nvars) | slacks (n_slack) | artificials (added per row)
    needs_art: list[bool] = []
    for i, (row, bi) in enumerate(zip(a_ub, b_ub)):
        r = list(vec(row)) + [Fraction(int(j == i)) for j in range(n_slack)]
        bi = as_fraction(bi)
        if bi < 0:
            r = [-x for x in r]
            bi = -bi
            needs_art.append(True)
        else:
            needs_art.append(False)
        rows.append(r)
        rhs.append(bi)
    for row, bi in zip(a_eq, b_eq):
        r = list(vec(row)) + [Fraction(0)] * n_slack
        bi = as_fraction(bi)
        if bi < 0:
            r = [-x for x in r]
            bi = -bi
        rows.append(r)
        rhs.append(bi)
        needs_art.append(True)
    m = len(rows)
    if m == 0:
        return tuple(Fraction(0) for _ in range(nvars))
    art_rows = [i for i in range(m) if needs_art[i]]
    ncols = nvars + n_slack + len(art_rows)
    for i in range(m):
        rows[i] += [Fraction(0)] * len(art_rows)
    basis = [0] * m
    for i in range(m):
        if needs_art[i]:
            col = nvars + n_slack + art_rows.index(i)
            rows[i][col] = Fraction(1)
            basis[i] = col
        else:
            basis[i] = nvars + i
    art_start = nvars + n_slack
    # minimize the sum of artificials; cost holds reduced costs
    cost = [Fraction(int(j >= art_start)) for j in range(ncols)]
    for i in art_rows:
        cost = [c - x for c, x in zip(cost, rows[i])]
    while True:
        enter = next((j for j in range(ncols) if cost[j] < 0), None)
        if enter is None:
            break
        best = None
        leave = None
        for i in range(m):
            if rows[i][enter] > 0:
                ratio = rhs[i] / rows[i][enter]
                if best is None or ratio < best or (ratio == best and basis[i] < basis[leave]):
                    best, leave = ratio, i
        if leave is None:
            # unbounded phase-one objective cannot happen (bounded below by 0)
            raise RuntimeError("phase-one simplex became unbounded")
        piv = rows[leave][enter]
        rows[leave] = [x / piv for x in rows[leave]]
        rhs[leave] /= piv
        for i in range(m):
            if i != leave and rows[i][enter] != 0:
                f = rows[i][enter]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[leave])]
                rhs[i] -= f * rhs[leave]
        f = cost[enter]
        cost = [x - f * y for x, y in zip(cost, rows[leave])]
        basis[leave] = enter
    if any(rhs[i] != 0 for i in range(m) if basis[i] >= art_start):
        return None
    x = [Fraction(0)] * nvars
    for i, bcol in enumerate(basis):
        if bcol < nvars:
            x[bcol] = rhs[i]
    return tuple(x)


def free_feasible_point(
    a_ub: Sequence[Sequence] = (),
    b_ub: Sequence = (),
    a_eq: Sequence[Sequence] = (),
    b_eq: Sequence = (),
    nvars: int | None = None,
) -> Vector | None:
    """Like :func:`feasible_point` but with unrestricted-sign variables."""
    if nvars is None:
        nvars = len(a_ub[0]) if a_ub else len(a_eq[0])

    def split(rows):
        return [list(vec(r)) + [-x for x in vec(r)] for r in rows]

    sol = feasible_point(split(a_ub), b_ub, split(a_eq), b_eq, 2 * nvars)
    if sol is None:
        return None
    return tuple(sol[i] - sol[nvars + i] for i in range(nvars))


def cone_is_trivial(a_ub: Sequence[Sequence], a_eq: Sequence[Sequence], nvars: int) -> bool:
    """True iff {x : a_ub x <= 0, a_eq x = 0} is the single point 0."""
    for j in range(nvars):
        for sign in (1, -1):
            row = [Fraction(0)] * nvars
            row[j] = Fraction(-sign)  # -sign*x_j <= -1
            sol = free_feasible_point(
                list(a_ub) + [row],
                [0] * len(a_ub) + [-1],
                a_eq,
                [0] * len(a_eq),
                nvars,
            )
            if sol is not None:
                return False
    return True
