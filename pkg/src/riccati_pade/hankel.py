"""Hankel determinants H_D^d over the coefficient rings.

The D x D matrix has entry (i, j) = coefficient i+j+d-1 of the chosen
ansatz series (1-based i, j; the top-left entry is coefficient d+1).  Three
backends share the same assembly:

* :func:`hankel_eval` -- BigReal/Dual elimination with partial pivoting,
  returning the determinant and its derivative with respect to the seeded
  unknown (Newton's method consumes both);
* :func:`hankel_eval_exact` -- exact rational determinant via fraction-free
  Bareiss elimination on a denominator-cleared integer matrix;
* :func:`hankel_series` -- truncated xi-series determinant.  The truncated
  series ring has zero divisors, so a division-free expansion is used
  instead of pivoted elimination.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from fractions import Fraction
from math import gcd

from .potentials import PotentialSpec, q_coeffs
from .rings import BigReal, Dual, XiSeries, digits_for_dimension
from .series import GeometrySpec, ansatz_coeffs, needed_jmax, q_index_needed

UNKNOWN_E = "E"
UNKNOWN_V0 = "v0"


@dataclass(frozen=True)
class HankelProblem:
    """One determinant condition: geometry, ansatz, size, offset, unknown."""

    potential: PotentialSpec
    geometry: GeometrySpec
    ansatz: str
    D: int
    d: int
    unknown: str            # "E" (fixed v0) or "v0" (fixed E)
    fixed_value: object     # Fraction or BigReal

    def __post_init__(self):
        if self.D < 1:
            raise ValueError("dimension D must be >= 1")
        if self.d < 0:
            raise ValueError("offset d must be >= 0")
        if self.ansatz not in ("f", "g"):
            raise ValueError("ansatz must be 'f' or 'g'")
        if self.unknown not in (UNKNOWN_E, UNKNOWN_V0):
            raise ValueError("unknown must be 'E' or 'v0'")

    def with_dimension(self, D: int) -> "HankelProblem":
        return replace(self, D=D)

    def auto_digits(self) -> int:
        return digits_for_dimension(self.D)


def _series_for(problem: HankelProblem, x, fixed):
    """Ansatz coefficients 0..2D+d-1 with E/v0 split per problem.unknown."""
    jmax = needed_jmax(problem.D, problem.d)
    qmax = q_index_needed(problem.geometry, problem.ansatz, jmax)
    if problem.unknown == UNKNOWN_E:
        E, v0 = x, fixed
    else:
        E, v0 = fixed, x
    Q = q_coeffs(problem.potential, E, v0, qmax)
    return ansatz_coeffs(Q, problem.geometry, problem.ansatz, jmax)


def hankel_rows(coeffs, D: int, d: int) -> list[list]:
    return [[coeffs[i + j + d - 1] for j in range(1, D + 1)]
            for i in range(1, D + 1)]


def det_dual(rows: list[list[Dual]]) -> Dual:
    """Determinant of a Dual matrix by elimination, pivoting on |value|.

    If a whole pivot column vanishes exactly in the value component the
    determinant value is exactly 0; the derivative is then recovered from
    d(det) = sum_c det(values with column c replaced by derivatives), where
    only the zero column's term survives.
    """
    D = len(rows)
    m = [row[:] for row in rows]
    digits = m[0][0].val.digits
    det = Dual.constant(1, digits)
    sign = 1
    for k in range(D):
        piv, pval = k, abs(m[k][k].val.x)
        for i in range(k + 1, D):
            a = abs(m[i][k].val.x)
            if a > pval:
                piv, pval = i, a
        if pval == 0:
            der = _zero_column_derivative(rows, k, digits)
            return Dual(BigReal(0, digits), der)
        if piv != k:
            m[k], m[piv] = m[piv], m[k]
            sign = -sign
        pivot = m[k][k]
        det = det * pivot
        for i in range(k + 1, D):
            f = m[i][k] / pivot
            mi, mk = m[i], m[k]
            for j in range(k + 1, D):
                mi[j] = mi[j] - f * mk[j]
    if sign < 0:
        det = -det
    return det


def _zero_column_derivative(rows, col_hint: int, digits: int) -> BigReal:
    # Columns of the eliminated matrix are not those of the original, so
    # locate an exactly-zero original column; if none, fall back to summing
    # the column-replacement determinants.
    D = len(rows)
    zero_cols = [c for c in range(D)
                 if all(rows[i][c].val.is_zero() for i in range(D))]
    if zero_cols:
        cols = zero_cols[:1]
    else:
        cols = range(D)
    total = BigReal(0, digits)
    for c in cols:
        vals = [[rows[i][j].der if j == c else rows[i][j].val
                 for j in range(D)] for i in range(D)]
        total = total + _det_bigreal(vals)
    return total


def _det_bigreal(rows: list[list[BigReal]]) -> BigReal:
    D = len(rows)
    m = [row[:] for row in rows]
    digits = m[0][0].digits
    det = BigReal(1, digits)
    sign = 1
    for k in range(D):
        piv, pval = k, abs(m[k][k].x)
        for i in range(k + 1, D):
            a = abs(m[i][k].x)
            if a > pval:
                piv, pval = i, a
        if pval == 0:
            return BigReal(0, digits)
        if piv != k:
            m[k], m[piv] = m[piv], m[k]
            sign = -sign
        pivot = m[k][k]
        det = det * pivot
        for i in range(k + 1, D):
            f = m[i][k] / pivot
            mi, mk = m[i], m[k]
            for j in range(k + 1, D):
                mi[j] = mi[j] - f * mk[j]
    return -det if sign < 0 else det


def det_exact(rows: list[list[Fraction]]) -> Fraction:
    """Exact determinant of a rational matrix (integer Bareiss after
    clearing row denominators)."""
    D = len(rows)
    if D == 0:
        return Fraction(1)
    scale = Fraction(1)
    m = []
    for row in rows:
        lcm = 1
        for a in row:
            den = a.denominator
            lcm = lcm * den // gcd(lcm, den)
        scale = scale / lcm
        m.append([int(a * lcm) for a in row])
    sign = 1
    prev = 1
    for k in range(D - 1):
        if m[k][k] == 0:
            for i in range(k + 1, D):
                if m[i][k] != 0:
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return Fraction(0)
        pkk = m[k][k]
        for i in range(k + 1, D):
            mik = m[i][k]
            mi, mk = m[i], m[k]
            for j in range(k + 1, D):
                mi[j] = (pkk * mi[j] - mik * mk[j]) // prev
            mi[k] = 0
        prev = pkk
    return sign * scale * m[D - 1][D - 1]


def det_series(rows: list[list[XiSeries]]) -> XiSeries:
    """Division-free determinant over the truncated-series ring.

    Expansion over column subsets (bitmask dynamic program); exact to the
    common truncation order, no pivoting needed.
    """
    D = len(rows)
    if D > 16:
        raise ValueError("series determinant limited to D <= 16")
    order = rows[0][0].order
    zero = XiSeries.constant(0, order)
    # dp[mask] = det of the block (rows row+1..D-1) x (columns in mask);
    # each row adds one column, expanding along the block's first row.
    dp = {0: XiSeries.constant(1, order)}
    for row in range(D - 1, -1, -1):
        ndp: dict[int, XiSeries] = {}
        for mask, sub in dp.items():
            if sub.is_zero():
                continue
            below = 0
            for c in range(D):
                bit = 1 << c
                if mask & bit:
                    below += 1
                    continue
                entry = rows[row][c]
                if not entry.is_zero():
                    term = entry * sub
                    if below % 2:
                        term = -term
                    key = mask | bit
                    acc = ndp.get(key)
                    ndp[key] = term if acc is None else acc + term
        if not ndp:
            return zero
        dp = ndp
    return dp.get((1 << D) - 1, zero)


def _det_dual_fast(rows: list[list[Dual]], digits: int) -> Dual:
    """Same contract as det_dual, but eliminating on raw mpfr pairs with a
    single context (the hot path for Newton iteration)."""
    import gmpy2

    from .rings import _ctx

    D = len(rows)
    ctx = _ctx(digits)
    mul, sub, add, div = ctx.mul, ctx.sub, ctx.add, ctx.div
    V = [[e.val.x for e in row] for row in rows]
    W = [[e.der.x for e in row] for row in rows]
    detv = gmpy2.mpfr(1)
    detd = gmpy2.mpfr(0)
    sign = 1
    for k in range(D):
        piv, pval = k, abs(V[k][k])
        for i in range(k + 1, D):
            a = abs(V[i][k])
            if a > pval:
                piv, pval = i, a
        if pval == 0:
            der = _zero_column_derivative(rows, k, digits)
            return Dual(BigReal(0, digits), der)
        if piv != k:
            V[k], V[piv] = V[piv], V[k]
            W[k], W[piv] = W[piv], W[k]
            sign = -sign
        vkk, wkk = V[k][k], W[k][k]
        detd = add(mul(detd, vkk), mul(detv, wkk))
        detv = mul(detv, vkk)
        Vk, Wk = V[k], W[k]
        for i in range(k + 1, D):
            Vi, Wi = V[i], W[i]
            fv = div(Vi[k], vkk)
            fd = div(sub(Wi[k], mul(fv, wkk)), vkk)
            for j in range(k + 1, D):
                vkj = Vk[j]
                Vi[j] = sub(Vi[j], mul(fv, vkj))
                Wi[j] = sub(Wi[j], add(mul(fv, Wk[j]), mul(fd, vkj)))
    if sign < 0:
        detv = ctx.minus(detv)
        detd = ctx.minus(detd)
    return Dual(BigReal._raw(detv, digits), BigReal._raw(detd, digits))


def _det_value_fast(rows: list[list], digits: int):
    """Value-only determinant on raw mpfr entries (used by sign scans)."""
    import gmpy2

    from .rings import _ctx

    D = len(rows)
    ctx = _ctx(digits)
    mul, sub, div = ctx.mul, ctx.sub, ctx.div
    V = [[e.x for e in row] for row in rows]
    det = gmpy2.mpfr(1)
    sign = 1
    for k in range(D):
        piv, pval = k, abs(V[k][k])
        for i in range(k + 1, D):
            a = abs(V[i][k])
            if a > pval:
                piv, pval = i, a
        if pval == 0:
            return BigReal(0, digits)
        if piv != k:
            V[k], V[piv] = V[piv], V[k]
            sign = -sign
        vkk = V[k][k]
        det = mul(det, vkk)
        Vk = V[k]
        for i in range(k + 1, D):
            Vi = V[i]
            fv = div(Vi[k], vkk)
            for j in range(k + 1, D):
                Vi[j] = sub(Vi[j], mul(fv, Vk[j]))
    if sign < 0:
        det = ctx.minus(det)
    return BigReal._raw(det, digits)


def hankel_eval(problem: HankelProblem, x) -> Dual:
    """Determinant and d/dx at a point; x may be a BigReal (seeded here) or
    an already-seeded Dual."""
    if isinstance(x, Dual):
        xd = x
        digits = xd.val.digits
    else:
        if not isinstance(x, BigReal):
            x = BigReal(x, problem.auto_digits())
        digits = x.digits
        xd = Dual.seed(x, digits)
    fixed = Dual.constant(
        problem.fixed_value if not isinstance(problem.fixed_value, BigReal)
        else BigReal(problem.fixed_value, digits), digits)
    coeffs = _series_for(problem, xd, fixed)
    return _det_dual_fast(hankel_rows(coeffs, problem.D, problem.d), digits)


def hankel_eval_value(problem: HankelProblem, x) -> BigReal:
    """Determinant value only (no derivative); roughly 3x cheaper than
    hankel_eval, used by sign scans and bisection."""
    if not isinstance(x, BigReal):
        x = BigReal(x, problem.auto_digits())
    digits = x.digits
    fixed = BigReal(problem.fixed_value, digits)
    coeffs = _series_for(problem, x, fixed)
    return _det_value_fast(hankel_rows(coeffs, problem.D, problem.d), digits)


def hankel_eval_exact(problem: HankelProblem, x: Fraction) -> Fraction:
    """Bit-exact determinant at rational arguments."""
    fixed = problem.fixed_value
    if isinstance(fixed, BigReal):
        raise TypeError("exact evaluation needs a rational fixed_value")
    coeffs = _series_for(problem, Fraction(x), Fraction(fixed))
    return det_exact(hankel_rows(coeffs, problem.D, problem.d))


def hankel_series(problem: HankelProblem, x: XiSeries,
                  fixed: XiSeries) -> XiSeries:
    """Determinant as a truncated xi-series with exact coefficients."""
    if x.order != fixed.order:
        raise ValueError("series truncation orders must match")
    coeffs = _series_for(problem, x, fixed)
    return det_series(hankel_rows(coeffs, problem.D, problem.d))
