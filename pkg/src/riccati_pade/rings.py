"""Coefficient rings for Hankel-determinant pipelines.

Every quantity in this package is computed in one of four interchangeable
rings:

* :class:`BigReal` -- arbitrary-precision real (MPFR via gmpy2), precision
  carried per value rather than in a global context;
* :class:`fractions.Fraction` (aliased :data:`Rational`) -- exact rationals;
* :class:`Dual` -- first-order dual number over BigReal, propagating the
  exact derivative with respect to the seeded unknown;
* :class:`XiSeries` -- truncated power series in the expansion variable xi
  with exact rational coefficients.

All ring values are immutable after construction.  Arithmetic between two
BigReals is performed at the larger of the two precisions; no thread-global
precision state is used (each precision has its own cached gmpy2 context).
"""

from __future__ import annotations

from fractions import Fraction

import gmpy2

Rational = Fraction

_LOG2_10 = 3.321928094887362
_GUARD_BITS = 12


def _bits(digits: int) -> int:
    return int(digits * _LOG2_10) + _GUARD_BITS


_CTX_CACHE: dict[int, "gmpy2.context"] = {}


def _ctx(digits: int):
    c = _CTX_CACHE.get(digits)
    if c is None:
        c = gmpy2.context(precision=_bits(digits))
        _CTX_CACHE[digits] = c
    return c


def digits_for_dimension(D: int) -> int:
    """Default working precision for a dimension-D Hankel computation.

    Hankel determinants are severely ill-conditioned; this budget keeps a
    comfortable margin over the number of correct digits the determinant
    roots deliver at that dimension.
    """
    return 30 + 5 * D


class BigReal:
    """Arbitrary-precision real number with per-value decimal precision.

    ``digits`` is the working precision in decimal digits.  Arithmetic
    between two BigReals rounds the result at ``max`` of the operand
    precisions.  ints, Fractions and decimal strings coerce to the partner
    value's precision.
    """

    __slots__ = ("x", "digits")

    def __init__(self, value, digits: int | None = None):
        if isinstance(value, BigReal):
            digits = digits if digits is not None else value.digits
            self.x = gmpy2.mpfr(value.x, precision=_bits(digits))
        else:
            if digits is None:
                digits = 30
            if isinstance(value, Fraction):
                value = gmpy2.mpq(value.numerator, value.denominator)
            self.x = gmpy2.mpfr(value, precision=_bits(digits))
        if digits <= 0:
            raise ValueError("digits must be a positive integer")
        self.digits = digits

    # internal fast path: wrap an mpfr already rounded at `digits`
    @classmethod
    def _raw(cls, x, digits: int) -> "BigReal":
        r = object.__new__(cls)
        r.x = x
        r.digits = digits
        return r

    def _coerce(self, other):
        if isinstance(other, BigReal):
            return other
        if isinstance(other, (int, Fraction, str)):
            return BigReal(other, self.digits)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        d = max(self.digits, o.digits)
        return BigReal._raw(_ctx(d).add(self.x, o.x), d)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        d = max(self.digits, o.digits)
        return BigReal._raw(_ctx(d).sub(self.x, o.x), d)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        d = max(self.digits, o.digits)
        return BigReal._raw(_ctx(d).sub(o.x, self.x), d)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        d = max(self.digits, o.digits)
        return BigReal._raw(_ctx(d).mul(self.x, o.x), d)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        if o.x == 0:
            raise ZeroDivisionError("BigReal division by zero")
        d = max(self.digits, o.digits)
        return BigReal._raw(_ctx(d).div(self.x, o.x), d)

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return o.__truediv__(self)

    def __neg__(self):
        return BigReal._raw(_ctx(self.digits).minus(self.x), self.digits)

    def __abs__(self):
        return BigReal._raw(abs(self.x), self.digits)

    def __pow__(self, n):
        if isinstance(n, int):
            d = self.digits
            return BigReal._raw(_ctx(d).pow(self.x, n), d)
        o = self._coerce(n)
        if o is NotImplemented:
            return NotImplemented
        d = max(self.digits, o.digits)
        return BigReal._raw(_ctx(d).pow(self.x, o.x), d)

    def _cmp_key(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return o.x

    def __eq__(self, other):
        k = self._cmp_key(other)
        return NotImplemented if k is NotImplemented else self.x == k

    def __lt__(self, other):
        k = self._cmp_key(other)
        return NotImplemented if k is NotImplemented else self.x < k

    def __le__(self, other):
        k = self._cmp_key(other)
        return NotImplemented if k is NotImplemented else self.x <= k

    def __gt__(self, other):
        k = self._cmp_key(other)
        return NotImplemented if k is NotImplemented else self.x > k

    def __ge__(self, other):
        k = self._cmp_key(other)
        return NotImplemented if k is NotImplemented else self.x >= k

    def __hash__(self):
        return hash((self.x, self.digits))

    def __float__(self):
        return float(self.x)

    def __bool__(self):
        return self.x != 0

    def is_zero(self) -> bool:
        return self.x == 0

    def ulp(self) -> "BigReal":
        """One unit in the last (decimal) place of this value."""
        if self.x == 0:
            return BigReal(Fraction(1, 10 ** self.digits), self.digits)
        e = int(gmpy2.floor(_ctx(self.digits).log10(abs(self.x))))
        return BigReal(Fraction(10) ** (e - self.digits + 1), self.digits)

    def close_to(self, other, ulps: int = 10) -> bool:
        """Tolerance comparison; default 10 units in the last place."""
        o = other if isinstance(other, BigReal) else BigReal(other, self.digits)
        return abs(self - o) <= self.ulp() * ulps

    def to_decimal(self) -> str:
        """Decimal-string form carrying all `digits` significant digits."""
        if gmpy2.is_nan(self.x):
            return "nan"
        if self.x == 0:
            return "0"
        mant, exp, _ = self.x.digits(10, self.digits)
        sign = ""
        if mant.startswith("-"):
            sign, mant = "-", mant[1:]
        return f"{sign}{mant[0]}.{mant[1:]}e{exp - 1:+d}"

    def __repr__(self):
        return f"BigReal('{self.to_decimal()}', digits={self.digits})"


def big(value, digits: int = 30) -> BigReal:
    """Shorthand constructor accepting int/str/Fraction/BigReal."""
    return BigReal(value, digits)


def sqrt(a: BigReal) -> BigReal:
    return BigReal._raw(_ctx(a.digits).sqrt(a.x), a.digits)


def exp(a: BigReal) -> BigReal:
    return BigReal._raw(_ctx(a.digits).exp(a.x), a.digits)


def log(a: BigReal) -> BigReal:
    return BigReal._raw(_ctx(a.digits).log(a.x), a.digits)


def log10(a: BigReal) -> BigReal:
    return BigReal._raw(_ctx(a.digits).log10(a.x), a.digits)


def e_const(digits: int = 30) -> BigReal:
    return exp(BigReal(1, digits))


def floor_log10_abs(a: BigReal) -> int:
    """floor(log10 |a|); raises on zero."""
    if a.x == 0:
        raise ValueError("floor_log10_abs of zero")
    return int(gmpy2.floor(_ctx(a.digits).log10(abs(a.x))))


class Dual:
    """First-order dual number (value, derivative) over BigReal.

    Seeding the active unknown as ``(x, 1)`` and all constants as ``(c, 0)``
    makes ``der`` the exact partial derivative of any +,-,*,/ pipeline.
    """

    __slots__ = ("val", "der")

    def __init__(self, val, der=None, digits: int | None = None):
        if not isinstance(val, BigReal):
            val = BigReal(val, digits)
        if der is None:
            der = BigReal(0, val.digits)
        elif not isinstance(der, BigReal):
            der = BigReal(der, val.digits)
        self.val = val
        self.der = der

    @classmethod
    def seed(cls, value, digits: int) -> "Dual":
        """The active unknown: (value, 1)."""
        return cls(BigReal(value, digits), BigReal(1, digits))

    @classmethod
    def constant(cls, value, digits: int) -> "Dual":
        return cls(BigReal(value, digits), BigReal(0, digits))

    def _coerce(self, other):
        if isinstance(other, Dual):
            return other
        if isinstance(other, (int, Fraction, BigReal)):
            v = other if isinstance(other, BigReal) else BigReal(other, self.val.digits)
            return Dual(v, BigReal(0, v.digits))
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return Dual(self.val + o.val, self.der + o.der)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return Dual(self.val - o.val, self.der - o.der)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return Dual(o.val - self.val, o.der - self.der)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return Dual(self.val * o.val, self.der * o.val + self.val * o.der)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        if o.val.is_zero():
            raise ZeroDivisionError("Dual division by zero value part")
        v = self.val / o.val
        return Dual(v, (self.der - v * o.der) / o.val)

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return o.__truediv__(self)

    def __neg__(self):
        return Dual(-self.val, -self.der)

    def __repr__(self):
        return f"Dual({self.val!r}, {self.der!r})"


class XiSeries:
    """Power series in xi truncated at a fixed order, exact rational coefficients.

    ``coeffs[k]`` multiplies xi^k; terms of order above the truncation order
    are discarded by every operation.  Division requires an invertible
    (nonzero) constant term of the divisor.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs, order: int | None = None):
        cs = [Fraction(c) for c in coeffs]
        if order is not None:
            if len(cs) > order + 1:
                cs = cs[: order + 1]
            else:
                cs.extend([Fraction(0)] * (order + 1 - len(cs)))
        if not cs:
            raise ValueError("XiSeries needs at least the constant term")
        self.coeffs = tuple(cs)

    @classmethod
    def constant(cls, c, order: int) -> "XiSeries":
        return cls([Fraction(c)], order)

    @classmethod
    def variable(cls, order: int) -> "XiSeries":
        """The series xi itself."""
        if order < 1:
            raise ValueError("order must be >= 1 to represent xi")
        return cls([Fraction(0), Fraction(1)], order)

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    def __getitem__(self, k: int) -> Fraction:
        return self.coeffs[k]

    def valuation(self) -> int | None:
        """Index of first nonzero coefficient, or None if identically zero."""
        for k, c in enumerate(self.coeffs):
            if c != 0:
                return k
        return None

    def is_zero(self) -> bool:
        return self.valuation() is None

    def _coerce(self, other):
        if isinstance(other, XiSeries):
            if other.order != self.order:
                raise ValueError("XiSeries truncation orders differ")
            return other
        if isinstance(other, (int, Fraction)):
            return XiSeries.constant(other, self.order)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return XiSeries([a + b for a, b in zip(self.coeffs, o.coeffs)])

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return XiSeries([a - b for a, b in zip(self.coeffs, o.coeffs)])

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return o.__sub__(self)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        K = self.order
        out = [Fraction(0)] * (K + 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j in range(K + 1 - i):
                b = o.coeffs[j]
                if b != 0:
                    out[i + j] += a * b
        return XiSeries(out)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        if o.coeffs[0] == 0:
            raise ZeroDivisionError("XiSeries division needs a nonzero constant term")
        K = self.order
        inv0 = 1 / o.coeffs[0]
        out = [Fraction(0)] * (K + 1)
        for k in range(K + 1):
            acc = self.coeffs[k]
            for i in range(1, k + 1):
                acc -= o.coeffs[i] * out[k - i]
            out[k] = acc * inv0
        return XiSeries(out)

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return o.__truediv__(self)

    def __neg__(self):
        return XiSeries([-a for a in self.coeffs])

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            raise ValueError("XiSeries ** needs a non-negative int")
        out = XiSeries.constant(1, self.order)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __eq__(self, other):
        if isinstance(other, XiSeries):
            return self.coeffs == other.coeffs
        if isinstance(other, (int, Fraction)):
            return self == XiSeries.constant(other, self.order)
        return NotImplemented

    def __hash__(self):
        return hash(self.coeffs)

    def __call__(self, xi: Fraction) -> Fraction:
        """Evaluate the truncated polynomial at a rational point."""
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * xi + c
        return acc

    def __repr__(self):
        return f"XiSeries({[str(c) for c in self.coeffs]})"


def ring_zero(like):
    """Additive identity in the ring of `like`."""
    if isinstance(like, BigReal):
        return BigReal(0, like.digits)
    if isinstance(like, Dual):
        return Dual.constant(0, like.val.digits)
    if isinstance(like, XiSeries):
        return XiSeries.constant(0, like.order)
    if isinstance(like, (int, Fraction)):
        return Fraction(0)
    return like - like


def ring_is_zero(x) -> bool:
    """Exact zero test used for singularity detection (not a tolerance test)."""
    if isinstance(x, BigReal):
        return x.is_zero()
    if isinstance(x, Dual):
        return x.val.is_zero()
    if isinstance(x, XiSeries):
        return x.coeffs[0] == 0
    return x == 0
