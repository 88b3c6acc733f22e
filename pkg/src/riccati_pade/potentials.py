"""Well families and the Taylor coefficients of Q = 2[E - V].

Each family exposes the exact rational Taylor coefficients t_j of its shape
function v, with V = -v0 * v.  For a parity-invariant well v is even and
index j refers to x^(2j); for a central-field well index j refers to r^j and
may start at -1 (Coulomb-like 1/r term).  Q_j is then assembled as a
degree-one polynomial in E and v0, which keeps the operation valid over
every coefficient ring (BigReal, Fraction, Dual, XiSeries, or symbols).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

PARITY_1D = "parity_1d"
CENTRAL_FIELD = "central_field"

_FAMILIES = ("poschl_teller", "gaussian_1d", "rational_m", "yukawa",
             "gaussian_radial", "custom")


class UnknownFamilyError(ValueError):
    pass


@dataclass(frozen=True)
class PotentialSpec:
    """A well family plus its parameters.

    ``m`` is the exponent of the rational family (>= 2, half-integers
    allowed).  ``taylor``/``taylor_start`` define a user-supplied family by
    its exact shape coefficients t_j (V = -v0 * sum t_j x^(2j), or r^j for a
    central custom family).
    """

    family: str
    geometry: str
    m: Fraction | None = None
    taylor: tuple[Fraction, ...] | None = None
    taylor_start: int = 0

    def __post_init__(self):
        if self.family not in _FAMILIES:
            raise UnknownFamilyError(f"unknown potential family {self.family!r}")
        if self.geometry not in (PARITY_1D, CENTRAL_FIELD):
            raise ValueError(f"unknown geometry {self.geometry!r}")
        if self.family == "rational_m":
            if self.m is None or self.m < 2:
                raise ValueError("rational_m requires exponent m >= 2")
        if self.family == "yukawa" and self.geometry != CENTRAL_FIELD:
            raise ValueError("yukawa is a central-field family")
        if self.family in ("poschl_teller", "gaussian_1d", "rational_m") \
                and self.geometry != PARITY_1D:
            raise ValueError(f"{self.family} is a parity-invariant 1D family")
        if self.family == "gaussian_radial" and self.geometry != CENTRAL_FIELD:
            raise ValueError("gaussian_radial is a central-field family")
        if self.family == "custom" and self.taylor is None:
            raise ValueError("custom family needs explicit taylor coefficients")

    @property
    def start_index(self) -> int:
        if self.family == "yukawa":
            return -1
        if self.family == "custom":
            return self.taylor_start
        return 0


def poschl_teller() -> PotentialSpec:
    return PotentialSpec("poschl_teller", PARITY_1D)


def gaussian_1d() -> PotentialSpec:
    return PotentialSpec("gaussian_1d", PARITY_1D)


def rational_well(m) -> PotentialSpec:
    return PotentialSpec("rational_m", PARITY_1D, m=Fraction(m))


def yukawa() -> PotentialSpec:
    return PotentialSpec("yukawa", CENTRAL_FIELD)


def gaussian_radial() -> PotentialSpec:
    return PotentialSpec("gaussian_radial", CENTRAL_FIELD)


def parse_potential(text: str, geometry: str = PARITY_1D) -> PotentialSpec:
    """Parse CLI-style family strings: "gaussian", "poschl-teller",
    "rational:m=2", "yukawa"."""
    name, _, args = text.partition(":")
    name = name.strip().lower().replace("-", "_").replace(" ", "_")
    if name in ("poschl_teller", "poschlteller", "mpt"):
        return poschl_teller()
    if name == "gaussian":
        if geometry == CENTRAL_FIELD:
            return gaussian_radial()
        return gaussian_1d()
    if name == "yukawa":
        return yukawa()
    if name == "rational":
        m = Fraction(2)
        if args:
            key, _, val = args.partition("=")
            if key.strip() != "m":
                raise UnknownFamilyError(f"unknown rational parameter {key!r}")
            m = Fraction(val.strip())
        return rational_well(m)
    raise UnknownFamilyError(f"unknown potential family {text!r}")


@lru_cache(maxsize=None)
def _sech2_coeffs(jmax: int) -> tuple[Fraction, ...]:
    # sech^2 x = 1 / cosh^2 x with cosh^2 x = (1 + cosh 2x)/2; reciprocal
    # computed by the standard truncated-series recurrence.
    cosh2 = [Fraction(0)] * (jmax + 1)
    cosh2[0] = Fraction(1)
    for k in range(1, jmax + 1):
        num = Fraction(2) ** (2 * k - 1)
        fact = 1
        for i in range(2, 2 * k + 1):
            fact *= i
        cosh2[k] = num / fact
    inv = [Fraction(0)] * (jmax + 1)
    inv[0] = Fraction(1)
    for k in range(1, jmax + 1):
        acc = Fraction(0)
        for i in range(1, k + 1):
            acc -= cosh2[i] * inv[k - i]
        inv[k] = acc
    return tuple(inv)


@lru_cache(maxsize=None)
def _binomial_coeffs(m: Fraction, jmax: int) -> tuple[Fraction, ...]:
    # (1+z)^(-m) = sum_j (-1)^j C(m+j-1, j) z^j, valid for half-integer m.
    out = [Fraction(1)]
    c = Fraction(1)
    for j in range(1, jmax + 1):
        c = c * (m + j - 1) / j
        out.append(c if j % 2 == 0 else -c)
    return tuple(out)


@lru_cache(maxsize=None)
def shape_coeffs(spec: PotentialSpec, jmax: int) -> tuple[Fraction, ...]:
    """Exact coefficients t_j of the shape function, indices start..jmax."""
    start = spec.start_index
    if spec.family == "poschl_teller":
        return _sech2_coeffs(jmax)
    if spec.family == "gaussian_1d":
        out, f = [], 1
        for j in range(jmax + 1):
            out.append(Fraction((-1) ** j, f))
            f *= j + 1
        return tuple(out)
    if spec.family == "rational_m":
        return _binomial_coeffs(spec.m, jmax)
    if spec.family == "yukawa":
        # e^{-r}/r: t_{j} = (-1)^{j+1}/(j+1)!, starting at j = -1.
        out, f = [], 1
        for j in range(start, jmax + 1):
            out.append(Fraction((-1) ** (j + 1), f))
            f *= j + 2
        return tuple(out)
    if spec.family == "gaussian_radial":
        out, f = [], 1
        for j in range(jmax + 1):
            if j % 2 == 0:
                out.append(Fraction((-1) ** (j // 2), f))
                f *= j // 2 + 1
            else:
                out.append(Fraction(0))
        return tuple(out)
    if spec.family == "custom":
        coeffs = list(spec.taylor)
        n = jmax - start + 1
        if len(coeffs) < n:
            coeffs.extend([Fraction(0)] * (n - len(coeffs)))
        return tuple(coeffs[:n])
    raise UnknownFamilyError(spec.family)


@dataclass(frozen=True)
class QCoeffs:
    """Taylor coefficients of Q, as ring elements.

    ``coeffs[i]`` holds the coefficient with index ``start_index + i``.  For
    a parity well (``parity`` True) index j multiplies x^(2j); otherwise r^j.
    """

    start_index: int
    coeffs: tuple
    parity: bool

    def __getitem__(self, j: int):
        return self.coeffs[j - self.start_index]

    @property
    def jmax(self) -> int:
        return self.start_index + len(self.coeffs) - 1


def q_coeffs(spec: PotentialSpec, E, v0, jmax: int) -> QCoeffs:
    """Q_j = 2E [j=0] + 2 v0 t_j for j = start..jmax.

    E and v0 must come from the same ring; every Q_j is degree <= 1 in both,
    so any of the four rings (or symbolic stand-ins) works.
    """
    if jmax < 0:
        raise ValueError("jmax must be >= 0")
    ts = shape_coeffs(spec, jmax)
    start = spec.start_index
    two = Fraction(2)
    out = []
    for i, t in enumerate(ts):
        j = start + i
        qj = (two * t) * v0
        if j == 0:
            qj = qj + two * E
        out.append(qj)
    return QCoeffs(start, tuple(out), spec.geometry == PARITY_1D)


def shape_value(spec: PotentialSpec, x):
    """Direct evaluation of the shape function v at a BigReal point.

    Used by tests to compare partial Taylor sums against 2[E - V(x)].
    """
    from . import rings

    if spec.family == "poschl_teller":
        c = (rings.exp(x) + rings.exp(-x)) / 2
        return 1 / (c * c)
    if spec.family in ("gaussian_1d", "gaussian_radial"):
        return rings.exp(-(x * x))
    if spec.family == "rational_m":
        # (1+x^2)^(-m) for possibly half-integer m
        base = 1 + x * x
        return rings.exp(rings.log(base) * rings.BigReal(Fraction(-spec.m), x.digits))
    if spec.family == "yukawa":
        return rings.exp(-x) / x
    raise UnknownFamilyError(spec.family)
