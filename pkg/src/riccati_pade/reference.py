"""Exact closed forms and asymptotic estimates used as oracles.

This module holds everything that is known in closed form for the wells in
scope: modified Poschl-Teller eigenvalues and their threshold expansion,
the exact critical ladders of the rational well, threshold wavefunctions
for both families, the three-term recurrence behind the rational-well
criticals, and the WKB / variational large-l estimates.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from . import rings
from .potentials import PotentialSpec
from .rings import BigReal
from .series import GeometrySpec


def mpt_critical(n: int) -> Fraction:
    """Depth at which the n-th modified Poschl-Teller state reaches E = 0."""
    if n < 0:
        raise ValueError("state index must be >= 0")
    return Fraction(n * (n + 1), 2)


def rational_critical(k: int, s: int, branch: int) -> Fraction:
    """The two critical-depth families of the rational well
    V = -v0/(1+x^2)^2; together they form the ladder n(n+2)/2."""
    if k < 1 or s not in (0, 1):
        raise ValueError("need k >= 1 and s in {0,1}")
    if branch == 1:
        return Fraction((2 * k + s - 1) ** 2 - 1, 2)
    if branch == 2:
        return Fraction((2 * k + s) ** 2 - 1, 2)
    raise ValueError("branch must be 1 or 2")


def mpt_energy(n: int, v0, digits: int = 30) -> BigReal:
    """E_n = -(lambda - n - 1)^2 / 2 with lambda = (1 + sqrt(1+8 v0))/2."""
    v = v0 if isinstance(v0, BigReal) else BigReal(v0, digits)
    lam = (1 + rings.sqrt(1 + 8 * v)) / 2
    if not BigReal(n, v.digits) < lam - 1:
        raise ValueError(f"state n={n} not bound at v0={v.to_decimal()}")
    t = lam - (n + 1)
    return -(t * t) / 2


def mpt_perturbation(n: int, K: int) -> list[Fraction]:
    """Exact threshold expansion of E_n about v0 = n(n+1)/2.

    Returns the coefficients of xi^2 .. xi^(K+1); the xi^0 and xi^1 terms
    vanish identically.  Computed by exact Taylor expansion of the closed
    form, so any order is available.
    """
    if K < 1:
        return []
    # sqrt(1+u) binomial series with u = 8 xi / (2n+1)^2:
    # lambda - n - 1 = (2n+1) (sqrt(1+u) - 1)/2
    M = K + 2
    w = (2 * n + 1)
    sq = [Fraction(1)]
    c = Fraction(1)
    for k in range(1, M + 1):
        c = c * (Fraction(1, 2) - (k - 1)) / k
        sq.append(c * Fraction(8, w * w) ** k)
    # t = lambda - n - 1 as a series in xi (constant term drops)
    t = [Fraction(w, 2) * a for a in sq]
    t[0] = Fraction(0)
    # E = -t^2/2 truncated at xi^M
    e = [Fraction(0)] * (M + 1)
    for i, a in enumerate(t):
        if a == 0:
            continue
        for j, b in enumerate(t):
            if b == 0 or i + j > M:
                continue
            e[i + j] -= a * b / 2
    assert e[0] == 0 and e[1] == 0
    return e[2:K + 2]


def appendix_recurrence(alpha: Fraction, s: int, E: Fraction,
                        jmax: int) -> list[Fraction]:
    """Coefficients c_j of u = sum c_j x^(2j+s) for the rational well after
    the substitution psi = (1+x^2)^alpha u, with c_0 = 1:

    (2j+s+1)(2j+s+2) c_{j+1} + [(2j+s+2a)(2j+s+2a-1) + 2E] c_j + 2E c_{j-1} = 0
    """
    alpha = Fraction(alpha)
    E = Fraction(E)
    c = [Fraction(1)]
    for j in range(jmax):
        t = 2 * j + s
        lead = Fraction((t + 1) * (t + 2))
        mid = (t + 2 * alpha) * (t + 2 * alpha - 1) + 2 * E
        prev = 2 * E * (c[j - 1] if j >= 1 else Fraction(0))
        c.append(-(mid * c[j] + prev) / lead)
    return c


@dataclass(frozen=True)
class ThresholdWavefunction:
    """Closed-form E = 0 solution at a critical depth, with its asymptotic
    classification (bounded limit vs linear growth)."""

    family: str
    n: int
    s: int
    v0: Fraction
    classification: str  # "convergent" | "divergent"

    def __call__(self, x: BigReal) -> BigReal:
        return _THRESHOLD_FORMS[(self.family, self.n, self.s)](x)


def _rat_10(x):
    return (1 - x * x) / rings.sqrt(1 + x * x)


def _rat_20(x):
    return (1 - 3 * x * x) / (1 + x * x)


def _rat_30(x):
    u = 1 + x * x
    return (x * x + 2 * x - 1) * (x * x - 2 * x - 1) / (u * rings.sqrt(u))


def _rat_40(x):
    u = 1 + x * x
    x2 = x * x
    return (5 * x2 * x2 - 10 * x2 + 1) / (u * u)


def _rat_11(x):
    return x / rings.sqrt(1 + x * x)


def _rat_21(x):
    return x * (x * x - 3) / (1 + x * x)


def _rat_31(x):
    u = 1 + x * x
    return x * (x * x - 1) / (u * rings.sqrt(u))


def _rat_41(x):
    u = 1 + x * x
    x2 = x * x
    return x * (x2 * x2 - 10 * x2 + 5) / (u * u)


def _mpt_10(x):
    return 2 * x / (rings.exp(2 * x) + 1) - x + 1


def _mpt_11(x):
    return 1 - 2 / (rings.exp(2 * x) + 1)


def _mpt_20(x):
    e2 = rings.exp(2 * x)
    e4 = e2 * e2
    return 2 * (4 * e2 - e4 - 1) / (e4 + 2 * e2 + 1)


def _mpt_21(x):
    e2 = rings.exp(2 * x)
    e4 = e2 * e2
    return -(e4 * (2 * x - 3) - 8 * x * e2 + 2 * x + 3) / (4 * (e4 + 2 * e2 + 1))


_THRESHOLD_FORMS = {
    ("rational_m", 1, 0): _rat_10,
    ("rational_m", 2, 0): _rat_20,
    ("rational_m", 3, 0): _rat_30,
    ("rational_m", 4, 0): _rat_40,
    ("rational_m", 1, 1): _rat_11,
    ("rational_m", 2, 1): _rat_21,
    ("rational_m", 3, 1): _rat_31,
    ("rational_m", 4, 1): _rat_41,
    ("poschl_teller", 1, 0): _mpt_10,
    ("poschl_teller", 1, 1): _mpt_11,
    ("poschl_teller", 2, 0): _mpt_20,
    ("poschl_teller", 2, 1): _mpt_21,
}


def threshold_wavefunction(family: str, n: int, s: int) -> ThresholdWavefunction:
    if (family, n, s) not in _THRESHOLD_FORMS:
        raise KeyError(f"no cataloged threshold wavefunction ({family}, n={n}, s={s})")
    if family == "rational_m":
        v0 = Fraction(n * (n + 2), 2)
    else:
        v0 = mpt_critical(n)
    classification = "convergent" if (n + s) % 2 == 0 else "divergent"
    return ThresholdWavefunction(family, n, s, v0, classification)


def wkb_critical(l: int, digits: int = 30) -> BigReal:
    """Large-l estimate v0 ~ e l(l+1)/2 (same for Yukawa and Gaussian)."""
    if l < 1:
        raise ValueError("l must be >= 1")
    return rings.e_const(digits) * l * (l + 1) / 2


def variational_critical(family: str, l: int, digits: int = 30) -> BigReal:
    """Variational estimates for the lowest critical depth at angular
    momentum l (trial functions r^(l+1) e^(-ar) and r^(l+1) e^(-ar^2))."""
    if l < 1:
        raise ValueError("l must be >= 1")
    if family in ("yukawa", "Y"):
        num = BigReal(2, digits) ** (2 * l) * BigReal(l + 1, digits) ** (2 * l + 3)
        den = BigReal(2 * l + 1, digits) ** (2 * l + 1)
        return num / den
    if family in ("gaussian_radial", "gaussian", "G"):
        h = BigReal(Fraction(1, 2), digits)
        num = BigReal(2 * l + 3, digits) ** (BigReal(2 * l + 5, digits) * h)
        den = 8 * BigReal(2 * l + 1, digits) ** (BigReal(2 * l + 1, digits) * h)
        return num / den
    raise ValueError(f"no variational formula for family {family!r}")


def log_error(exact: BigReal, approx: BigReal) -> BigReal:
    """log10 |(exact - approx)/exact|."""
    if exact.is_zero():
        raise ValueError("log_error needs a nonzero reference value")
    return rings.log10(abs((exact - approx) / exact))


# Finite-D reference roots of the rational-well (m=2) determinants near its
# thresholds, used to label spurious_scan output.  Energies near zero track
# the divergent threshold solutions; the others are the physical states.
_KNOWN_RATIONAL_ROOTS = {
    (Fraction(151, 100), 0): [
        ("-0.70483", "physical"),
        ("-0.00124114797000675832", "spurious"),
    ],
    (Fraction(149, 100), 0): [
        ("-0.692231", "physical"),
        ("0.0012588560223263235359", "spurious"),
    ],
    (Fraction(149, 100), 1): [
        ("-0.0012609753609799139195", "spurious"),
    ],
    (Fraction(401, 100), 1): [
        ("-0.429395", "physical"),
        ("-0.00031158508464057747545", "spurious"),
    ],
}


def known_roots(potential: PotentialSpec, geometry: GeometrySpec,
                v0: Fraction) -> list[tuple[str, str]]:
    """Cataloged (value, label) pairs for labeling scan output; empty when
    nothing is known for the given configuration."""
    if potential.family == "rational_m" and potential.m == 2 \
            and geometry.kind == "parity":
        return _KNOWN_RATIONAL_ROOTS.get((Fraction(v0), geometry.s), [])
    return []
