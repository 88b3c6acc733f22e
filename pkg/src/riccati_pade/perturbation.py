"""Exact perturbation series about critical depths.

Substituting v0 = v0_base + xi and E = E1 xi + E2 xi^2 + ... into a Hankel
determinant and demanding that it vanish order by order determines the
rational coefficients E^(k).  The dependence of the determinant's
xi-coefficients on the next unknown coefficient is polynomial of bounded
degree, so each step is resolved exactly by interpolation at rational probe
points; the leading order is a polynomial equation whose rational roots
each spawn a branch, and higher orders are (generically) linear.

Branches with a positive first-order slope violate the Hellmann-Feynman
sign expectation dE/dv0 <= 0 for an attached bound state; the check is
necessary but not sufficient for physicality.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .hankel import HankelProblem, hankel_eval_exact, hankel_series
from .potentials import PotentialSpec
from .rings import XiSeries
from .series import GeometrySpec

CONSISTENT = "consistent"
VIOLATES_HF = "violates_hellmann_feynman"


class OrderDeficiencyError(ValueError):
    """Truncation order (or dimension) too small to pin the next coefficient."""


@dataclass
class PerturbationSeries:
    """One branch E(xi) = sum_k coeffs[k-1] xi^k about v0_base."""

    potential: PotentialSpec
    geometry: GeometrySpec
    v0_base: Fraction
    coeffs: list[Fraction]
    branch_id: int
    D: int
    n: int | None = None                 # critical index when recognizable
    status: str = "complete"             # or "irrational_leading"
    leading_poly: list[Fraction] | None = None

    def __call__(self, xi) -> Fraction:
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = (acc + c) * xi
        return acc

    def as_strings(self) -> list[str]:
        return [str(c) for c in self.coeffs]


def slope_sign_check(series: PerturbationSeries) -> str:
    """Hellmann-Feynman screen: E^(1) > 0 cannot belong to a physical level."""
    if not series.coeffs:
        raise ValueError("empty perturbation series")
    return VIOLATES_HF if series.coeffs[0] > 0 else CONSISTENT


def _poly_eval(p: list[Fraction], x: Fraction) -> Fraction:
    acc = Fraction(0)
    for c in reversed(p):
        acc = acc * x + c
    return acc


def _poly_trim(p: list[Fraction]) -> list[Fraction]:
    while p and p[-1] == 0:
        p = p[:-1]
    return p


def _lagrange(nodes: list[Fraction], values: list[Fraction]) -> list[Fraction]:
    """Dense interpolating polynomial through (nodes[i], values[i])."""
    n = len(nodes)
    out = [Fraction(0)] * n
    for i in range(n):
        if values[i] == 0:
            continue
        basis = [Fraction(1)]
        denom = Fraction(1)
        for j in range(n):
            if j == i:
                continue
            # basis *= (t - nodes[j])
            basis = [Fraction(0)] + basis
            for k in range(len(basis) - 1):
                basis[k] -= nodes[j] * basis[k + 1]
            denom *= nodes[i] - nodes[j]
        w = values[i] / denom
        for k, b in enumerate(basis):
            out[k] += w * b
    return _poly_trim(out)


def _rational_roots(p: list[Fraction]) -> list[Fraction]:
    """All rational roots of a nonzero polynomial, from its exact
    factorization over Q (linear factors)."""
    import sympy

    p = _poly_trim(p)
    if len(p) <= 1:
        return []
    t = sympy.Symbol("t")
    poly = sympy.Poly(
        [sympy.Rational(c.numerator, c.denominator) for c in reversed(p)],
        t, domain="QQ")
    out = []
    for fac, _mult in poly.factor_list()[1]:
        if fac.degree() == 1:
            a, b = (sympy.Rational(c) for c in fac.all_coeffs())
            root = -b / a
            out.append(Fraction(int(root.p), int(root.q)))
    return sorted(set(out))


def _det_coeff_polys(problem: HankelProblem, v_series: XiSeries,
                     prefix: list[Fraction], k: int,
                     K_work: int) -> list[list[Fraction]]:
    """P_m(t) such that det's xi^m coefficient equals P_m(E^(k)) when the
    series is prefix + t xi^k.  Degree of P_m is at most floor(m/k); one
    extra probe cross-checks every interpolation."""
    deg = K_work // k
    nodes = [Fraction(i) for i in range(deg + 2)]
    evals = []
    for tval in nodes:
        coeffs = [Fraction(0)] + prefix + [Fraction(0)] * (K_work - k + 1)
        coeffs[k] = tval
        det = hankel_series(problem, XiSeries(coeffs, K_work), v_series)
        evals.append(det.coeffs)
    polys = []
    for m in range(K_work + 1):
        dm = min(m // k, deg)
        pts = dm + 1
        poly = _lagrange(nodes[:pts], [evals[i][m] for i in range(pts)])
        for extra in range(pts, deg + 2):
            if _poly_eval(poly, nodes[extra]) != evals[extra][m]:
                raise RuntimeError("interpolation degree bound violated")
        polys.append(poly)
    return polys


def perturb_at_threshold(potential: PotentialSpec, geometry: GeometrySpec,
                         v0_base, K: int, D: int, d: int = 0,
                         ansatz: str = "f") -> list[PerturbationSeries]:
    """All perturbation branches E(xi) of H_D^d = 0 about the exact
    threshold v0_base, to order K, with exact rational coefficients.

    Every rational root of the leading-order polynomial spawns a branch;
    an irrational leading polynomial is reported symbolically on a branch
    with empty coefficients.  The determinant's leading xi-order (and the
    multiplicity of its branch factors) grows with D, so the internal
    truncation escalates automatically until every requested coefficient is
    pinned; OrderDeficiencyError means even the escalated truncation saw an
    identically-zero expansion.
    """
    v0_base = Fraction(v0_base)
    if K < 1:
        raise ValueError("order K must be >= 1")
    problem = HankelProblem(potential, geometry, ansatz, D, d, "E", v0_base)
    if hankel_eval_exact(problem, Fraction(0)) != 0:
        raise ValueError(
            f"v0 = {v0_base} is not a root of the exact E=0 determinant at D={D}")
    n = _critical_index(potential, v0_base)

    K_work = K
    for _attempt in range(6):
        try:
            branches = _extract_branches(problem, v0_base, K, K_work)
        except OrderDeficiencyError:
            K_work += max(K, D)
            continue
        for b in branches:
            b.potential, b.geometry, b.n = potential, geometry, n
        branches.sort(key=lambda b: b.coeffs)
        for i, b in enumerate(branches, start=1):
            b.branch_id = i
        return branches
    raise OrderDeficiencyError(
        f"determinant expansion identically zero through order {K_work}; "
        "raise K or D")


def _extract_branches(problem: HankelProblem, v0_base: Fraction, K: int,
                      K_work: int) -> list[PerturbationSeries]:
    v_series = XiSeries([v0_base, Fraction(1)], K_work)
    branches: list[PerturbationSeries] = []
    stack: list[list[Fraction]] = [[]]
    while stack:
        prefix = stack.pop()
        k = len(prefix) + 1
        if k > K:
            branches.append(PerturbationSeries(
                problem.potential, problem.geometry, v0_base, prefix, 0,
                problem.D))
            continue
        polys = _det_coeff_polys(problem, v_series, prefix, k, K_work)
        m_star = next((m for m, p in enumerate(polys) if p), None)
        if m_star is None:
            raise OrderDeficiencyError(f"all orders <= {K_work} vanish")
        lead = polys[m_star]
        if len(lead) == 1:
            # nonzero constant: this prefix cannot be continued
            continue
        roots = _rational_roots(lead)
        if not roots:
            branches.append(PerturbationSeries(
                problem.potential, problem.geometry, v0_base, prefix, 0,
                problem.D, status="irrational_leading", leading_poly=lead))
            continue
        for r in roots:
            stack.append(prefix + [r])
    return branches


def perturb_stable(potential: PotentialSpec, geometry: GeometrySpec,
                   v0_base, K: int, D_start: int = 2, D_cap: int = 10,
                   d: int = 0) -> tuple[list[PerturbationSeries], int]:
    """Stabilized branches: those whose coefficient tuple is identical at
    two consecutive dimensions.

    At any single dimension the expansion is exact only through an order
    that grows with D, and transient sibling branches appear alongside the
    stable one; intersecting consecutive dimensions keeps exactly the
    series that have converged.  Returns (branches, stabilization D, i.e.
    the smaller of the two agreeing dimensions).  Dimensions where v0_base
    is not yet an exact determinant root are skipped.
    """
    prev = None
    for D in range(D_start, D_cap + 1):
        try:
            cur = perturb_at_threshold(potential, geometry, v0_base, K, D, d=d)
        except ValueError:
            prev = None
            continue
        key = {tuple(b.coeffs) for b in cur if b.status == "complete"}
        if prev is not None:
            stable = key & prev
            if stable:
                out = [b for b in cur
                       if b.status == "complete" and tuple(b.coeffs) in stable]
                return out, D - 1
        prev = key
    raise OrderDeficiencyError(
        f"perturbation series did not stabilize by D = {D_cap}")


def _critical_index(potential: PotentialSpec, v0_base: Fraction) -> int | None:
    if potential.family == "rational_m" and potential.m == 2:
        for cand in range(1, 64):
            if Fraction(cand * (cand + 2), 2) == v0_base:
                return cand
    if potential.family == "poschl_teller":
        for cand in range(0, 64):
            if Fraction(cand * (cand + 1), 2) == v0_base:
                return cand
    return None
