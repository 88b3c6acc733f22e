"""Logarithmic-derivative series coefficients for both ansatz choices.

For a parity-invariant well the regularized logarithmic derivative
f = s/x - psi'/psi expands as f(x) = x * sum_j f_j x^(2j), and the
modified-ansatz function g = (1-s)/x - psi''/psi' as g(x) = x * sum_j g_j
x^(2j).  For a central-field well f = (l+1)/r - psi'/psi and
g = l/r - psi''/psi' expand in plain powers of r.

The closed recurrences below follow from inserting those expansions into
the Riccati equation (f) and into the algebraic relation linking f, g and
Q (g); the first coefficients reduce to the familiar closed forms, which
the test suite checks symbolically.
"""

from __future__ import annotations

from dataclasses import dataclass

from .potentials import QCoeffs


class SingularAnsatzError(ValueError):
    """g-ansatz with s=0 is undefined when Q_0 = 0 (i.e. E = V(0))."""


@dataclass(frozen=True)
class GeometrySpec:
    """Either parity_1d with s in {0,1} or central_field with l >= 0."""

    kind: str  # "parity" | "central"
    s: int = 0
    l: int = 0

    def __post_init__(self):
        if self.kind == "parity":
            if self.s not in (0, 1):
                raise ValueError("parity index s must be 0 (even) or 1 (odd)")
        elif self.kind == "central":
            if self.l < 0:
                raise ValueError("angular momentum l must be >= 0")
        else:
            raise ValueError(f"unknown geometry kind {self.kind!r}")

    @classmethod
    def parity(cls, s: int) -> "GeometrySpec":
        return cls("parity", s=s)

    @classmethod
    def central(cls, l: int) -> "GeometrySpec":
        return cls("central", l=l)

    def label(self) -> str:
        if self.kind == "parity":
            return f"parity={self.s}"
        return f"l={self.l}"


@dataclass(frozen=True)
class AnsatzCoeffs:
    """Coefficient list of one ansatz; index j multiplies x^(2j+1) (parity)
    or r^j (central field)."""

    ansatz: str  # "f" | "g"
    geometry: GeometrySpec
    coeffs: tuple

    def __getitem__(self, j: int):
        return self.coeffs[j]

    def __len__(self) -> int:
        return len(self.coeffs)


def needed_jmax(D: int, d: int) -> int:
    """Highest coefficient index entering a dimension-D, offset-d Hankel
    determinant (entry (D,D) holds coefficient 2D+d-1)."""
    return 2 * D + d - 1


def f_parity(Q: QCoeffs, s: int, jmax: int) -> AnsatzCoeffs:
    """f_j = (Q_j + sum_{k<j} f_k f_{j-1-k}) / (2j+1+2s)."""
    if Q.start_index != 0:
        raise ValueError("parity ansatz needs Q starting at index 0")
    f = []
    for j in range(jmax + 1):
        acc = Q[j]
        for k in range(j):
            acc = acc + f[k] * f[j - 1 - k]
        f.append(acc / (2 * j + 1 + 2 * s))
    return AnsatzCoeffs("f", GeometrySpec.parity(s), tuple(f))


def g_parity(Q: QCoeffs, f: AnsatzCoeffs, s: int, jmax: int) -> AnsatzCoeffs:
    """Modified-ansatz coefficients from the relation
    (1-s)/x f - f g + s/x g = Q."""
    from .rings import ring_is_zero

    if s == 1:
        g = []
        for j in range(jmax + 1):
            acc = Q[j]
            for k in range(j):
                acc = acc + f[k] * g[j - 1 - k]
            g.append(acc)
        return AnsatzCoeffs("g", GeometrySpec.parity(1), tuple(g))

    f0 = f[0]
    if ring_is_zero(Q[0]):
        raise SingularAnsatzError(
            "even-state g-ansatz undefined at Q_0 = 0 (E equals V(0))")
    g = []
    for j in range(1, jmax + 2):
        acc = f[j] - Q[j]
        for k in range(1, j):
            acc = acc - f[k] * g[j - 1 - k]
        g.append(acc / f0)
    return AnsatzCoeffs("g", GeometrySpec.parity(0), tuple(g))


def f_central(Q: QCoeffs, l: int, jmax: int) -> AnsatzCoeffs:
    """f_0 = Q_{-1}/(2(l+1)); (j+1+2(l+1)) f_{j+1} = Q_j + sum f_k f_{j-k}."""
    from .rings import ring_zero

    if Q.start_index not in (-1, 0):
        raise ValueError("central ansatz needs Q starting at -1 or 0")
    if Q.start_index == -1:
        f = [Q[-1] / (2 * (l + 1))]
    else:
        f = [ring_zero(Q[0])]
    for j in range(jmax):
        acc = Q[j]
        for k in range(j + 1):
            acc = acc + f[k] * f[j - k]
        f.append(acc / (j + 1 + 2 * (l + 1)))
    return AnsatzCoeffs("f", GeometrySpec.central(l), tuple(f))


def g_central(Q: QCoeffs, f: AnsatzCoeffs, l: int, jmax: int) -> AnsatzCoeffs:
    """(l+1) g_0 = Q_{-1} - l f_0;
    (l+1) g_{j+1} = Q_j - l f_{j+1} + sum_{k<=j} f_k g_{j-k}."""
    from .rings import ring_zero

    qm1 = Q[-1] if Q.start_index == -1 else ring_zero(Q[0])
    g = [(qm1 - l * f[0]) / (l + 1)]
    for j in range(jmax):
        acc = Q[j] - l * f[j + 1]
        for k in range(j + 1):
            acc = acc + f[k] * g[j - k]
        g.append(acc / (l + 1))
    return AnsatzCoeffs("g", GeometrySpec.central(l), tuple(g))


def q_index_needed(geometry: GeometrySpec, ansatz: str, jmax: int) -> int:
    """Highest Q index the recurrences touch for coefficients 0..jmax.

    The even-state g recurrence reaches one index past jmax; callers that
    generate Q themselves should size it with this rule.
    """
    if geometry.kind == "parity" and ansatz == "g" and geometry.s == 0:
        return jmax + 1
    return jmax


def ansatz_coeffs(Q: QCoeffs, geometry: GeometrySpec, ansatz: str,
                  jmax: int) -> AnsatzCoeffs:
    """Dispatch to the right recurrence; g always goes through f first."""
    if geometry.kind == "parity":
        if ansatz == "f":
            return f_parity(Q, geometry.s, jmax)
        if ansatz == "g":
            f = f_parity(Q, geometry.s, jmax + 1 if geometry.s == 0 else jmax)
            return g_parity(Q, f, geometry.s, jmax)
    else:
        f = f_central(Q, geometry.l, jmax)
        if ansatz == "f":
            return f
        if ansatz == "g":
            return g_central(Q, f, geometry.l, jmax)
    raise ValueError(f"unknown ansatz {ansatz!r}")
