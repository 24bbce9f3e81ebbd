"""Singular strata of the twistor space: labels, exact intersection decisions, catalogs.

Conventions used throughout:

* Pair indices are 1-based (pairs 1..4 for 3x4 weights, 1..3 for 2x3).
* ``y`` is the integer null vector of the weight matrix.  On any split
  stratum the torus equations force ``c = k * y`` where
  ``c_a = Im(conj(z_{2a-1}) z_{2a}) + Im(conj(w_{2a-1}) w_{2a})``.
* A side (the z-only pairs, or the w-only pairs) with prescribed ``c`` values
  is realizable iff ``2 * sum|c| <= 1/2``; a side made of a single pair, or a
  signed side, needs equality.
* A type-1 label carries a family ``(s_z, s_w)`` and a triple ``(t2, t3, t4)``;
  the z-relations are ``z_{2a} = a_a i z_{2a-1}`` with ``a = s_z (1, t2, t3, t4)``
  and likewise for w with ``s_w``.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, product
from typing import Sequence

import numpy as np

from .exact_linalg import SingularMatrix, det2, det3, det4, gcd_list, solve3, solve4
from .quatmoment import HVector, moment
from .weights import (
    BOX_MINOR_COEFFS,
    OmegaMatrix,
    ThetaMatrix,
    boxes,
    is_locally_free_omega,
    is_locally_free_theta,
    minors_theta,
    null_vector_omega,
    null_vector_theta,
)

__all__ = [
    "StratumLabel",
    "Component",
    "StratumDecision",
    "PointEntry",
    "CatalogEntry",
    "SingularLocusCatalog",
    "Type1Solution",
    "MixedCertificate",
    "Type1Catalog",
    "SingularSystem",
    "ClassificationViolation",
    "NotApplicable",
    "NotAdmissible",
    "det_M_alpha",
    "det_M_alpha_factored",
    "m_alpha_matrix",
    "solve_type1_system",
    "type1_closed_form",
    "type1_catalog",
    "enumerate_type2",
    "catalog_theta",
    "catalog_omega",
    "omega_strata",
    "signed_split_values",
    "split_label",
    "theta_type1_label",
    "j_image",
    "WITNESS_TOL",
]

WITNESS_TOL = 1e-12
HALF = Fraction(1, 2)
QUARTER = Fraction(1, 4)


class SingularSystem(ValueError):
    pass


class ClassificationViolation(RuntimeError):
    pass


class NotApplicable(ValueError):
    pass


class NotAdmissible(ValueError):
    pass


# ---------------------------------------------------------------- labels


def _sgn(s: int) -> str:
    return "+" if s > 0 else "-"


def _signs_str(signs: Sequence[int]) -> str:
    if len(signs) == 1:
        return _sgn(signs[0])
    return "(" + ",".join(_sgn(s) for s in signs) + ")"


@dataclass(frozen=True, order=True)
class StratumLabel:
    case: str  # "theta" | "omega"
    kind: str  # "type1" | "split" | "s0" | "s1"
    top: tuple[int, ...] = ()
    bottom: tuple[int, ...] = ()
    top_signs: tuple[int, ...] = ()
    bottom_signs: tuple[int, ...] = ()
    family: tuple[int, ...] = ()
    triple: tuple[int, ...] = ()

    @property
    def variant(self) -> str:
        if self.case == "omega":
            return {"type1": "OmegaTypeI", "split": "OmegaSplit", "s0": "OmegaS0", "s1": "OmegaS1"}[
                self.kind
            ]
        if self.kind == "type1":
            return "TypeI"
        if self.top_signs or self.bottom_signs:
            return "SignedSplit"
        return {(3, 1): "Split31", (1, 3): "Split13", (2, 2): "Split22"}[
            (len(self.top), len(self.bottom))
        ]

    @property
    def base(self) -> "StratumLabel":
        """The unsigned split label this one refines (identity for other kinds)."""
        if self.kind != "split":
            return self
        return StratumLabel(self.case, "split", self.top, self.bottom)

    def name(self) -> str:
        if self.kind == "s0":
            return "S_0"
        if self.kind == "s1":
            return "S_1"
        if self.kind == "type1":
            if self.case == "omega":
                return f"S_{_signs_str(self.triple)}"
            return f"S^{_signs_str(self.family)}_{_signs_str(self.triple)}"
        pre = ""
        if self.top_signs:
            pre = "^{" + _signs_str(self.top_signs) + "}"
        elif self.bottom_signs:
            pre = "_{" + _signs_str(self.bottom_signs) + "}"
        top = "".join(map(str, self.top))
        bot = "".join(map(str, self.bottom))
        return f"{pre}S^{{{top}}}_{{{bot}}}"

    def __str__(self) -> str:
        return self.name()

    def to_dict(self) -> dict:
        d = {"name": self.name(), "case": self.case, "kind": self.variant}
        if self.kind == "split":
            d["top"] = list(self.top)
            d["bottom"] = list(self.bottom)
            if self.top_signs:
                d["top_signs"] = list(self.top_signs)
            if self.bottom_signs:
                d["bottom_signs"] = list(self.bottom_signs)
        if self.kind == "type1":
            if self.family:
                d["family"] = list(self.family)
            d["triple"] = list(self.triple)
        return d


def theta_type1_label(family: tuple[int, int], triple: tuple[int, int, int]) -> StratumLabel:
    return StratumLabel("theta", "type1", family=tuple(family), triple=tuple(triple))


def split_label(case: str, top, bottom, top_signs=(), bottom_signs=()) -> StratumLabel:
    return StratumLabel(case, "split", tuple(top), tuple(bottom), tuple(top_signs), tuple(bottom_signs))


def j_image(label: StratumLabel) -> StratumLabel:
    """Image under (z, w) -> (-w, z): top and bottom trade places, signs move with them."""
    if label.case != "theta":
        raise NotApplicable("the involution on labels is defined for 3x4 weights only")
    if label.kind == "type1":
        return theta_type1_label((label.family[1], label.family[0]), label.triple)
    if label.kind == "split":
        return split_label("theta", label.bottom, label.top, label.bottom_signs, label.top_signs)
    raise NotApplicable(f"no involution image for {label}")


# ---------------------------------------------------------------- decisions


@dataclass(frozen=True)
class Component:
    label: StratumLabel
    sign: int | tuple[int, ...] | None
    intersects: bool
    exact_data: dict[str, Fraction] | None
    isotropy_invariant: int | None
    quotient_kind: str  # "Sphere" | "Point"
    quotient_dim: int
    certificate: str = ""
    witness: HVector | None = field(default=None, compare=False, repr=False)
    witness_residual: float | None = None

    def __post_init__(self):
        if self.quotient_kind == "Sphere" and self.quotient_dim != 2:
            raise ValueError("a sphere component has quotient dimension 2")
        if self.quotient_kind == "Point" and self.quotient_dim != 0:
            raise ValueError("a point component has quotient dimension 0")
        if self.exact_data is not None and not self.intersects:
            raise ValueError("exact data is reported only for intersecting components")


@dataclass(frozen=True)
class StratumDecision:
    label: StratumLabel
    components: tuple[Component, ...]
    stratum_dim: int | None = None

    @property
    def intersects(self) -> bool:
        return any(c.intersects for c in self.components)


@dataclass(frozen=True)
class CatalogEntry:
    label: StratumLabel
    isotropy_invariant: int
    quotient_kind: str
    exact_data: dict[str, Fraction]


@dataclass(frozen=True)
class PointEntry:
    labels: tuple[StratumLabel, ...]  # every signed substratum containing the point
    isotropy_invariant: int
    exact_data: dict[str, Fraction]

    @property
    def label(self) -> StratumLabel:
        return self.labels[0]


@dataclass(frozen=True)
class SingularLocusCatalog:
    case: str
    type1_spheres: tuple[CatalogEntry, ...] = ()
    type2_spheres: tuple[CatalogEntry, ...] = ()
    point_sets: tuple[tuple[PointEntry, ...], ...] = ()
    omega_sphere: tuple[CatalogEntry, ...] = ()
    excluded: tuple[tuple[StratumLabel, int], ...] = ()
    empty: tuple[StratumLabel, ...] = ()
    smooth: tuple[StratumLabel, ...] = ()
    mirrors: tuple[CatalogEntry, ...] = ()

    @property
    def n_points(self) -> int:
        return sum(len(g) for g in self.point_sets)

    def bounds_ok(self) -> bool:
        if self.case == "theta":
            return (
                len(self.type1_spheres) <= 2
                and len(self.type2_spheres) <= 22
                and len(self.point_sets) <= 3
                and all(len(g) <= 4 for g in self.point_sets)
                and not self.omega_sphere
            )
        return (
            not self.type1_spheres
            and not self.type2_spheres
            and len(self.omega_sphere) <= 1
            and self.n_points <= 12
        )

    def retained_labels(self) -> set[StratumLabel]:
        out = {e.label for e in self.type1_spheres + self.type2_spheres + self.omega_sphere}
        for g in self.point_sets:
            for p in g:
                out.update(p.labels)
        return out


# ---------------------------------------------------------------- det M_alpha


def m_alpha_matrix(epsilon: complex, sigma: complex, rho: complex, theta: float) -> np.ndarray:
    """Coefficient matrix of the fixed-point equations on one quaternionic pair."""
    c, s = math.cos(theta), math.sin(theta)
    eb = epsilon.conjugate()
    sb = sigma.conjugate()
    return np.array(
        [
            [0, -sigma * rho, -s, c - eb * rho],
            [-sigma * rho, 0, c - eb * rho, s],
            [-s, c - epsilon * rho, 0, sb * rho],
            [c - epsilon * rho, s, sb * rho, 0],
        ],
        dtype=complex,
    )


def _check_unit(epsilon: complex, sigma: complex, rho: complex) -> None:
    if abs(abs(epsilon) ** 2 + abs(sigma) ** 2 - 1.0) > 1e-12:
        raise ValueError("|epsilon|^2 + |sigma|^2 must equal 1")
    if abs(abs(rho) - 1.0) > 1e-12:
        raise ValueError("rho must be a unit complex number")


def det_M_alpha(epsilon: complex, sigma: complex, rho: complex, theta: float) -> complex:
    """Direct 4x4 determinant of the pair block.

    Cofactor expansion rather than LU: LU divides by pivots, which turns
    subnormal entries of an exactly singular block into nan.
    """
    _check_unit(epsilon, sigma, rho)
    return complex(_cofactor_det(m_alpha_matrix(epsilon, sigma, rho, theta).tolist()))


def _cofactor_det(m: list[list[complex]]) -> complex:
    if len(m) == 1:
        return m[0][0]
    return sum(
        (-1) ** j * m[0][j] * _cofactor_det([row[:j] + row[j + 1:] for row in m[1:]])
        for j in range(len(m))
        if m[0][j] != 0
    )


def det_M_alpha_factored(epsilon: complex, sigma: complex, rho: complex, theta: float) -> complex:
    _check_unit(epsilon, sigma, rho)
    re = epsilon.real
    em = cmath.exp(-1j * theta)
    ep = cmath.exp(1j * theta)
    rb = rho.conjugate()
    return rho**2 * (rho + rb * em**2 - 2 * re * em) * (rho + rb * ep**2 - 2 * re * ep)


# ---------------------------------------------------------------- type-1


@dataclass(frozen=True)
class Type1Solution:
    signs: tuple[int, ...]
    x: tuple[Fraction, ...]  # |u_{2a-1}|^2 for each pair
    det: Fraction

    @property
    def positive(self) -> bool:
        return all(v > 0 for v in self.x)


def _type1_matrix(weights, signs: Sequence[int]) -> list[list[int]]:
    rows = [[s * w for s, w in zip(signs, r)] for r in weights.rows]
    return rows + [[1] * len(signs)]


def solve_type1_system(weights: ThetaMatrix | OmegaMatrix, signs: Sequence[int]) -> Type1Solution:
    """Exact pair norms |u_{2a-1}|^2 for the sign pattern ``signs``.

    Raises SingularSystem when the coefficient determinant vanishes.
    """
    signs = tuple(int(s) for s in signs)
    n = 4 if isinstance(weights, ThetaMatrix) else 3
    if len(signs) != n or any(s not in (1, -1) for s in signs):
        raise ValueError(f"need {n} signs from {{+1, -1}}")
    m = _type1_matrix(weights, signs)
    rhs = [0] * (n - 1) + [HALF]
    try:
        x = solve4(m, rhs) if n == 4 else solve3(m, rhs)
    except SingularMatrix as exc:
        raise SingularSystem(f"pattern {signs} has a singular system") from exc
    det = det4(m) if n == 4 else det3(m)
    return Type1Solution(signs, tuple(Fraction(v) for v in x), Fraction(det))


def type1_closed_form(t: ThetaMatrix, signs: Sequence[int]) -> tuple[tuple[Fraction, ...], int]:
    """Pair norms from the signed minor-over-box formula, and the box used.

    With ``s_b = -a_b a_1`` the box is ``box(s2, s3, s4)`` and each
    ``2|u_{2a-1}|^2`` is the matching signed minor term of that box divided
    by the box itself.
    """
    a = tuple(signs)
    s = tuple(-a[b] * a[0] for b in (1, 2, 3))
    box = boxes(t)[s]
    if box == 0:
        raise SingularSystem(f"box{s} vanishes")
    c123, c124, c134, c234 = BOX_MINOR_COEFFS[s]
    d = minors_theta(t)
    terms = (c234 * d.d234, c134 * d.d134, c124 * d.d124, c123 * d.d123)
    return tuple(Fraction(v, 2 * box) for v in terms), box


def _stiefel_feasible(x: Sequence[Fraction]) -> bool:
    """Odd coordinates with these pair norms can satisfy the Sp(1) equations iff max <= 1/4."""
    return all(v <= QUARTER for v in x)


def _close_polygon(lengths: Sequence[float]) -> list[complex]:
    """Unit phases e_a with sum(lengths[a] * e_a) = 0, given max <= sum of the others."""
    n = len(lengths)
    order = sorted(range(n), key=lambda i: -lengths[i])
    phases = [1.0 + 0j] * n
    if n == 3:
        groups = [[order[0]], [order[1]], [order[2]]]
    else:
        groups = [[order[0]], [order[1]], order[2:]]
    a, b, c = (sum(lengths[i] for i in g) for g in groups)
    if a == 0:
        return phases
    # triangle with sides a, b, c: a along +x, b then c close the loop
    cos_b = (a * a + b * b - c * c) / (2 * a * b) if b > 0 else 1.0
    ang_b = math.acos(max(-1.0, min(1.0, cos_b)))
    vb = b * cmath.exp(1j * (math.pi - ang_b))
    vc = -(a + vb)
    dir_b = vb / abs(vb) if abs(vb) > 0 else 1.0
    dir_c = vc / abs(vc) if abs(vc) > 0 else 1.0
    for i in groups[0]:
        phases[i] = 1.0 + 0j
    for i in groups[1]:
        phases[i] = dir_b
    for i in groups[2]:
        phases[i] = dir_c
    return phases


def _type1_witness(weights, a: Sequence[int], b: Sequence[int], x: Sequence[Fraction]) -> HVector:
    """Point with z_{2a} = a i z_{2a-1}, w_{2a} = b i w_{2a-1} and the given pair norms."""
    xf = [float(v) for v in x]
    phases = _close_polygon(xf)
    odd_z = [math.sqrt(v / 2) * p for v, p in zip(xf, phases)]
    odd_w = [math.sqrt(v / 2) for v in xf]
    z, w = [], []
    if isinstance(weights, OmegaMatrix):
        z.append(0j)
        w.append(0j)
    for zz, ww, sa, sb in zip(odd_z, odd_w, a, b):
        z += [zz, 1j * sa * zz]
        w += [ww, 1j * sb * ww]
    return HVector.from_zw(z, w)


@dataclass(frozen=True)
class MixedCertificate:
    label: StratumLabel
    det: int
    valid: bool

    def text(self) -> str:
        if not self.valid:
            return f"{self.label}: coefficient determinant vanishes, no certificate"
        return (
            f"{self.label}: determinant {self.det} != 0 forces Gamma_a = 0 and "
            "z_{2a-1} w_{2a-1} = 0, so every pair vanishes, contradicting |u| = 1"
        )


@dataclass(frozen=True)
class Type1Catalog:
    solutions: dict[StratumLabel, Type1Solution]
    realized: tuple[StratumLabel, ...]  # one per same-sign family
    certificates: tuple[MixedCertificate, ...]
    decisions: tuple[StratumDecision, ...]


def _type1_signs(family: tuple[int, int], triple: Sequence[int]) -> tuple[tuple[int, ...], tuple[int, ...]]:
    base = (1,) + tuple(triple)
    return tuple(family[0] * v for v in base), tuple(family[1] * v for v in base)


def type1_catalog(t: ThetaMatrix) -> Type1Catalog:
    """Exact scan of the sixteen same-sign patterns and certificates for the sixteen mixed ones."""
    if not is_locally_free_theta(t).ok:
        raise NotAdmissible("type-1 classification needs a locally free weight matrix")
    solutions: dict[StratumLabel, Type1Solution] = {}
    realized = []
    decisions = []
    for family in ((1, 1), (-1, -1)):
        hits = []
        for triple in product((1, -1), repeat=3):
            label = theta_type1_label(family, triple)
            a, b = _type1_signs(family, triple)
            sol = solve_type1_system(t, a)
            solutions[label] = sol
            if sol.positive:
                hits.append(label)
            decisions.append(_type1_decision(t, label, a, b, sol))
        if len(hits) != 1:
            raise ClassificationViolation(
                f"family {family} has {len(hits)} positive patterns instead of exactly one"
            )
        realized.extend(hits)
    certs = []
    for family in ((1, -1), (-1, 1)):
        for triple in product((1, -1), repeat=3):
            label = theta_type1_label(family, triple)
            a, _ = _type1_signs(family, triple)
            d = det4(_type1_matrix(t, a))
            cert = MixedCertificate(label, int(d), d != 0)
            certs.append(cert)
            decisions.append(
                StratumDecision(
                    label,
                    (
                        Component(
                            label, None, False, None, None, "Sphere", 2, certificate=cert.text()
                        ),
                    ),
                )
            )
    return Type1Catalog(solutions, tuple(realized), tuple(certs), tuple(decisions))


def _type1_decision(weights, label, a, b, sol: Type1Solution) -> StratumDecision:
    if not sol.positive:
        comp = Component(
            label, None, False, None, None, "Sphere", 2,
            certificate="exact solution has a non-positive pair norm",
        )
        return StratumDecision(label, (comp,))
    if not _stiefel_feasible(sol.x):
        comp = Component(
            label, None, False, None, None, "Sphere", 2,
            certificate="a pair norm exceeds 1/4, so the Sp(1) equations have no solution",
        )
        return StratumDecision(label, (comp,))
    witness = _type1_witness(weights, a, b, sol.x)
    res = moment(weights, witness).residual
    data = {f"x_{i + 1}": v for i, v in enumerate(sol.x)}
    inv = int(sum(s * v for s, v in zip(a, _null_vector(weights))))
    comp = Component(
        label, None, res < WITNESS_TOL, data if res < WITNESS_TOL else None, inv, "Sphere", 2,
        certificate="explicit witness" if res < WITNESS_TOL else f"witness residual {res:.3e}",
        witness=witness, witness_residual=res,
    )
    return StratumDecision(label, (comp,))


def _null_vector(weights) -> tuple[int, ...]:
    if isinstance(weights, ThetaMatrix):
        return null_vector_theta(weights)
    return null_vector_omega(weights)


# ---------------------------------------------------------------- split strata


def _side_pairs(c: Sequence[float], total: float = 0.5) -> list[tuple[complex, complex]] | None:
    """Pairs (v1, v2) with Im(conj(v1) v2) = c_a, sum |v|^2 = total, sum v^2 = 0."""
    mins = [2 * abs(x) for x in c]
    slack = total - sum(mins)
    if slack < -1e-15:
        return None
    slack = max(slack, 0.0)
    n = len(c)
    extra = [0.0] * n
    if slack > 1e-15:
        if n == 1:
            return None

        def prod(i, s):
            return math.sqrt((mins[i] + s / 2) * (s / 2))

        lo, hi = 0.0, slack
        for _ in range(200):
            mid = (lo + hi) / 2
            if prod(0, mid) < prod(1, slack - mid):
                lo = mid
            else:
                hi = mid
        extra[0] = lo
        extra[1] = slack - lo
    out = []
    for i, ci in enumerate(c):
        a2 = max(2 * ci, 0.0) + extra[i] / 2
        b2 = max(-2 * ci, 0.0) + extra[i] / 2
        a = math.sqrt(a2)
        b = math.sqrt(b2) * (-1.0 if i == 1 else 1.0)
        out.append(((a + b) / math.sqrt(2), 1j * (a - b) / math.sqrt(2)))
    return out


def _split_witness(weights, top, bottom, c: dict[int, Fraction]) -> HVector | None:
    n = 8 if isinstance(weights, ThetaMatrix) else 7
    offset = 0 if n == 8 else 1
    z = [0j] * n
    w = [0j] * n
    for side, vec in ((top, z), (bottom, w)):
        pairs = _side_pairs([float(c[a]) for a in side])
        if pairs is None:
            return None
        for a, (v1, v2) in zip(side, pairs):
            vec[offset + 2 * (a - 1)] = v1
            vec[offset + 2 * (a - 1) + 1] = v2
    return HVector.from_zw(z, w)


def _col(weights, a: int) -> tuple[int, ...]:
    return weights.column(a - 1)


def _minor(weights, idx: Sequence[int]) -> int:
    cols = [_col(weights, a) for a in idx]
    return det3(cols) if len(cols) == 3 else det2(cols)


def _signed_point_invariant(weights, other: Sequence[int], signed: Sequence[int], signs) -> int:
    """det of the unsigned side's columns with s_g col_g - s_d col_d."""
    g, d = signed
    sg, sd = signs
    mixed = tuple(sg * x - sd * y for x, y in zip(_col(weights, g), _col(weights, d)))
    return det3([_col(weights, a) for a in other] + [mixed])


def _split22_index(y: Sequence[int], top: Sequence[int], bottom: Sequence[int]) -> int:
    g = gcd_list(y)
    st = sum(y[a - 1] for a in top)
    sb = sum(y[a - 1] for a in bottom)
    return 2 if st % (2 * g) == 0 or sb % (2 * g) == 0 else 1


def _stratum_dim(top, bottom, signed_side: str | None) -> int:
    """Real dimension of the stratum: free coordinates of V plus two."""
    complex_dim = 2 * (len(top) + len(bottom))
    if signed_side == "top":
        complex_dim -= len(top)
    elif signed_side == "bottom":
        complex_dim -= len(bottom)
    return 2 * complex_dim + 2


def _signed_side(label: StratumLabel):
    if label.bottom_signs:
        return label.bottom, label.top, label.bottom_signs
    if label.top_signs:
        return label.top, label.bottom, label.top_signs
    raise ValueError(f"{label} carries no sign relations")


def signed_split_values(weights: ThetaMatrix | OmegaMatrix, label: StratumLabel) -> dict | None:
    """Solved torus data ``{"k": k, "c_a": k*y_a}`` for a signed split label.

    The signed side is saturated, which fixes ``k``.  Returns None when the
    relation signs cannot match the null vector.  Feasibility of the other
    side is not checked here.
    """
    y = _null_vector(weights)
    side, _, signs = _signed_side(label)
    ys = [y[a - 1] for a in side]
    orient = {s * (1 if v > 0 else -1) for s, v in zip(signs, ys)}
    if len(orient) != 1:
        return None
    k = Fraction(orient.pop(), 4 * sum(abs(v) for v in ys))
    return {"k": k} | {f"c_{a}": k * y[a - 1] for a in range(1, len(y) + 1)}


def _split_component(weights, y, label: StratumLabel, invariant_fn) -> Component:
    """Decide a signed split stratum (one side carries the sign relations)."""
    top, bottom = label.top, label.bottom
    side, other, signs = _signed_side(label)
    kind = "Point" if (len(side) == 2 and len(other) == 2) or label.case == "omega" else "Sphere"
    qdim = 0 if kind == "Point" else 2
    sign_tag = signs[0] if len(signs) == 1 else tuple(signs)
    values = signed_split_values(weights, label)
    if values is None:
        return Component(
            label, sign_tag, False, None, None, kind, qdim,
            certificate="relation signs disagree with the signs of the null vector on the signed side",
        )
    l_side = sum(abs(y[a - 1]) for a in side)
    l_other = sum(abs(y[a - 1]) for a in other)
    k = values["k"]
    if l_other > l_side or (len(other) == 1 and l_other != l_side):
        return Component(
            label, sign_tag, False, None, None, kind, qdim,
            certificate=(
                f"needs 2|k|*{l_other} <= 1/2 with k = {k}; "
                f"got {2 * abs(k) * l_other}"
            ),
        )
    c = {a: values[f"c_{a}"] for a in range(1, len(y) + 1)}
    witness = _split_witness(weights, top, bottom, c)
    res = moment(weights, witness).residual if witness is not None else math.inf
    ok = res < WITNESS_TOL
    data = values
    return Component(
        label, sign_tag, ok, data if ok else None, invariant_fn() if ok else None, kind, qdim,
        certificate="explicit witness" if ok else f"witness construction failed ({res:.3e})",
        witness=witness, witness_residual=res,
    )


def _theta_split_invariant(t: ThetaMatrix, label: StratumLabel) -> int:
    top, bottom = label.top, label.bottom
    if len(top) == 3:
        return _minor(t, top)
    if len(bottom) == 3:
        return _minor(t, bottom)
    if label.bottom_signs:
        return _signed_point_invariant(t, top, bottom, label.bottom_signs)
    return _signed_point_invariant(t, bottom, top, label.top_signs)


def enumerate_type2(t: ThetaMatrix) -> list[StratumDecision]:
    """Decisions for the 14 split strata followed by the 48 signed refinements of the 2|2 splits."""
    if not is_locally_free_theta(t).ok:
        raise NotAdmissible("split classification needs a locally free weight matrix")
    y = null_vector_theta(t)
    out: list[StratumDecision] = []
    pairs = (1, 2, 3, 4)
    for sizes in ((3, 1), (1, 3)):
        for top in combinations(pairs, sizes[0]):
            bottom = tuple(a for a in pairs if a not in top)
            base = split_label("theta", top, bottom)
            comps = []
            for s in (1, -1):
                if len(bottom) == 1:
                    lab = split_label("theta", top, bottom, bottom_signs=(s,))
                else:
                    lab = split_label("theta", top, bottom, top_signs=(s,))
                comps.append(
                    _split_component(t, y, lab, lambda lab=lab: _theta_split_invariant(t, lab))
                )
            out.append(StratumDecision(base, tuple(comps), _stratum_dim(top, bottom, None)))
    signed = []
    for top in combinations(pairs, 2):
        bottom = tuple(a for a in pairs if a not in top)
        base = split_label("theta", top, bottom)
        lt = sum(abs(y[a - 1]) for a in top)
        lb = sum(abs(y[a - 1]) for a in bottom)
        kmax = Fraction(1, 4 * max(lt, lb))
        c0 = {a: Fraction(0) for a in pairs}
        witness = _split_witness(t, top, bottom, c0)
        res = moment(t, witness).residual
        ok = res < WITNESS_TOL
        comp = Component(
            base, None, ok, {"k_max": kmax} if ok else None,
            _split22_index(y, top, bottom) if ok else None, "Sphere", 2,
            certificate="explicit witness at k = 0" if ok else f"witness residual {res:.3e}",
            witness=witness, witness_residual=res,
        )
        out.append(StratumDecision(base, (comp,), _stratum_dim(top, bottom, None)))
        for where in ("bottom", "top"):
            for signs in product((1, -1), repeat=2):
                if where == "bottom":
                    lab = split_label("theta", top, bottom, bottom_signs=signs)
                else:
                    lab = split_label("theta", top, bottom, top_signs=signs)
                c = _split_component(t, y, lab, lambda lab=lab: _theta_split_invariant(t, lab))
                signed.append(StratumDecision(lab, (c,), _stratum_dim(top, bottom, where)))
    return out + signed


# ---------------------------------------------------------------- catalogs


def _keep(entry_inv: int) -> bool:
    return abs(entry_inv) != 1


def catalog_theta(t: ThetaMatrix) -> SingularLocusCatalog:
    """Singular locus candidates for a 3x4 weight matrix, filtered by the |invariant| = 1 rule."""
    t1 = type1_catalog(t)
    excluded: list[tuple[StratumLabel, int]] = []
    empty: list[StratumLabel] = []
    type1 = []
    for dec in t1.decisions:
        comp = dec.components[0]
        if not comp.intersects:
            if dec.label in t1.realized:
                empty.append(dec.label)
            continue
        if _keep(comp.isotropy_invariant):
            type1.append(CatalogEntry(dec.label, comp.isotropy_invariant, "Sphere", comp.exact_data))
        else:
            excluded.append((dec.label, comp.isotropy_invariant))

    type2 = []
    groups: dict[frozenset, dict] = {}
    for dec in enumerate_type2(t):
        for comp in dec.components:
            if not comp.intersects:
                empty.append(comp.label)
                continue
            if comp.quotient_kind == "Sphere":
                if _keep(comp.isotropy_invariant):
                    type2.append(
                        CatalogEntry(comp.label, comp.isotropy_invariant, "Sphere", comp.exact_data)
                    )
                else:
                    excluded.append((comp.label, comp.isotropy_invariant))
                continue
            lab = comp.label
            key = frozenset((lab.top, lab.bottom))
            point_key = (lab.top, lab.bottom, comp.exact_data["k"])
            bucket = groups.setdefault(key, {})
            if point_key in bucket:
                labels, inv, data = bucket[point_key]
                bucket[point_key] = (labels + (lab,), inv, data)
            else:
                bucket[point_key] = ((lab,), comp.isotropy_invariant, comp.exact_data)

    point_sets = []
    for key in sorted(groups, key=lambda k: sorted(k)):
        kept = []
        for pk in sorted(groups[key], key=lambda p: (p[0], p[1], p[2])):
            labels, inv, data = groups[key][pk]
            if _keep(inv):
                kept.append(PointEntry(labels, inv, data))
            else:
                excluded.extend((lab, inv) for lab in labels)
        if kept:
            point_sets.append(tuple(kept))
    return SingularLocusCatalog(
        "theta",
        type1_spheres=tuple(type1),
        type2_spheres=tuple(type2),
        point_sets=tuple(point_sets),
        excluded=tuple(excluded),
        empty=tuple(empty),
    )


def _omega_split_invariant(o: OmegaMatrix, label: StratumLabel) -> int:
    two = label.top if len(label.top) == 2 else label.bottom
    return _minor(o, two)


def omega_strata(o: OmegaMatrix) -> list[StratumDecision]:
    """Type-1 decisions inside S_0 followed by the twelve signed split components."""
    y = null_vector_omega(o)
    out = []
    for signs in product((1, -1), repeat=3):
        label = StratumLabel("omega", "type1", triple=signs)
        try:
            sol = solve_type1_system(o, signs)
        except SingularSystem:
            comp = Component(
                label, None, False, None, None, "Sphere", 2,
                certificate="singular system; the null line sums to zero, so the norm equation fails",
            )
            out.append(StratumDecision(label, (comp,)))
            continue
        out.append(_type1_decision(o, label, signs, signs, sol))
    pairs = (1, 2, 3)
    for sizes in ((2, 1), (1, 2)):
        for top in combinations(pairs, sizes[0]):
            bottom = tuple(a for a in pairs if a not in top)
            comps = []
            for s in (1, -1):
                if len(bottom) == 1:
                    lab = split_label("omega", top, bottom, bottom_signs=(s,))
                else:
                    lab = split_label("omega", top, bottom, top_signs=(s,))
                comps.append(
                    _split_component(o, y, lab, lambda lab=lab: _omega_split_invariant(o, lab))
                )
            out.append(StratumDecision(split_label("omega", top, bottom), tuple(comps)))
    return out


def catalog_omega(o: OmegaMatrix) -> SingularLocusCatalog:
    """Singular locus candidates for a 2x3 weight matrix.

    The stratum u1 != 0 never contributes.  Two mirror sign patterns (a and -a)
    solve the type-1 system; the one with first sign + is reported as the
    sphere and the other is listed under ``mirrors``.
    """
    if not is_locally_free_omega(o).ok:
        raise NotAdmissible("catalog needs a locally free weight matrix")
    excluded: list[tuple[StratumLabel, int]] = []
    empty: list[StratumLabel] = []
    sphere: list[CatalogEntry] = []
    mirrors: list[CatalogEntry] = []
    points: list[PointEntry] = []
    for dec in omega_strata(o):
        for comp in dec.components:
            if not comp.intersects:
                empty.append(comp.label)
                continue
            inv = comp.isotropy_invariant
            if comp.quotient_kind == "Sphere":
                entry = CatalogEntry(comp.label, inv, "Sphere", comp.exact_data)
                if comp.label.triple[0] < 0:
                    mirrors.append(entry)
                elif _keep(inv):
                    sphere.append(entry)
                else:
                    excluded.append((comp.label, inv))
            elif _keep(inv):
                points.append(PointEntry((comp.label,), inv, comp.exact_data))
            else:
                excluded.append((comp.label, inv))
    return SingularLocusCatalog(
        "omega",
        point_sets=(tuple(points),) if points else (),
        omega_sphere=tuple(sphere),
        excluded=tuple(excluded),
        empty=tuple(empty),
        smooth=(StratumLabel("omega", "s1"),),
        mirrors=tuple(mirrors),
    )
