"""Weight matrices of the torus actions and their determinant invariants.

Two shapes are supported: a 3x4 matrix ``Theta`` (rows p, q, l) acting on
H^8 and a 2x3 matrix ``Omega`` (rows p, q) acting on H^7.  Every quantity in
this module is an exact Python integer.

Box determinants are indexed by the sign triple ``(s2, s3, s4)``; the entry is
``det3`` of the rows ``col1 + s2*col2``, ``col1 + s3*col3``, ``col1 + s4*col4``
where ``col_a = (p_a, q_a, l_a)``.  The four boxes used to invert the
box/minor relations are pinned as

    ======  ==============
    name    sign triple
    ======  ==============
    X       (+1, +1, +1)
    Y       (+1, -1, +1)
    Z       (-1, +1, -1)
    W       (+1, -1, -1)
    ======  ==============

With this dictionary ``(X, Y, Z, W) = (1, 1, -1, 1)`` maps to the minors
``(-1, -1, 2, -1)`` and its negative to ``(1, 1, -2, 1)``.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations, product
from typing import Iterator, Mapping, NamedTuple, Sequence

from .exact_linalg import det2, det3, gcd_list

__all__ = [
    "ThetaMatrix",
    "OmegaMatrix",
    "MinorSetTheta",
    "MinorSetOmega",
    "BoxSet",
    "SIGN_TRIPLES",
    "XYZW",
    "BOX_MINOR_COEFFS",
    "ParityError",
    "Verdict",
    "ObstructionReport",
    "minors_theta",
    "boxes",
    "boxes_via_minors",
    "minors_via_boxes",
    "is_locally_free_theta",
    "theorem_a_admissible",
    "freeness_obstruction",
    "minors_omega",
    "is_locally_free_omega",
    "is_free_omega",
    "null_vector_theta",
    "null_vector_omega",
]

Sign = int
SignTriple = tuple[int, int, int]
BoxSet = Mapping[SignTriple, int]

THETA_TRIPLES: tuple[tuple[int, int, int], ...] = tuple(combinations(range(4), 3))
OMEGA_PAIRS: tuple[tuple[int, int], ...] = tuple(combinations(range(3), 2))

# (+,+,+), (+,+,-), ..., (-,-,-)
SIGN_TRIPLES: tuple[SignTriple, ...] = tuple(product((1, -1), repeat=3))

XYZW: dict[str, SignTriple] = {
    "X": (1, 1, 1),
    "Y": (1, -1, 1),
    "Z": (-1, 1, -1),
    "W": (1, -1, -1),
}

# Coefficients of (D123, D124, D134, D234) in each box, one row per sign triple.
BOX_MINOR_COEFFS: dict[SignTriple, tuple[int, int, int, int]] = {
    (1, 1, 1): (1, -1, 1, 1),
    (1, -1, 1): (-1, -1, -1, -1),
    (1, 1, -1): (1, 1, -1, -1),
    (1, -1, -1): (-1, 1, 1, 1),
    (-1, 1, 1): (-1, 1, 1, -1),
    (-1, -1, 1): (1, 1, -1, 1),
    (-1, 1, -1): (-1, -1, -1, 1),
    (-1, -1, -1): (1, -1, 1, -1),
}


class ParityError(ValueError):
    """The box values do not determine integral minors."""


def _int_row(row: Sequence, n: int, name: str) -> tuple[int, ...]:
    vals = tuple(row)
    if len(vals) != n:
        raise ValueError(f"row {name} must have {n} entries, got {len(vals)}")
    out = []
    for v in vals:
        if isinstance(v, bool) or int(v) != v:
            raise TypeError(f"row {name} has a non-integer entry {v!r}")
        out.append(int(v))
    return tuple(out)


@dataclass(frozen=True)
class ThetaMatrix:
    """3x4 integer weight matrix with rows p, q, l."""

    p: tuple[int, int, int, int]
    q: tuple[int, int, int, int]
    l: tuple[int, int, int, int]

    def __post_init__(self):
        for name in ("p", "q", "l"):
            object.__setattr__(self, name, _int_row(getattr(self, name), 4, name))

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]]) -> "ThetaMatrix":
        rows = list(rows)
        if len(rows) != 3:
            raise ValueError("ThetaMatrix needs exactly 3 rows")
        return cls(*rows)

    @property
    def rows(self) -> tuple[tuple[int, ...], ...]:
        return (self.p, self.q, self.l)

    def column(self, a: int) -> tuple[int, int, int]:
        """Weights (p_a, q_a, l_a) of pair ``a`` (0-based)."""
        return (self.p[a], self.q[a], self.l[a])

    def columns(self) -> tuple[tuple[int, int, int], ...]:
        return tuple(self.column(a) for a in range(4))

    def swap_columns(self, a: int, b: int) -> "ThetaMatrix":
        def sw(r):
            r = list(r)
            r[a], r[b] = r[b], r[a]
            return r

        return ThetaMatrix(sw(self.p), sw(self.q), sw(self.l))

    def tolist(self) -> list[list[int]]:
        return [list(r) for r in self.rows]


@dataclass(frozen=True)
class OmegaMatrix:
    """2x3 integer weight matrix with rows p, q."""

    p: tuple[int, int, int]
    q: tuple[int, int, int]

    def __post_init__(self):
        for name in ("p", "q"):
            object.__setattr__(self, name, _int_row(getattr(self, name), 3, name))

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]]) -> "OmegaMatrix":
        rows = list(rows)
        if len(rows) != 2:
            raise ValueError("OmegaMatrix needs exactly 2 rows")
        return cls(*rows)

    @property
    def rows(self) -> tuple[tuple[int, ...], ...]:
        return (self.p, self.q)

    def column(self, a: int) -> tuple[int, int]:
        return (self.p[a], self.q[a])

    def columns(self) -> tuple[tuple[int, int], ...]:
        return tuple(self.column(a) for a in range(3))

    def tolist(self) -> list[list[int]]:
        return [list(r) for r in self.rows]


class MinorSetTheta(NamedTuple):
    d123: int
    d124: int
    d134: int
    d234: int

    def as_dict(self) -> dict[str, int]:
        return {"123": self.d123, "124": self.d124, "134": self.d134, "234": self.d234}


class MinorSetOmega(NamedTuple):
    d12: int
    d13: int
    d23: int

    def as_dict(self) -> dict[str, int]:
        return {"12": self.d12, "13": self.d13, "23": self.d23}


class Verdict(NamedTuple):
    ok: bool
    witness: str | None = None


def minors_theta(t: ThetaMatrix) -> MinorSetTheta:
    """The four 3x3 column minors in lexicographic order (123, 124, 134, 234)."""
    cols = t.columns()
    return MinorSetTheta(*(det3([cols[i] for i in idx]) for idx in THETA_TRIPLES))


def boxes(t: ThetaMatrix) -> dict[SignTriple, int]:
    """All eight box determinants, computed directly from the sign-combined rows."""
    c = t.columns()
    out = {}
    for signs in SIGN_TRIPLES:
        rows = [[c[0][k] + s * c[a][k] for k in range(3)] for a, s in zip((1, 2, 3), signs)]
        out[signs] = det3(rows)
    return out


def boxes_via_minors(m: MinorSetTheta | Sequence[int]) -> dict[SignTriple, int]:
    """The eight boxes as signed sums of the minors."""
    m = tuple(m)
    return {s: sum(c * d for c, d in zip(coeffs, m)) for s, coeffs in BOX_MINOR_COEFFS.items()}


def minors_via_boxes(x: int, y: int, z: int, w: int) -> MinorSetTheta:
    """Recover the minors from the four boxes X, Y, Z, W (see module docstring)."""
    sums = {"Y+W": y + w, "X+Y": x + y, "X+Y-Z+W": x + y - z + w, "Z-Y": z - y}
    odd = [k for k, v in sums.items() if v % 2]
    if odd:
        raise ParityError(f"odd sums {odd} for (X,Y,Z,W)=({x},{y},{z},{w})")
    return MinorSetTheta(-(y + w) // 2, -(x + y) // 2, (x + y - z + w) // 2, (z - y) // 2)


def _sign_str(s: SignTriple) -> str:
    return "".join("+" if v > 0 else "-" for v in s)


def is_locally_free_theta(t: ThetaMatrix) -> Verdict:
    """Local freeness: every minor and every box is nonzero.

    On failure the witness names the first vanishing determinant, minors first.
    """
    for name, value in minors_theta(t).as_dict().items():
        if value == 0:
            return Verdict(False, f"minor D{name} = 0")
    for signs, value in boxes(t).items():
        if value == 0:
            return Verdict(False, f"box({_sign_str(signs)}) = 0")
    return Verdict(True)


def theorem_a_admissible(t: ThetaMatrix | MinorSetTheta | Sequence[int]) -> bool:
    """Conditions phrased on the minors alone.

    All minors nonzero, their sum nonzero, no minor equal to the sum of the
    other three, and no sum of two equal to the sum of the other two.
    """
    d = tuple(minors_theta(t)) if isinstance(t, ThetaMatrix) else tuple(t)
    if any(v == 0 for v in d):
        return False
    total = sum(d)
    if total == 0:
        return False
    if any(v == total - v for v in d):
        return False
    for i, j in combinations(range(4), 2):
        if d[i] + d[j] == total - d[i] - d[j]:
            return False
    return True


@dataclass(frozen=True)
class ObstructionReport:
    status: str  # "UNSAT" or "REFUTED"
    assignments: int
    parity_failures: int
    zero_minor_rejections: int
    inconsistent: int
    consistent_examples: tuple
    near_misses: tuple  # ((minors, {sign triple: recomputed box}), ...)

    def to_dict(self) -> dict:
        return {
            "status": self.status,
            "assignments": self.assignments,
            "parity_failures": self.parity_failures,
            "zero_minor_rejections": self.zero_minor_rejections,
            "inconsistent": self.inconsistent,
            "near_misses": [
                {
                    "minors": list(m),
                    "violated_boxes": {_sign_str(s): v for s, v in viol.items()},
                }
                for m, viol in self.near_misses
            ],
        }


def _iter_unit_assignments() -> Iterator[dict[SignTriple, int]]:
    for values in product((1, -1), repeat=8):
        yield dict(zip(SIGN_TRIPLES, values))


def freeness_obstruction() -> ObstructionReport:
    """Exhaustive check that no admissible matrix has all eight boxes equal to +-1.

    A free action would need every box to be a unit.  All 256 unit
    assignments are tried: minors are recovered from X, Y, Z, W, the eight
    boxes are recomputed, and the assignment counts only if it reproduces
    itself with all minors nonzero.
    """
    parity = zero = inconsistent = 0
    consistent = []
    near = {}
    for assign in _iter_unit_assignments():
        try:
            m = minors_via_boxes(*(assign[XYZW[k]] for k in "XYZW"))
        except ParityError:
            parity += 1
            continue
        recomputed = boxes_via_minors(m)
        if recomputed != assign:
            inconsistent += 1
            if all(m):
                violated = {s: v for s, v in recomputed.items() if abs(v) != 1}
                near[tuple(m)] = violated
            continue
        if not all(m):
            zero += 1
            continue
        consistent.append((tuple(m), assign))
    return ObstructionReport(
        status="REFUTED" if consistent else "UNSAT",
        assignments=256,
        parity_failures=parity,
        zero_minor_rejections=zero,
        inconsistent=inconsistent,
        consistent_examples=tuple(consistent),
        near_misses=tuple(sorted(near.items())),
    )


def minors_omega(o: OmegaMatrix) -> MinorSetOmega:
    """The three 2x2 column minors (12, 13, 23)."""
    cols = o.columns()
    return MinorSetOmega(*(det2([cols[i], cols[j]]) for i, j in OMEGA_PAIRS))


def is_locally_free_omega(o: OmegaMatrix) -> Verdict:
    for name, value in minors_omega(o).as_dict().items():
        if value == 0:
            return Verdict(False, f"minor D{name} = 0")
    return Verdict(True)


def is_free_omega(o: OmegaMatrix) -> Verdict:
    """Freeness on the stratum u1 != 0: locally free and gcd of minors equal to 1."""
    lf = is_locally_free_omega(o)
    if not lf.ok:
        return lf
    g = gcd_list(minors_omega(o))
    if g != 1:
        return Verdict(False, f"gcd(D12, D13, D23) = {g}")
    return Verdict(True)


def null_vector_theta(t: ThetaMatrix | MinorSetTheta) -> tuple[int, int, int, int]:
    """Integer kernel vector of Theta: (D234, -D134, D124, -D123)."""
    d = minors_theta(t) if isinstance(t, ThetaMatrix) else t
    return (d.d234, -d.d134, d.d124, -d.d123)


def null_vector_omega(o: OmegaMatrix | MinorSetOmega) -> tuple[int, int, int]:
    """Integer kernel vector of Omega: (D23, -D13, D12)."""
    d = minors_omega(o) if isinstance(o, OmegaMatrix) else o
    return (d.d23, -d.d13, d.d12)
