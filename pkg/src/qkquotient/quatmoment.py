"""Quaternions, points of H^n, the moment maps and the group action.

A point of H^n is stored as a real ``(n, 4)`` array of (1, i, j, k)
coefficients.  The complex splitting ``u = z + j w`` reads
``z = r + i*x_i`` and ``w = x_j - i*x_k``.

Pair layout: for H^8 the quaternionic pairs are (u1,u2), (u3,u4), (u5,u6),
(u7,u8); for H^7 the first coordinate is unpaired and the pairs are
(u2,u3), (u4,u5), (u6,u7).
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .weights import OmegaMatrix, ThetaMatrix

__all__ = [
    "Quaternion",
    "HVector",
    "MomentValue",
    "GroupElement",
    "DimensionMismatch",
    "qmul",
    "qconj",
    "mu",
    "nu_theta",
    "nu_omega",
    "moment",
    "apply_action",
    "real_matrix_rank",
    "j_involution",
    "pair_indices",
    "RANK_RTOL",
]

RANK_RTOL = 1e-8

_CONJ = np.array([1.0, -1.0, -1.0, -1.0])
_UNITS = np.eye(4)[1:]  # i, j, k


class DimensionMismatch(ValueError):
    pass


def qmul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Hamilton product of quaternion arrays, broadcasting over leading axes."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    a0, a1, a2, a3 = np.moveaxis(a, -1, 0)
    b0, b1, b2, b3 = np.moveaxis(b, -1, 0)
    return np.stack(
        [
            a0 * b0 - a1 * b1 - a2 * b2 - a3 * b3,
            a0 * b1 + a1 * b0 + a2 * b3 - a3 * b2,
            a0 * b2 - a1 * b3 + a2 * b0 + a3 * b1,
            a0 * b3 + a1 * b2 - a2 * b1 + a3 * b0,
        ],
        axis=-1,
    )


def qconj(a: np.ndarray) -> np.ndarray:
    return np.asarray(a, dtype=float) * _CONJ


@dataclass(frozen=True)
class Quaternion:
    r: float = 0.0
    i: float = 0.0
    j: float = 0.0
    k: float = 0.0

    @classmethod
    def from_array(cls, a) -> "Quaternion":
        return cls(*(float(x) for x in a))

    @classmethod
    def from_complex(cls, c: complex) -> "Quaternion":
        return cls(c.real, c.imag, 0.0, 0.0)

    def to_array(self) -> np.ndarray:
        return np.array([self.r, self.i, self.j, self.k])

    def __mul__(self, other):
        if isinstance(other, Quaternion):
            return Quaternion.from_array(qmul(self.to_array(), other.to_array()))
        return Quaternion(*(other * self.to_array()))

    def __rmul__(self, other):
        return Quaternion(*(other * self.to_array()))

    def __add__(self, other: "Quaternion") -> "Quaternion":
        return Quaternion.from_array(self.to_array() + other.to_array())

    def __sub__(self, other: "Quaternion") -> "Quaternion":
        return Quaternion.from_array(self.to_array() - other.to_array())

    def __neg__(self) -> "Quaternion":
        return Quaternion.from_array(-self.to_array())

    def conj(self) -> "Quaternion":
        return Quaternion(self.r, -self.i, -self.j, -self.k)

    def norm(self) -> float:
        return float(np.linalg.norm(self.to_array()))

    def inverse(self) -> "Quaternion":
        n2 = self.norm() ** 2
        return Quaternion.from_array(self.conj().to_array() / n2)


ONE = Quaternion(1.0)


class HVector:
    """Immutable point of H^n, n in {7, 8}."""

    __slots__ = ("_a",)

    def __init__(self, entries):
        a = np.array(
            [q.to_array() if isinstance(q, Quaternion) else q for q in entries], dtype=float
        )
        if a.ndim != 2 or a.shape[1] != 4:
            raise ValueError("HVector entries must be quaternions (length-4 rows)")
        if a.shape[0] not in (7, 8):
            raise DimensionMismatch(f"HVector needs 7 or 8 entries, got {a.shape[0]}")
        a.setflags(write=False)
        self._a = a

    @classmethod
    def from_zw(cls, z: Sequence[complex], w: Sequence[complex]) -> "HVector":
        z = np.asarray(z, dtype=complex)
        w = np.asarray(w, dtype=complex)
        if z.shape != w.shape:
            raise ValueError("z and w must have equal length")
        return cls(np.stack([z.real, z.imag, w.real, -w.imag], axis=-1))

    @classmethod
    def from_flat(cls, x: np.ndarray) -> "HVector":
        x = np.asarray(x, dtype=float)
        return cls(x.reshape(-1, 4))

    @property
    def array(self) -> np.ndarray:
        return self._a

    @property
    def n(self) -> int:
        return self._a.shape[0]

    @property
    def z(self) -> np.ndarray:
        return self._a[:, 0] + 1j * self._a[:, 1]

    @property
    def w(self) -> np.ndarray:
        return self._a[:, 2] - 1j * self._a[:, 3]

    @property
    def entries(self) -> tuple[Quaternion, ...]:
        return tuple(Quaternion.from_array(q) for q in self._a)

    def flat(self) -> np.ndarray:
        return self._a.reshape(-1).copy()

    def norm(self) -> float:
        return float(np.linalg.norm(self._a))

    def normalized(self) -> "HVector":
        return HVector(self._a / self.norm())

    def __len__(self) -> int:
        return self.n

    def __getitem__(self, idx) -> Quaternion:
        return Quaternion.from_array(self._a[idx])

    def __repr__(self) -> str:
        return f"HVector(n={self.n}, |u|={self.norm():.6g})"


def _as_array(u) -> np.ndarray:
    return u.array if isinstance(u, HVector) else np.asarray(u, dtype=float)


def pair_indices(n: int) -> list[tuple[int, int]]:
    """0-based index pairs of the quaternionic pairs for the given dimension."""
    if n == 8:
        return [(0, 1), (2, 3), (4, 5), (6, 7)]
    if n == 7:
        return [(1, 2), (3, 4), (5, 6)]
    raise DimensionMismatch(f"no pair layout for n={n}")


def mu(u) -> np.ndarray:
    """Sp(1) moment map: rows are the imaginary parts of sum conj(u) s u for s = i, j, k."""
    a = _as_array(u)
    ca = qconj(a)
    out = np.empty((3, 3))
    for row, unit in enumerate(_UNITS):
        out[row] = qmul(ca, qmul(np.broadcast_to(unit, a.shape), a)).sum(axis=0)[1:]
    return out


def _pair_terms(a: np.ndarray) -> np.ndarray:
    """conj(u_a) u_b - conj(u_b) u_a for each quaternionic pair, imaginary parts only."""
    idx = pair_indices(a.shape[0])
    first = a[[i for i, _ in idx]]
    second = a[[j for _, j in idx]]
    x = qmul(qconj(first), second)
    return (x - qconj(x))[:, 1:]


def nu_theta(t: ThetaMatrix, u) -> np.ndarray:
    """Torus moment map on H^8 as a 3x3 array (rows weighted by p, q, l)."""
    a = _as_array(u)
    if a.shape[0] != 8:
        raise DimensionMismatch("nu_theta needs a point of H^8")
    return np.asarray(t.rows, dtype=float) @ _pair_terms(a)


def nu_omega(o: OmegaMatrix, u) -> np.ndarray:
    """Torus moment map on H^7 as a 2x3 array (rows weighted by p, q)."""
    a = _as_array(u)
    if a.shape[0] != 7:
        raise DimensionMismatch("nu_omega needs a point of H^7")
    return np.asarray(o.rows, dtype=float) @ _pair_terms(a)


@dataclass(frozen=True)
class MomentValue:
    sp1_part: np.ndarray
    torus_part: np.ndarray

    @property
    def residual(self) -> float:
        return float(math.sqrt(np.sum(self.sp1_part**2) + np.sum(self.torus_part**2)))


def moment(weights: ThetaMatrix | OmegaMatrix, u) -> MomentValue:
    if isinstance(weights, ThetaMatrix):
        return MomentValue(mu(u), nu_theta(weights, u))
    return MomentValue(mu(u), nu_omega(weights, u))


@dataclass(frozen=True)
class GroupElement:
    """Element of T^k x Sp(1) x U(1).  ``r`` is ignored for 2x3 weights."""

    t: float = 0.0
    s: float = 0.0
    r: float = 0.0
    lam: Quaternion = field(default_factory=lambda: ONE)
    rho: complex = 1.0 + 0.0j

    def __post_init__(self):
        if abs(self.lam.norm() - 1.0) > 1e-12:
            raise ValueError("lambda must be a unit quaternion")
        if abs(abs(self.rho) - 1.0) > 1e-12:
            raise ValueError("rho must be a unit complex number")

    @classmethod
    def random(cls, rng: np.random.Generator, with_rho: bool = True) -> "GroupElement":
        t, s, r = rng.uniform(0.0, 2 * math.pi, size=3)
        lam = rng.normal(size=4)
        lam /= np.linalg.norm(lam)
        rho = complex(np.exp(1j * rng.uniform(0.0, 2 * math.pi))) if with_rho else 1.0 + 0j
        return cls(t, s, r, Quaternion.from_array(lam), rho)

    def angles(self, weights: ThetaMatrix | OmegaMatrix) -> np.ndarray:
        rows = np.asarray(weights.rows, dtype=float)
        params = np.array([self.t, self.s, self.r][: rows.shape[0]])
        return params @ rows


def apply_action(g: GroupElement, weights: ThetaMatrix | OmegaMatrix, u: HVector) -> HVector:
    """Rotate each quaternionic pair by A(theta), then u -> lambda * u * rho."""
    a = _as_array(u)
    expected = 8 if isinstance(weights, ThetaMatrix) else 7
    if a.shape[0] != expected:
        raise DimensionMismatch(f"expected a point of H^{expected}, got H^{a.shape[0]}")
    out = a.copy()
    for theta, (i, j) in zip(g.angles(weights), pair_indices(expected)):
        c, s = math.cos(theta), math.sin(theta)
        out[i] = c * a[i] + s * a[j]
        out[j] = -s * a[i] + c * a[j]
    lam = g.lam.to_array()
    rho = np.array([g.rho.real, g.rho.imag, 0.0, 0.0])
    out = qmul(qmul(np.broadcast_to(lam, out.shape), out), np.broadcast_to(rho, out.shape))
    return HVector(out)


def real_matrix_rank(u, rtol: float = RANK_RTOL) -> tuple[np.ndarray, int, float]:
    """The 4 x n real coefficient matrix, its numerical rank, and the smallest pair norm."""
    a = _as_array(u)
    m = a.T.copy()
    sv = np.linalg.svd(m, compute_uv=False)
    rank = int(np.sum(sv > rtol * sv[0])) if sv[0] > 0 else 0
    norms = [math.sqrt(np.sum(a[i] ** 2) + np.sum(a[j] ** 2)) for i, j in pair_indices(a.shape[0])]
    return m, rank, float(min(norms))


def j_involution(u: HVector) -> HVector:
    """(z, w) -> (-w, z), i.e. left multiplication by j."""
    return HVector.from_zw(-u.w, u.z)
