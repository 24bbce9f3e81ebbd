"""Numerical points of the zero set N = mu^-1(0) ∩ nu^-1(0) on the unit sphere.

Every constraint component is a real quadratic form in the 4n real
coordinates, so the forms are extracted once per weight matrix by
polarization and the Jacobian is exact.  The iteration is Levenberg-Marquardt
on the tangent space of the sphere followed by renormalization.

Restricted searches work on a linear subspace cut out by vanishing complex
coordinates and relations ``lhs = coeff * rhs`` between them.  Complex
coordinates are addressed as ``("z", k)`` or ``("w", k)`` with 0-based ``k``.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np

from .quatmoment import HVector, moment, real_matrix_rank
from .weights import OmegaMatrix, ThetaMatrix, is_locally_free_omega, is_locally_free_theta

__all__ = [
    "SolveReport",
    "NotConverged",
    "Relation",
    "Subspace",
    "find_point",
    "find_point_omega",
    "find_point_restricted",
    "pair_type1_relations",
    "quadratic_forms",
    "DEFAULT_TOL",
    "DEFAULT_MAX_ITER",
]

DEFAULT_TOL = 1e-10
DEFAULT_MAX_ITER = 500

_LAMBDA0 = 1e-3
_LAMBDA_MAX = 1e16

Coord = tuple[str, int]


@dataclass(frozen=True)
class SolveReport:
    point: HVector
    residual: float
    iterations: int
    converged: bool
    rank: int
    min_pair_norm: float
    seed: int | None = None

    def pair_norms_sq(self) -> np.ndarray:
        """|u_{2a-1}|^2 for the first member of each pair (H^8 layout)."""
        a = self.point.array
        return np.sum(a[0::2] ** 2, axis=1)


class NotConverged(RuntimeError):
    """Raised on request when the solver stops above tolerance; carries the best report."""

    def __init__(self, report: SolveReport):
        super().__init__(
            f"no convergence after {report.iterations} iterations, residual {report.residual:.3e}"
        )
        self.report = report


@dataclass(frozen=True)
class Relation:
    """Complex linear relation ``lhs = coeff * rhs``."""

    lhs: Coord
    coeff: complex
    rhs: Coord


# Real-coordinate layout of one quaternion: (Re z, Im z, Re w, -Im w).
def _real_parts(coord: Coord, n: int) -> tuple[np.ndarray, np.ndarray]:
    """Row vectors extracting Re and Im of a complex coordinate from the flat real vector."""
    kind, k = coord
    if not 0 <= k < n:
        raise IndexError(f"coordinate index {k} out of range for n={n}")
    re = np.zeros(4 * n)
    im = np.zeros(4 * n)
    if kind == "z":
        re[4 * k] = 1.0
        im[4 * k + 1] = 1.0
    elif kind == "w":
        re[4 * k + 2] = 1.0
        im[4 * k + 3] = -1.0
    else:
        raise ValueError(f"coordinate kind must be 'z' or 'w', got {kind!r}")
    return re, im


@dataclass(frozen=True)
class Subspace:
    n: int
    zeros: tuple[Coord, ...] = ()
    relations: tuple[Relation, ...] = ()
    basis: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        rows = []
        for c in self.zeros:
            rows.extend(_real_parts(c, self.n))
        for rel in self.relations:
            lre, lim = _real_parts(rel.lhs, self.n)
            rre, rim = _real_parts(rel.rhs, self.n)
            a, b = rel.coeff.real, rel.coeff.imag
            # lhs - (a + ib)(rre + i rim)
            rows.append(lre - (a * rre - b * rim))
            rows.append(lim - (a * rim + b * rre))
        dim = 4 * self.n
        if rows:
            c = np.array(rows)
            _, sv, vt = np.linalg.svd(c)
            rank = int(np.sum(sv > 1e-12 * max(sv[0], 1.0)))
            basis = vt[rank:].T
        else:
            basis = np.eye(dim)
        if basis.shape[1] == 0:
            raise ValueError("restriction leaves only the zero vector")
        object.__setattr__(self, "basis", basis)

    @property
    def dim(self) -> int:
        return self.basis.shape[1]


def _constraint_vector(weights, a: np.ndarray) -> np.ndarray:
    m = moment(weights, a)
    return np.concatenate([m.sp1_part.ravel(), m.torus_part.ravel()])


@lru_cache(maxsize=64)
def quadratic_forms(weights: ThetaMatrix | OmegaMatrix) -> np.ndarray:
    """Symmetric matrices S_k with F_k(x) = x^T S_k x for every constraint component."""
    n = 8 if isinstance(weights, ThetaMatrix) else 7
    dim = 4 * n
    eye = np.eye(dim)

    def f(x):
        return _constraint_vector(weights, x.reshape(n, 4))

    diag = np.array([f(eye[i]) for i in range(dim)])
    k = diag.shape[1]
    s = np.zeros((k, dim, dim))
    for i in range(dim):
        s[:, i, i] = diag[i]
        for j in range(i + 1, dim):
            v = (f(eye[i] + eye[j]) - diag[i] - diag[j]) / 2.0
            s[:, i, j] = v
            s[:, j, i] = v
    s.setflags(write=False)
    return s


def _lm(forms: np.ndarray, y: np.ndarray, tol: float, max_iter: int) -> tuple[np.ndarray, int]:
    """Levenberg-Marquardt on the unit sphere for the quadratic system y^T S_k y = 0."""
    y = y / np.linalg.norm(y)
    r = np.einsum("kij,i,j->k", forms, y, y)
    cost = float(np.linalg.norm(r))
    lam = _LAMBDA0
    eye = np.eye(y.size)
    it = 0
    while it < max_iter and cost >= tol:
        it += 1
        jac = 2.0 * forms @ y
        jac = jac - np.outer(jac @ y, y)  # tangent component
        a = jac.T @ jac
        g = jac.T @ r
        improved = False
        while lam < _LAMBDA_MAX:
            step = np.linalg.solve(a + lam * eye, -g)
            y_new = y + step
            y_new /= np.linalg.norm(y_new)
            r_new = np.einsum("kij,i,j->k", forms, y_new, y_new)
            cost_new = float(np.linalg.norm(r_new))
            if cost_new < cost:
                y, r, cost = y_new, r_new, cost_new
                lam = max(lam / 10.0, 1e-15)
                improved = True
                break
            lam *= 10.0
        if not improved:
            break
    return y, it


def _solve(
    weights,
    subspace: Subspace,
    seed: int,
    tol: float,
    max_iter: int,
    raise_on_failure: bool,
) -> SolveReport:
    if tol <= 0:
        raise ValueError("tol must be positive")
    if max_iter < 0:
        raise ValueError("max_iter must be non-negative")
    e = subspace.basis
    forms = quadratic_forms(weights)
    reduced = np.einsum("ia,kij,jb->kab", e, forms, e)
    rng = np.random.default_rng(seed)
    y0 = rng.standard_normal(e.shape[1])
    y, iterations = _lm(reduced, y0, tol, max_iter)
    x = e @ y
    x /= np.linalg.norm(x)
    point = HVector.from_flat(x)
    residual = moment(weights, point).residual
    _, rank, mpn = real_matrix_rank(point)
    report = SolveReport(point, residual, iterations, residual < tol, rank, mpn, seed)
    if raise_on_failure and not report.converged:
        raise NotConverged(report)
    return report


def find_point(
    t: ThetaMatrix,
    seed: int = 0,
    tol: float = DEFAULT_TOL,
    max_iter: int = DEFAULT_MAX_ITER,
    raise_on_failure: bool = False,
) -> SolveReport:
    """Search for a point of N(t) inside S^31 from a seeded random start."""
    verdict = is_locally_free_theta(t)
    if not verdict.ok:
        warnings.warn(f"weight matrix is not locally free ({verdict.witness})", stacklevel=2)
    return _solve(t, Subspace(8), seed, tol, max_iter, raise_on_failure)


def find_point_omega(
    o: OmegaMatrix,
    seed: int = 0,
    tol: float = DEFAULT_TOL,
    max_iter: int = DEFAULT_MAX_ITER,
    raise_on_failure: bool = False,
) -> SolveReport:
    """Search for a point of N(o) inside S^27."""
    verdict = is_locally_free_omega(o)
    if not verdict.ok:
        warnings.warn(f"weight matrix is not locally free ({verdict.witness})", stacklevel=2)
    return _solve(o, Subspace(7), seed, tol, max_iter, raise_on_failure)


def find_point_restricted(
    weights: ThetaMatrix | OmegaMatrix,
    mask: Iterable[Coord] = (),
    relations: Sequence[Relation] = (),
    seed: int = 0,
    tol: float = DEFAULT_TOL,
    max_iter: int = DEFAULT_MAX_ITER,
    raise_on_failure: bool = False,
) -> SolveReport:
    """Same search confined to the subspace where ``mask`` vanishes and ``relations`` hold."""
    n = 8 if isinstance(weights, ThetaMatrix) else 7
    sub = Subspace(n, tuple(mask), tuple(relations))
    return _solve(weights, sub, seed, tol, max_iter, raise_on_failure)


def pair_type1_relations(z_signs: Sequence[int], w_signs: Sequence[int]) -> list[Relation]:
    """Relations z_{2a} = a_z i z_{2a-1} and w_{2a} = a_w i w_{2a-1} for the four H^8 pairs."""
    rels = []
    for a, (sz, sw) in enumerate(zip(z_signs, w_signs)):
        rels.append(Relation(("z", 2 * a + 1), complex(0, sz), ("z", 2 * a)))
        rels.append(Relation(("w", 2 * a + 1), complex(0, sw), ("w", 2 * a)))
    return rels
