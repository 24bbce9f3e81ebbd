"""Exact integer/rational linear algebra for tiny fixed-size systems.

Everything here works on Python ints and :class:`fractions.Fraction`, so no
value ever passes through floating point.
"""
from __future__ import annotations

from fractions import Fraction
from functools import reduce
from math import gcd
from typing import Sequence

Rational = Fraction

__all__ = [
    "Rational",
    "SingularMatrix",
    "det2",
    "det3",
    "det4",
    "solve3",
    "solve4",
    "gcd_list",
]


class SingularMatrix(ValueError):
    """Raised when a square system has zero determinant."""


def _to_rational(x) -> Fraction:
    if isinstance(x, float):
        raise TypeError("floats are not accepted by exact_linalg")
    return Fraction(x)


def det2(m: Sequence[Sequence[int]]) -> int:
    return m[0][0] * m[1][1] - m[0][1] * m[1][0]


def det3(m: Sequence[Sequence[int]]) -> int:
    """Determinant of a 3x3 matrix by cofactor expansion along the first row."""
    (a, b, c), (d, e, f), (g, h, i) = m
    return a * (e * i - f * h) - b * (d * i - f * g) + c * (d * h - e * g)


def det4(m: Sequence[Sequence]) -> Fraction:
    """Exact determinant of a 4x4 rational matrix (first-row Laplace expansion)."""
    rows = [[_to_rational(x) for x in row] for row in m]
    if len(rows) != 4 or any(len(r) != 4 for r in rows):
        raise ValueError("det4 expects a 4x4 matrix")
    total = Fraction(0)
    for col in range(4):
        if rows[0][col] == 0:
            continue
        minor = [[r[c] for c in range(4) if c != col] for r in rows[1:]]
        sign = -1 if col % 2 else 1
        total += sign * rows[0][col] * det3(minor)
    return total


def _cramer(a, b, det_fn, n: int) -> tuple[Fraction, ...]:
    rows = [[_to_rational(x) for x in row] for row in a]
    rhs = [_to_rational(x) for x in b]
    if len(rows) != n or any(len(r) != n for r in rows) or len(rhs) != n:
        raise ValueError(f"expected a {n}x{n} system")
    d = Fraction(det_fn(rows))
    if d == 0:
        raise SingularMatrix(f"{n}x{n} system has zero determinant")
    out = []
    for col in range(n):
        replaced = [[rhs[i] if j == col else rows[i][j] for j in range(n)] for i in range(n)]
        out.append(Fraction(det_fn(replaced)) / d)
    return tuple(out)


def solve3(a: Sequence[Sequence], b: Sequence) -> tuple[Fraction, ...]:
    """Unique solution of a 3x3 rational system by Cramer's rule."""
    return _cramer(a, b, det3, 3)


def solve4(a: Sequence[Sequence], b: Sequence) -> tuple[Fraction, ...]:
    """Unique solution of a 4x4 rational system by Cramer's rule.

    Raises :class:`SingularMatrix` when ``det4(a) == 0``.
    """
    return _cramer(a, b, det4, 4)


def gcd_list(values: Sequence[int]) -> int:
    """Non-negative gcd of the absolute values; ``gcd_list([]) == 0``."""
    return reduce(gcd, (abs(int(v)) for v in values), 0)
