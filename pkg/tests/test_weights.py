import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from qkquotient.weights import (
    BOX_MINOR_COEFFS,
    SIGN_TRIPLES,
    XYZW,
    OmegaMatrix,
    ParityError,
    ThetaMatrix,
    boxes,
    boxes_via_minors,
    freeness_obstruction,
    is_free_omega,
    is_locally_free_omega,
    is_locally_free_theta,
    minors_omega,
    minors_theta,
    minors_via_boxes,
    null_vector_omega,
    null_vector_theta,
    theorem_a_admissible,
)

entry = st.integers(-20, 20)
theta_st = st.lists(st.lists(entry, min_size=4, max_size=4), min_size=3, max_size=3).map(
    ThetaMatrix.from_rows
)
omega_st = st.lists(st.lists(entry, min_size=3, max_size=3), min_size=2, max_size=2).map(
    OmegaMatrix.from_rows
)


def np_box(t, signs):
    c = np.array(t.columns(), dtype=float)
    rows = [c[0] + s * c[a] for a, s in zip((1, 2, 3), signs)]
    return int(round(np.linalg.det(np.array(rows))))


def test_example_minors(theta1, theta2):
    assert tuple(minors_theta(theta1)) == (-2, -1, 1, -1)
    assert tuple(minors_theta(theta2)) == (1, 72, -32, -63)


def test_theta1_boxes(theta1):
    b = boxes(theta1)
    assert b[(1, 1, 1)] == -1
    assert b == {s: np_box(theta1, s) for s in SIGN_TRIPLES}


def test_examples_admissible(theta1, theta2):
    for t in (theta1, theta2):
        assert is_locally_free_theta(t).ok
        assert theorem_a_admissible(t)


def test_matrix_validation():
    with pytest.raises(ValueError):
        ThetaMatrix.from_rows([[1, 2, 3, 4], [1, 2, 3, 4]])
    with pytest.raises(ValueError):
        ThetaMatrix((1, 2, 3), (1, 2, 3, 4), (1, 2, 3, 4))
    with pytest.raises(TypeError):
        ThetaMatrix((1.5, 2, 3, 4), (1, 2, 3, 4), (1, 2, 3, 4))
    with pytest.raises(ValueError):
        OmegaMatrix.from_rows([[1, 2, 3]])


def test_box_table_is_sign_pattern():
    # coefficient of (D123, D124, D134, D234) is (s2 s3, -s2 s4, s3 s4, s2 s3 s4)
    for (s2, s3, s4), coeffs in BOX_MINOR_COEFFS.items():
        assert coeffs == (s2 * s3, -s2 * s4, s3 * s4, s2 * s3 * s4)


@given(theta_st)
def test_boxes_equal_minor_combinations(t):
    assert boxes(t) == boxes_via_minors(minors_theta(t))


@given(theta_st)
def test_four_box_round_trip(t):
    b = boxes(t)
    assert minors_via_boxes(*(b[XYZW[k]] for k in "XYZW")) == minors_theta(t)


@given(theta_st)
def test_local_freeness_matches_minor_conditions(t):
    assert is_locally_free_theta(t).ok == theorem_a_admissible(t)


@given(theta_st)
def test_null_vector_in_kernel(t):
    y = null_vector_theta(t)
    for row in t.rows:
        assert sum(r * v for r, v in zip(row, y)) == 0


@given(theta_st)
def test_column_swap_flips_minor_signs(t):
    d = minors_theta(t)
    s = minors_theta(t.swap_columns(2, 3))
    # swapping columns 3 and 4: D123 <-> D124 with a sign flip, D134 and D234 change sign
    assert (s.d123, s.d124, s.d134, s.d234) == (d.d124, d.d123, -d.d134, -d.d234)


def test_xyzw_dictionary_anchor():
    assert tuple(minors_via_boxes(1, 1, -1, 1)) == (-1, -1, 2, -1)
    assert tuple(minors_via_boxes(-1, -1, 1, -1)) == (1, 1, -2, 1)


def test_parity_error():
    with pytest.raises(ParityError):
        minors_via_boxes(1, 2, 1, 1)


def test_locally_free_witness():
    t = ThetaMatrix.from_rows([[1, 0, 1, 1], [0, 1, 1, 1], [1, 1, 0, 0]])
    v = is_locally_free_theta(t)
    assert not v.ok and v.witness.startswith("minor D134")
    # all minors nonzero, yet D123 + D234 = D124 + D134 kills a box
    t2 = ThetaMatrix.from_rows([[1, 0, 0, 1], [0, 1, 0, 1], [0, 0, 1, -1]])
    assert all(minors_theta(t2))
    v2 = is_locally_free_theta(t2)
    assert not v2.ok and v2.witness == "box(++-) = 0"
    assert np_box(t2, (1, 1, -1)) == 0
    assert not theorem_a_admissible(t2)


def test_freeness_obstruction_unsat():
    rep = freeness_obstruction()
    assert rep.status == "UNSAT"
    assert rep.assignments == 256
    assert rep.consistent_examples == ()
    assert rep.parity_failures + rep.zero_minor_rejections + rep.inconsistent == 256
    tuples = [m for m, _ in rep.near_misses]
    assert tuples == [(-1, -1, 2, -1), (1, 1, -2, 1)]
    for m, violated in rep.near_misses:
        full = boxes_via_minors(m)
        assert violated == {s: v for s, v in full.items() if abs(v) != 1}
        assert violated


def test_obstruction_to_dict():
    d = freeness_obstruction().to_dict()
    assert d["status"] == "UNSAT"
    assert len(d["near_misses"]) == 2


def test_omega_minors():
    o = OmegaMatrix.from_rows([[1, 0, 1], [0, 1, 1]])
    assert tuple(minors_omega(o)) == (1, 1, -1)
    assert is_locally_free_omega(o).ok
    assert is_free_omega(o).ok
    o2 = OmegaMatrix.from_rows([[1, 1, -1], [0, 2, 3]])
    assert tuple(minors_omega(o2)) == (2, 3, 5)


def test_omega_free_needs_unit_gcd():
    o = OmegaMatrix.from_rows([[2, 0, 2], [0, 2, 2]])
    assert is_locally_free_omega(o).ok
    v = is_free_omega(o)
    assert not v.ok and "gcd" in v.witness


@given(omega_st)
def test_omega_null_vector(o):
    y = null_vector_omega(o)
    for row in o.rows:
        assert sum(r * v for r, v in zip(row, y)) == 0


@given(omega_st)
def test_omega_freeness_oracle(o):
    a = np.array(o.rows, dtype=float)
    minors = [int(round(np.linalg.det(a[:, [i, j]]))) for i, j in ((0, 1), (0, 2), (1, 2))]
    expected = all(minors) and math.gcd(*minors) == 1
    assert is_free_omega(o).ok == expected
