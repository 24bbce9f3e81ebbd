"""Acceptance criteria, one test each; every test logs a PASS/FAIL line.

The lines are echoed in the terminal summary under "acceptance criteria".
"""
import cmath
import math
import subprocess
import sys
import time
from itertools import product

import numpy as np

from qkquotient.exact_linalg import gcd_list
from qkquotient.quatmoment import GroupElement, apply_action, moment, real_matrix_rank
from qkquotient.strata import (
    StratumLabel,
    catalog_omega,
    catalog_theta,
    det_M_alpha,
    det_M_alpha_factored,
    j_image,
    solve_type1_system,
    type1_catalog,
    type1_closed_form,
)
from qkquotient.weights import (
    XYZW,
    OmegaMatrix,
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
    theorem_a_admissible,
)
from qkquotient.zeroset import find_point, find_point_restricted, pair_type1_relations

from .acceptance_log import record

THETA1_ROWS = [[1, 0, 1, 1], [0, 1, 1, 1], [1, 1, 0, 1]]
THETA2_ROWS = [[9, 2, 7, 1], [40, 9, 31, 0], [1, 2, 0, 1]]


def test_criterion_1_example_minors():
    start = time.perf_counter()
    t1 = ThetaMatrix.from_rows(THETA1_ROWS)
    t2 = ThetaMatrix.from_rows(THETA2_ROWS)
    m1, m2 = tuple(minors_theta(t1)), tuple(minors_theta(t2))
    admissible = all(theorem_a_admissible(t) and is_locally_free_theta(t).ok for t in (t1, t2))
    elapsed = time.perf_counter() - start
    ok = m1 == (-2, -1, 1, -1) and m2 == (1, 72, -32, -63) and admissible and elapsed < 1.0
    record(1, ok, f"minors {m1} and {m2}, admissible={admissible}, {elapsed * 1e3:.1f} ms (< 1 s)")
    assert ok


def test_criterion_2_determinant_identities():
    rng = np.random.default_rng(20241017)
    start = time.perf_counter()
    failures = 0
    for rows in rng.integers(-20, 21, size=(10_000, 3, 4)):
        t = ThetaMatrix.from_rows(rows.tolist())
        d = minors_theta(t)
        b = boxes(t)
        if b != boxes_via_minors(d):
            failures += 1
        elif minors_via_boxes(*(b[XYZW[k]] for k in "XYZW")) != d:
            failures += 1
    elapsed = time.perf_counter() - start
    ok = failures == 0 and elapsed < 10.0
    record(2, ok, f"10000 random matrices, {failures} failures, {elapsed:.2f} s (< 10 s)")
    assert ok


def _sweep_all_unit_boxes(n: int, seed: int) -> int:
    """Vectorized float determinants, independent of the exact code paths."""
    rng = np.random.default_rng(seed)
    a = rng.integers(-6, 7, size=(n, 3, 4)).astype(float)
    cols = np.transpose(a, (0, 2, 1))  # (n, 4 columns, 3)
    minors_ok = np.ones(n, dtype=bool)
    for idx in ((0, 1, 2), (0, 1, 3), (0, 2, 3), (1, 2, 3)):
        minors_ok &= np.rint(np.linalg.det(cols[:, idx, :])) != 0
    all_unit = np.ones(n, dtype=bool)
    for s in product((1.0, -1.0), repeat=3):
        m = np.stack([cols[:, 0] + s[i] * cols[:, i + 1] for i in range(3)], axis=1)
        all_unit &= np.abs(np.rint(np.linalg.det(m))) == 1
    return int(np.sum(minors_ok & all_unit))


def test_criterion_3_freeness_obstruction():
    rep = freeness_obstruction()
    near = {m: v for m, v in rep.near_misses}
    expected = {(1, 1, -2, 1), (-1, -1, 2, -1)}
    violated_ok = all(
        v and v == {s: b for s, b in boxes_via_minors(m).items() if abs(b) != 1} for m, v in near.items()
    )
    hits = _sweep_all_unit_boxes(100_000, seed=7)
    ok = rep.status == "UNSAT" and rep.assignments == 256 and set(near) == expected and violated_ok and hits == 0
    record(
        3, ok,
        f"{rep.assignments} assignments -> {rep.status}; near misses {sorted(near)} with violated boxes; "
        f"sweep of 100000 matrices found {hits} freely acting",
    )
    assert ok


def test_criterion_4_det_m_alpha():
    rng = np.random.default_rng(4)
    worst = 0.0
    worst_vanish = 0.0
    for _ in range(1000):
        q = rng.normal(size=4)
        q /= np.linalg.norm(q)
        eps, sig = complex(q[0], q[1]), complex(q[2], q[3])
        rho = cmath.exp(1j * rng.uniform(0, 2 * math.pi))
        theta = rng.uniform(-2 * math.pi, 2 * math.pi)
        worst = max(worst, abs(det_M_alpha(eps, sig, rho, theta) - det_M_alpha_factored(eps, sig, rho, theta)))
        # enforce conj(rho) e^{i theta} = Re eps + i sqrt(Im eps^2 + |sigma|^2)
        target = complex(eps.real, math.sqrt(eps.imag**2 + abs(sig) ** 2))
        theta0 = cmath.phase(rho * target)
        worst_vanish = max(worst_vanish, abs(det_M_alpha(eps, sig, rho, theta0)))
    ok = worst < 1e-9 and worst_vanish < 1e-10
    record(4, ok, f"max |direct - factored| = {worst:.2e} (< 1e-9), max |det| on vanishing locus = {worst_vanish:.2e} (< 1e-10)")
    assert ok


def test_criterion_5_type1_classification():
    details = []
    ok = True
    for name, rows in (("theta_1", THETA1_ROWS), ("theta_2", THETA2_ROWS)):
        t = ThetaMatrix.from_rows(rows)
        per_family = {}
        for family in ((1, 1), (-1, -1)):
            count = 0
            for triple in product((1, -1), repeat=3):
                a = tuple(family[0] * v for v in (1,) + triple)
                sol = solve_type1_system(t, a)
                if sol.positive:
                    count += 1
                # rational identity against the minor-over-box closed form
                ok &= type1_closed_form(t, a)[0] == sol.x
            per_family[family] = count
        cat = type1_catalog(t)
        certs = sum(c.valid for c in cat.certificates)
        ok &= per_family == {(1, 1): 1, (-1, -1): 1} and certs == 16
        details.append(f"{name}: positive per family {list(per_family.values())}, {certs}/16 mixed certificates")
    record(5, ok, "; ".join(details) + "; closed form matches exactly")
    assert ok


def test_criterion_6_zero_set_solver():
    t = ThetaMatrix.from_rows(THETA1_ROWS)
    start = time.perf_counter()
    converged = 0
    bad_rank = 0
    worst_moved = 0.0
    min_pair = math.inf
    for seed in range(100):
        rep = find_point(t, seed=seed)
        if not (rep.converged and rep.residual < 1e-10):
            continue
        converged += 1
        _, rank, mpn = real_matrix_rank(rep.point)
        if rank != 4 or mpn <= 1e-3:
            bad_rank += 1
        min_pair = min(min_pair, mpn)
        g = GroupElement.random(np.random.default_rng(1000 + seed))
        worst_moved = max(worst_moved, moment(t, apply_action(g, t, rep.point)).residual)
    elapsed = time.perf_counter() - start
    ok = converged >= 90 and bad_rank == 0 and worst_moved < 1e-9 and elapsed < 60
    record(
        6, ok,
        f"{converged}/100 converged (>= 90), rank-4 failures {bad_rank}, smallest pair norm {min_pair:.3g} (> 1e-3), "
        f"residual after action {worst_moved:.2e} (< 1e-9), {elapsed:.1f} s (< 60 s)",
    )
    assert ok


def test_criterion_7_restricted_solver():
    t = ThetaMatrix.from_rows(THETA1_ROWS)
    realized = type1_catalog(t).realized[0]
    a = (1,) + realized.triple
    exact = np.array([float(v) for v in solve_type1_system(t, a).x])
    rep = find_point_restricted(t, relations=pair_type1_relations(a, a), seed=0)
    err = float(np.max(np.abs(rep.pair_norms_sq() - exact)))
    mixed = pair_type1_relations(a, tuple(-v for v in a))
    best = min(find_point_restricted(t, relations=mixed, seed=s).residual for s in range(50))
    ok = rep.converged and err < 1e-8 and best > 1e-3
    record(
        7, ok,
        f"realized {realized}: pair norms^2 off by {err:.1e} (< 1e-8); "
        f"mixed stratum best residual over 50 seeds {best:.3g} (> 1e-3)",
    )
    assert ok


def test_criterion_8_catalog_bounds_and_symmetry():
    ok = True
    parts = []
    for name, rows in (("theta_1", THETA1_ROWS), ("theta_2", THETA2_ROWS)):
        cat = catalog_theta(ThetaMatrix.from_rows(rows))
        retained = cat.retained_labels()
        symmetric = {j_image(lab) for lab in retained} == retained
        no_units = all(
            abs(e.isotropy_invariant) != 1 for e in cat.type1_spheres + cat.type2_spheres
        ) and all(abs(p.isotropy_invariant) != 1 for g in cat.point_sets for p in g)
        excluded_units = all(abs(inv) == 1 for _, inv in cat.excluded)
        ok &= cat.bounds_ok() and symmetric and no_units and excluded_units
        parts.append(
            f"{name}: {len(cat.type1_spheres)} type-1 (<= 2), {len(cat.type2_spheres)} type-2 (<= 22), "
            f"points {[len(g) for g in cat.point_sets]} (<= 3x4), J-symmetric={symmetric}"
        )
    omega = OmegaMatrix.from_rows([[1, 1, -1], [0, 2, 3]])
    ocat = catalog_omega(omega)
    s1 = StratumLabel("omega", "s1")
    omega_ok = ocat.bounds_ok() and s1 not in ocat.retained_labels() and s1 in ocat.smooth
    ok &= omega_ok
    parts.append(f"omega: {len(ocat.omega_sphere)} sphere (<= 1), {ocat.n_points} points (<= 12), S_1 excluded")

    rng = np.random.default_rng(8)
    disagree = 0
    for rows in rng.integers(-20, 21, size=(1000, 2, 3)):
        o = OmegaMatrix.from_rows(rows.tolist())
        d = minors_omega(o)
        expected = is_locally_free_omega(o).ok and gcd_list(d) == 1
        disagree += is_free_omega(o).ok != expected
    ok &= disagree == 0
    parts.append(f"1000 random freeness verdicts, {disagree} disagreements with the gcd")
    record(8, ok, "; ".join(parts))
    assert ok


def _cli(*args: str) -> bytes:
    proc = subprocess.run(
        [sys.executable, "-m", "qkquotient", *args], capture_output=True, check=False
    )
    return proc.stdout


def test_criterion_9_determinism():
    theta = "1 0 1 1; 0 1 1 1; 1 1 0 1"
    commands = [
        ("check", theta, "--format", "json"),
        ("catalog", theta, "--format", "json"),
        ("catalog", "1 1 -1; 0 2 3", "--format", "text"),
        ("sample", theta, "--seeds", "0-4", "--format", "json"),
        ("verify", "--seeds", "3", "--format", "json"),
    ]
    same = 0
    for cmd in commands:
        first, second = _cli(*cmd), _cli(*cmd)
        same += bool(first) and first == second
    ok = same == len(commands)
    record(9, ok, f"{same}/{len(commands)} CLI commands byte-identical on rerun")
    assert ok
