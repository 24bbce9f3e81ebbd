"""Report assembly behind the command-line interface.

Reports are plain dicts with a ``schema`` version field.  Integers stay JSON
integers, exact rationals become ``"p/q"`` strings and floats become decimal
strings with 17 significant digits, so rendering is bit-stable.
"""
from __future__ import annotations

import json
import re
from fractions import Fraction
from typing import Iterable

import numpy as np

from . import __version__
from .exact_linalg import gcd_list
from .quatmoment import GroupElement, apply_action, moment
from .strata import (
    SingularLocusCatalog,
    StratumLabel,
    catalog_omega,
    catalog_theta,
    det_M_alpha,
    det_M_alpha_factored,
    j_image,
    type1_catalog,
)
from .weights import (
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
    null_vector_omega,
    null_vector_theta,
    XYZW,
)
from .zeroset import DEFAULT_MAX_ITER, DEFAULT_TOL, find_point, find_point_omega

__all__ = [
    "SCHEMA_VERSION",
    "ParseError",
    "ShapeError",
    "parse_matrix",
    "format_matrix",
    "parse_seeds",
    "admissibility",
    "run_check",
    "run_catalog",
    "run_sample",
    "run_verify",
    "to_json",
    "to_text",
    "THETA_1",
    "THETA_2",
]

SCHEMA_VERSION = 1

THETA_1 = ThetaMatrix.from_rows([[1, 0, 1, 1], [0, 1, 1, 1], [1, 1, 0, 1]])
THETA_2 = ThetaMatrix.from_rows([[9, 2, 7, 1], [40, 9, 31, 0], [1, 2, 0, 1]])

_INT = re.compile(r"-?[0-9]+")


class ParseError(ValueError):
    pass


class ShapeError(ValueError):
    pass


def parse_matrix(text: str) -> ThetaMatrix | OmegaMatrix:
    """Rows of integers separated by ``;`` or newlines; 3x4 or 2x3."""
    rows = []
    for raw in re.split(r"[;\n]", text):
        tokens = raw.split()
        if not tokens:
            continue
        for tok in tokens:
            if not _INT.fullmatch(tok):
                raise ParseError(f"malformed integer token {tok!r}")
        rows.append([int(tok) for tok in tokens])
    shape = (len(rows), len(rows[0]) if rows else 0)
    if any(len(r) != shape[1] for r in rows):
        raise ShapeError(f"ragged rows: lengths {[len(r) for r in rows]}")
    if shape == (3, 4):
        return ThetaMatrix.from_rows(rows)
    if shape == (2, 3):
        return OmegaMatrix.from_rows(rows)
    raise ShapeError(f"expected a 3x4 or 2x3 matrix, got {shape[0]}x{shape[1]}")


def format_matrix(m: ThetaMatrix | OmegaMatrix) -> str:
    return "; ".join(" ".join(str(v) for v in row) for row in m.rows)


def parse_seeds(spec: str) -> list[int]:
    """Comma-separated seeds and inclusive ranges, e.g. ``"0-9,42"``."""
    out: list[int] = []
    for part in spec.split(","):
        part = part.strip()
        if not part:
            continue
        m = re.fullmatch(r"([0-9]+)-([0-9]+)", part)
        if m:
            lo, hi = int(m.group(1)), int(m.group(2))
            if hi < lo:
                raise ValueError(f"empty seed range {part!r}")
            out.extend(range(lo, hi + 1))
        elif re.fullmatch(r"[0-9]+", part):
            out.append(int(part))
        else:
            raise ValueError(f"bad seed specification {part!r}")
    if not out:
        raise ValueError("no seeds given")
    return out


# ---------------------------------------------------------------- serialization


def _enc(x):
    if isinstance(x, bool) or x is None or isinstance(x, str):
        return x
    if isinstance(x, (int, np.integer)):
        return int(x)
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, (float, np.floating)):
        return format(float(x), ".17g")
    if isinstance(x, StratumLabel):
        return x.name()
    if isinstance(x, dict):
        return {str(k): _enc(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_enc(v) for v in x]
    raise TypeError(f"cannot serialize {type(x).__name__}")


def to_json(report: dict) -> str:
    return json.dumps(_enc(report), sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def _sign_key(s) -> str:
    return "".join("+" if v > 0 else "-" for v in s)


def _matrix_block(m) -> dict:
    return {
        "text": format_matrix(m),
        "rows": m.tolist(),
        "case": "theta" if isinstance(m, ThetaMatrix) else "omega",
    }


def admissibility(m: ThetaMatrix | OmegaMatrix) -> dict:
    """Local-freeness verdict with the first failing condition spelled out."""
    if isinstance(m, ThetaMatrix):
        v = is_locally_free_theta(m)
        reason = None
        if not v.ok:
            if v.witness.startswith("minor"):
                reason = f"{v.witness}: every 3x3 minor must be nonzero"
            else:
                reason = f"{v.witness}: every box determinant must be nonzero"
        return {"ok": v.ok, "failed_condition": reason}
    v = is_locally_free_omega(m)
    reason = None if v.ok else f"{v.witness}: every 2x2 minor must be nonzero"
    return {"ok": v.ok, "failed_condition": reason}


def _base_report(command: str, m) -> dict:
    rep = {
        "schema": SCHEMA_VERSION,
        "tool": "qkquotient",
        "version": __version__,
        "command": command,
        "matrix": _matrix_block(m),
    }
    if isinstance(m, ThetaMatrix):
        d = minors_theta(m)
        bx = boxes(m)
        rep["minors"] = d.as_dict()
        rep["boxes"] = {_sign_key(s): v for s, v in bx.items()}
        rep["null_vector"] = list(null_vector_theta(d))
        adm = admissibility(m)
        rep["admissible"] = adm
        free = adm["ok"] and all(abs(v) == 1 for v in bx.values())
        rep["free"] = {
            "ok": free,
            "reason": None if free else "some box determinant has absolute value other than 1",
        }
    else:
        d = minors_omega(m)
        rep["minors"] = d.as_dict()
        rep["null_vector"] = list(null_vector_omega(d))
        rep["admissible"] = admissibility(m)
        fv = is_free_omega(m)
        rep["free"] = {"ok": fv.ok, "reason": fv.witness, "gcd": gcd_list(d)}
    rep["ok"] = rep["admissible"]["ok"]
    return rep


def run_check(m: ThetaMatrix | OmegaMatrix) -> dict:
    return _base_report("check", m)


def _entry_dict(e) -> dict:
    return {
        "label": e.label,
        "isotropy_invariant": e.isotropy_invariant,
        "quotient_kind": e.quotient_kind,
        "exact_data": e.exact_data,
    }


def catalog_dict(cat: SingularLocusCatalog) -> dict:
    out = {
        "bounds_ok": cat.bounds_ok(),
        "point_sets": [
            [
                {
                    "labels": list(p.labels),
                    "isotropy_invariant": p.isotropy_invariant,
                    "exact_data": p.exact_data,
                }
                for p in group
            ]
            for group in cat.point_sets
        ],
        "excluded": [{"label": lab, "isotropy_invariant": inv} for lab, inv in cat.excluded],
        "empty": list(cat.empty),
    }
    if cat.case == "theta":
        out["type1_spheres"] = [_entry_dict(e) for e in cat.type1_spheres]
        out["type2_spheres"] = [_entry_dict(e) for e in cat.type2_spheres]
    else:
        out["omega_sphere"] = [_entry_dict(e) for e in cat.omega_sphere]
        out["mirrors"] = [_entry_dict(e) for e in cat.mirrors]
        out["smooth"] = list(cat.smooth)
    out["counts"] = {
        "spheres": len(cat.type1_spheres) + len(cat.type2_spheres) + len(cat.omega_sphere),
        "points": cat.n_points,
    }
    return out


def run_catalog(m: ThetaMatrix | OmegaMatrix) -> dict:
    rep = _base_report("catalog", m)
    if rep["ok"]:
        cat = catalog_theta(m) if isinstance(m, ThetaMatrix) else catalog_omega(m)
        rep["catalog"] = catalog_dict(cat)
        if isinstance(m, ThetaMatrix):
            rep["mixed_certificates"] = [c.text() for c in type1_catalog(m).certificates]
    return rep


def run_sample(
    m: ThetaMatrix | OmegaMatrix,
    seeds: Iterable[int],
    tol: float = DEFAULT_TOL,
    max_iter: int = DEFAULT_MAX_ITER,
) -> dict:
    """Solver certificates for each seed; the group-action check uses a generator seeded alike."""
    rep = _base_report("sample", m)
    rep["tol"] = tol
    rep["max_iter"] = max_iter
    runs = []
    solve = find_point if isinstance(m, ThetaMatrix) else find_point_omega
    for seed in seeds:
        r = solve(m, seed=seed, tol=tol, max_iter=max_iter)
        g = GroupElement.random(np.random.default_rng(seed), with_rho=False)
        moved = moment(m, apply_action(g, m, r.point)).residual
        runs.append(
            {
                "seed": seed,
                "converged": r.converged,
                "residual": r.residual,
                "residual_after_action": moved,
                "iterations": r.iterations,
                "rank": r.rank,
                "min_pair_norm": r.min_pair_norm,
            }
        )
    rep["seeds"] = [r["seed"] for r in runs]
    rep["runs"] = runs
    rep["converged"] = sum(r["converged"] for r in runs)
    return rep


def _identity_suite(n: int, seed: int, bound: int = 20) -> dict:
    rng = np.random.default_rng(seed)
    failures = 0
    for _ in range(n):
        t = ThetaMatrix.from_rows(rng.integers(-bound, bound + 1, size=(3, 4)).tolist())
        d = minors_theta(t)
        bx = boxes(t)
        if bx != boxes_via_minors(d):
            failures += 1
            continue
        if minors_via_boxes(*(bx[XYZW[k]] for k in "XYZW")) != d:
            failures += 1
    return {"matrices": n, "failures": failures, "ok": failures == 0}


def _det_m_suite(n: int, seed: int) -> dict:
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(n):
        q = rng.normal(size=4)
        q /= np.linalg.norm(q)
        eps, sig = complex(q[0], q[1]), complex(q[2], q[3])
        rho = complex(np.exp(1j * rng.uniform(0, 2 * np.pi)))
        th = float(rng.uniform(0, 2 * np.pi))
        worst = max(worst, abs(det_M_alpha(eps, sig, rho, th) - det_M_alpha_factored(eps, sig, rho, th)))
    return {"draws": n, "max_abs_difference": worst, "ok": worst < 1e-9}


def _j_symmetric(cat: SingularLocusCatalog) -> bool:
    inv = {e.label: e.isotropy_invariant for e in cat.type2_spheres}
    for g in cat.point_sets:
        for p in g:
            for lab in p.labels:
                inv[lab] = p.isotropy_invariant
    return all(j_image(lab) in inv and inv[j_image(lab)] == v for lab, v in inv.items())


def run_verify(seed: int = 0, n_identity: int = 10_000, n_det: int = 1000) -> dict:
    """Identity, obstruction and classification suites on fixed inputs."""
    obstruction = freeness_obstruction()
    suites = {
        "identity": _identity_suite(n_identity, seed),
        "freeness_obstruction": {
            **obstruction.to_dict(),
            "ok": obstruction.status == "UNSAT",
        },
        "det_m_alpha": _det_m_suite(n_det, seed),
    }
    for name, t in (("theta_1", THETA_1), ("theta_2", THETA_2)):
        t1 = type1_catalog(t)
        cat = catalog_theta(t)
        suites[f"classification_{name}"] = {
            "realized": list(t1.realized),
            "mixed_certificates_valid": all(c.valid for c in t1.certificates),
            "bounds_ok": cat.bounds_ok(),
            "j_symmetric": _j_symmetric(cat),
            "ok": len(t1.realized) == 2
            and all(c.valid for c in t1.certificates)
            and cat.bounds_ok()
            and _j_symmetric(cat),
        }
    ok = all(s["ok"] for s in suites.values())
    return {
        "schema": SCHEMA_VERSION,
        "tool": "qkquotient",
        "version": __version__,
        "command": "verify",
        "seed": seed,
        "suites": suites,
        "ok": ok,
    }


# ---------------------------------------------------------------- text rendering


def _fmt(x) -> str:
    v = _enc(x)
    return v if isinstance(v, str) else json.dumps(v)


def to_text(report: dict) -> str:
    lines = [f"qkquotient {report['version']} {report['command']}"]
    if "matrix" in report:
        lines.append(f"matrix ({report['matrix']['case']}): {report['matrix']['text']}")
        lines.append("minors: " + ", ".join(f"D{k}={v}" for k, v in report["minors"].items()))
        if "boxes" in report:
            lines.append("boxes: " + ", ".join(f"{k}:{v}" for k, v in report["boxes"].items()))
        adm = report["admissible"]
        lines.append(
            "admissible: yes" if adm["ok"] else f"admissible: no ({adm['failed_condition']})"
        )
        fr = report["free"]
        lines.append("free: yes" if fr["ok"] else f"free: no ({fr['reason']})")
    if "catalog" in report:
        cat = report["catalog"]
        for key, title in (
            ("type1_spheres", "type-1 sphere"),
            ("type2_spheres", "type-2 sphere"),
            ("omega_sphere", "sphere"),
        ):
            for e in cat.get(key, []):
                lines.append(f"{title}: {_fmt(e['label'])} invariant {e['isotropy_invariant']}")
        for i, group in enumerate(cat["point_sets"]):
            for p in group:
                names = ", ".join(_fmt(lab) for lab in p["labels"])
                lines.append(f"point set {i + 1}: {names} invariant {p['isotropy_invariant']}")
        for e in cat["excluded"]:
            lines.append(f"excluded: {_fmt(e['label'])} invariant {e['isotropy_invariant']}")
        lines.append(f"empty candidates: {len(cat['empty'])}")
        lines.append(
            f"spheres: {cat['counts']['spheres']}, points: {cat['counts']['points']}, "
            f"bounds ok: {cat['bounds_ok']}"
        )
    if "runs" in report:
        for r in report["runs"]:
            lines.append(
                f"seed {r['seed']}: converged={r['converged']} residual={_fmt(r['residual'])} "
                f"iterations={r['iterations']} rank={r['rank']} "
                f"min_pair_norm={_fmt(r['min_pair_norm'])}"
            )
        lines.append(f"converged: {report['converged']}/{len(report['runs'])}")
    if "suites" in report:
        for name, s in report["suites"].items():
            lines.append(f"{name}: {'PASS' if s['ok'] else 'FAIL'}")
    lines.append(f"ok: {report['ok']}")
    return "\n".join(lines) + "\n"
