"""Command line interface.

Subcommands: validate, transform, verify, circle-scan, lemma-check,
dominant-probe, bessel-table. Reports are emitted as JSON or CSV with every
float printed at 17 significant digits, so identical configuration and seed
produce byte-identical output.

Exit codes: 0 all checks passed, 1 a check failed, 2 usage or input error.
"""

from __future__ import annotations

import argparse
import logging
import os
import sys
from pathlib import Path

import numpy as np

from . import __version__, bessel, geometry, nullset, transform
from .geometry import GeometryError
from .transform import TransformError

VERIFY_POINTS = 20
VERIFY_SIMPLEX_TOL = 1e-9
VERIFY_BOX_TOL = 1e-10
LEMMA_TOL = 1e-8
PROBE_REL_TOL = 0.05


# ---------------------------------------------------------------------------
# Deterministic serialization
# ---------------------------------------------------------------------------


def _fmt(x) -> str:
    return format(float(x), ".17g")


def _json_escape(s: str) -> str:
    out = s.replace("\\", "\\\\").replace('"', '\\"')
    return f'"{out}"'


def _render_json(obj, indent: int = 0) -> str:
    pad = "  " * indent
    inner = "  " * (indent + 1)
    if obj is True:
        return "true"
    if obj is False:
        return "false"
    if obj is None:
        return "null"
    if isinstance(obj, str):
        return _json_escape(obj)
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return _fmt(obj)
    if isinstance(obj, (complex, np.complexfloating)):
        return f'{{"re": {_fmt(obj.real)}, "im": {_fmt(obj.imag)}}}'
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        parts = [
            f"{inner}{_json_escape(str(k))}: {_render_json(v, indent + 1)}"
            for k, v in obj.items()
        ]
        return "{\n" + ",\n".join(parts) + f"\n{pad}}}"
    if isinstance(obj, (list, tuple, np.ndarray)):
        items = list(obj)
        if not items:
            return "[]"
        parts = [f"{inner}{_render_json(v, indent + 1)}" for v in items]
        return "[\n" + ",\n".join(parts) + f"\n{pad}]"
    raise TypeError(f"cannot serialize {type(obj)!r}")


def _flatten(prefix: str, value, out: dict) -> None:
    if isinstance(value, (complex, np.complexfloating)):
        out[prefix + "_re"] = _fmt(value.real)
        out[prefix + "_im"] = _fmt(value.imag)
    elif isinstance(value, bool):
        out[prefix] = "true" if value else "false"
    elif isinstance(value, (int, np.integer)):
        out[prefix] = str(int(value))
    elif isinstance(value, (float, np.floating)):
        out[prefix] = _fmt(value)
    elif isinstance(value, (list, tuple, np.ndarray)):
        for i, v in enumerate(value):
            _flatten(f"{prefix}_{i}", v, out)
    elif isinstance(value, dict):
        for k, v in value.items():
            _flatten(f"{prefix}.{k}", v, out)
    elif value is None:
        out[prefix] = ""
    else:
        out[prefix] = str(value)


def _render_csv(report: dict) -> str:
    lines = [f"# command={report['command']}", f"# version={report['version']}"]
    flat_cfg: dict = {}
    _flatten("config", report["config"], flat_cfg)
    lines.extend(f"# {k}={v}" for k, v in flat_cfg.items())
    flat_sum: dict = {}
    _flatten("summary", report["summary"], flat_sum)
    lines.extend(f"# {k}={v}" for k, v in flat_sum.items())
    rows = report["rows"]
    if rows:
        flat_rows = []
        for row in rows:
            flat: dict = {}
            for k, v in row.items():
                _flatten(k, v, flat)
            flat_rows.append(flat)
        header = list(flat_rows[0])
        lines.append(",".join(header))
        for flat in flat_rows:
            lines.append(",".join(flat.get(k, "") for k in header))
    return "\n".join(lines) + "\n"


def _render(report: dict, fmt: str) -> str:
    if fmt == "csv":
        return _render_csv(report)
    return _render_json(report) + "\n"


# ---------------------------------------------------------------------------
# Argument parsing
# ---------------------------------------------------------------------------


def _load_polytope_arg(path: str) -> geometry.Polytope:
    if not Path(path).exists():
        raise GeometryError(f"polytope file not found: {path}")
    return geometry.load_polytope(path)


def _parse_complex_scalar(token: str) -> complex:
    text = token.strip().replace("i", "j").replace("I", "j")
    try:
        return complex(text)
    except ValueError:
        raise ValueError(f"cannot parse complex number {token!r}") from None


def _parse_alphas(spec: str) -> list:
    """Either 'start:stop:step' over reals or a comma list of complex literals."""
    if ":" in spec:
        parts = spec.split(":")
        if len(parts) != 3:
            raise ValueError("alpha range must be start:stop:step")
        start, stop, step = (float(p) for p in parts)
        if step <= 0 or stop < start:
            raise ValueError("alpha range requires step > 0 and stop >= start")
        count = int(round((stop - start) / step)) + 1
        return [complex(round(start + k * step, 12)) for k in range(count)]
    return [_parse_complex_scalar(tok) for tok in spec.split(",")]


def _parse_plane(spec: str, dim: int) -> geometry.Plane2:
    parts = spec.split(";")
    if len(parts) != 2:
        raise ValueError("plane must be given as 'v1;v2'")
    vecs = []
    for part in parts:
        vec = np.array([float(x) for x in part.split(",")], dtype=float)
        if vec.shape != (dim,):
            raise ValueError(f"plane vector {part!r} must have {dim} components")
        vecs.append(vec)
    return geometry.plane_from_vectors(vecs[0], vecs[1])


def _parse_points(spec: str, dim: int) -> list:
    points = []
    for part in spec.split(";"):
        comps = [_parse_complex_scalar(tok) for tok in part.split(",")]
        if len(comps) != dim:
            raise ValueError(f"point {part!r} must have {dim} components")
        points.append(np.array(comps, dtype=np.complex128))
    return points


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="brionlab",
        description="Polytope Fourier-Laplace transforms and circle diagnostics",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, help_text, *, polytope=True, plane=False, alpha=False, z=False):
        p = sub.add_parser(name, help=help_text)
        if polytope:
            p.add_argument("--polytope", required=True, help="path to polytope JSON")
        if plane:
            p.add_argument("--plane", required=True, help="two d-vectors 'v1;v2'")
        if alpha:
            p.add_argument("--alpha", required=True, help="complex list or start:stop:step")
        if z:
            p.add_argument("--z", required=True, help="evaluation points 'a,b;c,d'")
        p.add_argument("--out", default=None, help="output path (default stdout)")
        p.add_argument("--format", choices=("json", "csv"), default="json")
        p.add_argument("--seed", type=int, default=42)
        p.add_argument("--n-max", type=int, default=None)
        p.add_argument("--t-grid", type=int, default=256)
        p.add_argument("--fft-grid", type=int, default=512)
        p.add_argument("--samples", type=int, default=20000)
        return p

    add("validate", "load a polytope and report derived structure")
    add("transform", "evaluate the transform at given points", z=True)
    add("verify", "cross-check the transform against independent oracles")
    add("circle-scan", "minimum transform modulus over circles", plane=True, alpha=True)
    add("lemma-check", "coefficient identity vs FFT", plane=True, alpha=True)
    add("dominant-probe", "dominant-term asymptotics", plane=True, alpha=True)
    add("bessel-table", "tabulate J_n values", polytope=False, z=True)
    return parser


# ---------------------------------------------------------------------------
# Command handlers (each returns (report, passed))
# ---------------------------------------------------------------------------


def _base_config(args, keys) -> dict:
    cfg = {}
    for key in keys:
        cfg[key] = getattr(args, key.replace("-", "_"))
    cfg["format"] = args.format
    return cfg


def cmd_validate(args):
    poly = _load_polytope_arg(args.polytope)
    cones = geometry.vertex_cones(poly)
    simplices = geometry.triangulate_polytope(poly)
    volume = geometry.polytope_volume(poly)
    rows = []
    for v in range(poly.n_vertices):
        rows.append(
            {
                "vertex": v,
                "coords": [float(x) for x in poly.vertices[v]],
                "n_edges": len(poly.neighbors(v)),
                "m_v": len(cones[v]),
            }
        )
    summary = {
        "dim": poly.dim,
        "n_vertices": poly.n_vertices,
        "n_edges": len(poly.edges),
        "n_simplices": len(simplices),
        "volume": volume,
        "passed": True,
    }
    report = {
        "command": "validate",
        "config": _base_config(args, ["polytope"]),
        "version": __version__,
        "rows": rows,
        "summary": summary,
    }
    return report, True


def cmd_transform(args):
    poly = _load_polytope_arg(args.polytope)
    points = _parse_points(args.z, poly.dim)
    decomp = transform.ConeDecomposition.from_polytope(poly)
    rows = []
    for z in points:
        tv = transform.brion_transform(poly, z, decomp)
        rows.append(
            {
                "z": [complex(c) for c in z],
                "value": tv.value,
                "min_denom": tv.min_denom,
                "perturbed": tv.perturbed,
                "err_estimate": tv.err_estimate,
            }
        )
    summary = {
        "n_points": len(points),
        "n_perturbed": sum(1 for r in rows if r["perturbed"]),
        "max_err_estimate": max((r["err_estimate"] for r in rows), default=0.0),
        "passed": True,
    }
    report = {
        "command": "transform",
        "config": _base_config(args, ["polytope", "z"]),
        "version": __version__,
        "rows": rows,
        "summary": summary,
    }
    return report, True


def _is_axis_box(poly):
    lo = poly.vertices.min(axis=0)
    hi = poly.vertices.max(axis=0)
    if poly.n_vertices != 2**poly.dim:
        return None
    corners = {
        tuple(np.where([(m >> j) & 1 for j in range(poly.dim)], hi, lo))
        for m in range(2**poly.dim)
    }
    actual = {tuple(v) for v in poly.vertices}
    for c in corners:
        if min(max(abs(a - b) for a, b in zip(c, v)) for v in actual) > 1e-12:
            return None
    return lo, hi


def cmd_verify(args):
    poly = _load_polytope_arg(args.polytope)
    decomp = transform.ConeDecomposition.from_polytope(poly)
    rng = np.random.default_rng(args.seed)
    box = _is_axis_box(poly)
    simplices = geometry.triangulate_polytope(poly)

    points = []
    attempts = 0
    while len(points) < VERIFY_POINTS and attempts < 100 * VERIFY_POINTS:
        attempts += 1
        z = rng.uniform(-2, 2, poly.dim) + 1j * rng.uniform(-0.5, 0.5, poly.dim)
        if not transform.brion_transform(poly, z, decomp).perturbed:
            points.append(z)
    if len(points) < VERIFY_POINTS:
        raise ValueError("could not sample enough non-singular evaluation points")

    rows = []
    for z in points:
        tv = transform.brion_transform(poly, z, decomp)
        oracle = sum(
            transform.simplex_transform_exact(poly.vertices[list(s)], z) for s in simplices
        )
        mc = transform.monte_carlo_transform(poly, z, args.samples, args.seed)
        row = {
            "z": [complex(c) for c in z],
            "brion": tv.value,
            "simplex_oracle": complex(oracle),
            "rel_err_simplex": abs(tv.value - oracle) / (1.0 + abs(oracle)),
            "mc_value": mc.value,
            "mc_stderr": mc.stderr,
            "mc_within_4sigma": bool(abs(tv.value - mc.value) <= 4.0 * mc.stderr),
        }
        if box is not None:
            bx = transform.box_transform_exact(box[0], box[1], z)
            row["box_oracle"] = bx
            row["rel_err_box"] = abs(tv.value - bx) / (1.0 + abs(bx))
        rows.append(row)

    summary = {
        "n_points": len(rows),
        "max_rel_err_simplex": max(r["rel_err_simplex"] for r in rows),
        "simplex_pass": all(r["rel_err_simplex"] <= VERIFY_SIMPLEX_TOL for r in rows),
        "mc_pass": all(r["mc_within_4sigma"] for r in rows),
    }
    if box is not None:
        summary["max_rel_err_box"] = max(r["rel_err_box"] for r in rows)
        summary["box_pass"] = all(r["rel_err_box"] <= VERIFY_BOX_TOL for r in rows)
    passed = summary["simplex_pass"] and summary["mc_pass"] and summary.get("box_pass", True)
    summary["passed"] = passed
    report = {
        "command": "verify",
        "config": _base_config(args, ["polytope", "seed", "samples"]),
        "version": __version__,
        "rows": rows,
        "summary": summary,
    }
    return report, passed


def cmd_circle_scan(args):
    poly = _load_polytope_arg(args.polytope)
    plane = _parse_plane(args.plane, poly.dim)
    alphas = _parse_alphas(args.alpha)
    scan = nullset.circle_scan(poly, plane, alphas, args.t_grid)
    rows = [
        {
            "alpha": row.alpha,
            "min_modulus": row.min_modulus,
            "argmin_t": row.argmin_t,
            "flagged": row.flagged,
        }
        for row in scan.rows
    ]
    passed = all(r["min_modulus"] > 0 for r in rows) and not any(r["flagged"] for r in rows)
    summary = {
        "n_rows": len(rows),
        "min_modulus": min((r["min_modulus"] for r in rows), default=0.0),
        "n_flagged": sum(1 for r in rows if r["flagged"]),
        "flag_threshold": nullset.FLAG_THRESHOLD,
        "passed": passed,
    }
    report = {
        "command": "circle-scan",
        "config": _base_config(args, ["polytope", "plane", "alpha", "t-grid", "seed"]),
        "version": __version__,
        "rows": rows,
        "summary": summary,
    }
    return report, passed


def _single_alpha(args) -> complex:
    alphas = _parse_alphas(args.alpha)
    if len(alphas) != 1:
        raise ValueError("this command takes exactly one alpha")
    return alphas[0]


def cmd_lemma_check(args):
    poly = _load_polytope_arg(args.polytope)
    plane = _parse_plane(args.plane, poly.dim)
    spec = nullset.CircleSpec(plane, _single_alpha(args))
    rep = nullset.lemma_report(poly, spec, args.n_max, m_grid=args.fft_grid)
    rows = [
        {"n": n, "lhs": lhs, "fft": fft, "abs_diff": abs(lhs - fft)}
        for n, lhs, fft in zip(rep.ns, rep.lhs, rep.fft)
    ]
    passed = rep.mismatch <= LEMMA_TOL
    summary = {
        "degree": rep.degree,
        "mismatch": rep.mismatch,
        "threshold": LEMMA_TOL,
        "passed": passed,
    }
    report = {
        "command": "lemma-check",
        "config": _base_config(args, ["polytope", "plane", "alpha", "n-max", "fft-grid"]),
        "version": __version__,
        "rows": rows,
        "summary": summary,
    }
    return report, passed


def cmd_dominant_probe(args):
    poly = _load_polytope_arg(args.polytope)
    plane = _parse_plane(args.plane, poly.dim)
    alpha = _single_alpha(args)
    normalized = nullset.normalize_for_probe(poly, plane)
    probe = nullset.dominant_probe(normalized, nullset.CircleSpec(plane, alpha), args.n_max)
    rows = [
        {"n": n, "scaled": val, "abs_err": abs(val - probe.target)}
        for n, val in zip(probe.ns, probe.values)
    ]
    tolerance = PROBE_REL_TOL * abs(probe.target)
    final_err = rows[-1]["abs_err"]
    passed = final_err <= tolerance
    summary = {
        "degree": probe.degree,
        "u_index": probe.u_index,
        "target": probe.target,
        "final_abs_err": final_err,
        "tolerance": tolerance,
        "passed": passed,
    }
    report = {
        "command": "dominant-probe",
        "config": _base_config(args, ["polytope", "plane", "alpha", "n-max"]),
        "version": __version__,
        "rows": rows,
        "summary": summary,
    }
    return report, passed


def cmd_bessel_table(args):
    values = [_parse_complex_scalar(tok) for tok in args.z.split(",")]
    n_max = 20 if args.n_max is None else args.n_max
    if n_max < 0:
        raise ValueError("n_max must be nonnegative")
    rows = []
    for z in values:
        for n in range(n_max + 1):
            rows.append(
                {
                    "z": z,
                    "n": n,
                    "j": bessel.bessel_j(n, z),
                    "ratio": bessel.asymptotic_ratio(n, z),
                }
            )
    summary = {"n_rows": len(rows), "passed": True}
    report = {
        "command": "bessel-table",
        "config": _base_config(args, ["z", "n-max"]),
        "version": __version__,
        "rows": rows,
        "summary": summary,
    }
    return report, True


_HANDLERS = {
    "validate": cmd_validate,
    "transform": cmd_transform,
    "verify": cmd_verify,
    "circle-scan": cmd_circle_scan,
    "lemma-check": cmd_lemma_check,
    "dominant-probe": cmd_dominant_probe,
    "bessel-table": cmd_bessel_table,
}


def main(argv=None) -> int:
    level = os.environ.get("BRIONLAB_LOG", "WARNING").upper()
    logging.basicConfig(
        level=getattr(logging, level, logging.WARNING),
        format="%(levelname)s %(name)s: %(message)s",
    )
    args = _build_parser().parse_args(argv)
    try:
        report, passed = _HANDLERS[args.command](args)
        text = _render(report, args.format)
        if args.out:
            Path(args.out).write_text(text)
        else:
            sys.stdout.write(text)
    except (GeometryError, TransformError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return 0 if passed else 1


if __name__ == "__main__":
    raise SystemExit(main())
