"""Command-line entry point: ``curvature-locus <command> ...``.

Every command prints one JSON report (schema ``locus-report/1``).  Exit codes:
0 success, 1 bad input, 2 degenerate classification, 3 table violation.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import surd
from .classifier import TableViolation, classify_regular
from .determinantal import ConstraintQuadric, NotPositiveDefinite
from .net_model import NetOfQuadrics, NetParseError, QuadraticTernaryForm, orbit
from .poly import DEFAULT_TOL, ComplexApprox

SCHEMA = "locus-report/1"
TOL_ENV = "CURVATURE_LOCUS_TOL"
COMMANDS = ("classify", "project", "orbit", "verify-tables", "mesh")

EXIT_OK, EXIT_INPUT, EXIT_DEGENERATE, EXIT_TABLE = 0, 1, 2, 3


class InputError(ValueError):
    pass


@dataclass
class RunConfig:
    command: str
    net_path: str | None = None
    direction: str | None = None
    orbit_name: str | None = None
    seed: int = 0
    tolerance: float = DEFAULT_TOL
    output: str | None = None
    figure: str | None = None
    extra: dict | None = None

    _needs = {
        "classify": ("net_path",),
        "project": ("net_path", "direction"),
        "orbit": ("orbit_name",),
        "verify-tables": (),
        "mesh": ("net_path", "output"),
    }

    def validate(self):
        if self.command not in self._needs:
            raise InputError(f"unknown command {self.command!r}")
        for name in self._needs[self.command]:
            if getattr(self, name) in (None, ""):
                raise InputError(f"{self.command} needs --{name.replace('_path', '').replace('_name', '').replace('_', '-')}")
        if not self.tolerance > 0:
            raise InputError("tolerance must be positive")


# -- serialization --------------------------------------------------------------------


def _num(c):
    if surd.is_exact(c):
        return surd.format_number(c), False
    if isinstance(c, ComplexApprox):
        return {"re": round(c.re, 12), "im": round(c.im, 12)}, True
    return round(float(c), 12), True


def line_json(line) -> dict:
    comps = [_num(c) for c in line.direction]
    out = {"direction": [v for v, _ in comps], "reality": line.reality, "multiplicity": line.multiplicity}
    if any(a for _, a in comps):
        out["approx"] = True
    return out


def decomposition_json(dec) -> dict | None:
    if dec is None:
        return None
    return {
        "planes": [str(p) for p in dec.planes],
        "lines": [line_json(l) for l in dec.lines],
        "total_multiplicity": dec.total_multiplicity,
        "zero_dimensional": dec.zero_dimensional,
    }


def _load_net(path: str) -> NetOfQuadrics:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise InputError(f"cannot read net file {path!r}: {exc.strerror}") from None
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: invalid JSON ({exc})") from None
    if isinstance(data, dict) and "net" in data and "q1" not in data:
        data = data["net"]
    return NetOfQuadrics.from_json(data)


def default_tolerance() -> float:
    raw = os.environ.get(TOL_ENV)
    if not raw:
        return DEFAULT_TOL
    try:
        return float(raw)
    except ValueError:
        raise InputError(f"{TOL_ENV}={raw!r} is not a number") from None


# -- commands ---------------------------------------------------------------------------


def _classify(cfg: RunConfig):
    net = _load_net(cfg.net_path)
    constraint = None
    if cfg.extra and cfg.extra.get("constraint"):
        try:
            constraint = ConstraintQuadric.generic(QuadraticTernaryForm.parse(cfg.extra["constraint"]))
        except NotPositiveDefinite as exc:
            raise InputError(str(exc)) from None
        except (ValueError, TypeError) as exc:
            raise InputError(f"cannot parse constraint: {exc}") from None
    cls = classify_regular(net, cfg.seed, constraint, cfg.tolerance)
    report = {
        "kind": cls.kind,
        "substantial": cls.substantial,
        "constraint": str(constraint.form.to_poly()) if constraint else "x^2 + y^2 + z^2",
        "decomposition": decomposition_json(cls.evidence),
        "lines": [line_json(l) for l in cls.evidence.lines] if cls.evidence else [],
        "notes": list(cls.notes),
    }
    if cfg.figure:
        from .plotting import plot_locus

        # mark the images of the real singular directions
        pts = []
        if cls.evidence:
            a = [np.array([[float(c) for c in row] for row in q.sym_matrix()]) for q in net.forms]
            for l in cls.evidence.real_lines:
                u = l.unit_direction()
                pts.append([2 * float(u @ m @ u) for m in a])
        plot_locus(net, cfg.figure, points=pts, title=cls.kind)
        report["figure"] = cfg.figure
    code = EXIT_DEGENERATE if cls.kind == "Degenerate" else EXIT_OK
    return report, code


def _project(cfg: RunConfig):
    from .projection import TangentDirection, project_along

    net = _load_net(cfg.net_path)
    try:
        v = TangentDirection.parse(cfg.direction)
    except ValueError as exc:
        raise InputError(str(exc)) from None
    pr = project_along(net, v, cfg.seed, cfg.tolerance)
    sr = pr.singular_report
    report = {
        "direction": [_num(c)[0] for c in v.v],
        "asymptotic": pr.asymptotic,
        "label": sr.label,
        "finite_cc": sr.counts().get("CC", 0),
        "finite_singularities": [dict(line_json(l), type=t) for t, l in sr.finite_singularities],
        "at_infinity": len(sr.at_infinity),
        "planar_kind": sr.planar_kind,
        "rotated_net": pr.rotated_net.to_json(),
        "same_census_as_sphere": pr.isomorphic_to_regular,
        "decomposition": decomposition_json(sr.evidence),
    }
    if cfg.figure:
        from .plotting import plot_locus
        from .net_model import SingularJet

        plot_locus(SingularJet.from_net(pr.rotated_net), cfg.figure, case="cylinder", title=sr.label)
        report["figure"] = cfg.figure
    return report, EXIT_OK


def _orbit(cfg: RunConfig):
    try:
        rec = orbit(cfg.orbit_name)
    except KeyError:
        raise InputError(f"unknown orbit {cfg.orbit_name!r}") from None
    label = cfg.extra.get("form") if cfg.extra else None
    net = rec.generic_normal_form(label) if rec.generic_forms else rec.normal_form
    if net is None:
        raise InputError(f"orbit {rec.name} has no stored form labelled {label!r}")
    cls = classify_regular(net, cfg.seed, tol=cfg.tolerance)
    report = {
        "orbit": rec.name,
        "codimension": rec.codimension,
        "normal_form": rec.normal_form.to_json(),
        "classified_form": net.to_json(),
        "kind": cls.kind,
        "table_kinds": sorted(rec.regular_kinds),
        "table_singular_kinds": sorted(rec.singular_kinds),
        "lines": [line_json(l) for l in cls.evidence.lines] if cls.evidence else [],
    }
    if rec.family:
        from .generic_orbits import abc_region

        report["region"] = abc_region(*rec.family).to_json()
    if cfg.figure:
        from .plotting import plot_locus

        plot_locus(net, cfg.figure, title=f"{rec.name}: {cls.kind}")
        report["figure"] = cfg.figure
    code = EXIT_DEGENERATE if cls.kind == "Degenerate" else EXIT_OK
    return report, code


def _verify(cfg: RunConfig):
    from .generic_orbits import verify_tables

    extra = cfg.extra or {}
    try:
        report = verify_tables(extra.get("mode", "regular"), cfg.seed, extra.get("grid", 0), extra.get("trials", 20))
        code = EXIT_OK
    except TableViolation as exc:
        report = exc.witness.get("report", {})
        report["violations"] = exc.witness.get("violations", [exc.witness])
        report["error"] = str(exc)
        code = EXIT_TABLE
    if cfg.figure and report.get("rows"):
        from .plotting import plot_census

        plot_census(report["rows"], cfg.figure)
        report["figure"] = cfg.figure
    return report, code


def _mesh(cfg: RunConfig):
    from .locus_geometry import export_mesh

    net = _load_net(cfg.net_path)
    extra = cfg.extra or {}
    case = extra.get("case", "sphere")
    samples = extra.get("samples", 64)
    height = extra.get("height", 4.0)
    try:
        text = export_mesh(net, case, samples, height, cfg.output)
    except OSError as exc:
        raise InputError(f"cannot write {cfg.output!r}: {exc.strerror}") from None
    except ValueError as exc:
        raise InputError(str(exc)) from None
    report = {
        "path": cfg.output,
        "case": case,
        "samples": samples,
        "vertices": text.count("\nv ") + (1 if text.startswith("v ") else 0),
        "faces": text.count("\nf "),
    }
    if cfg.figure:
        from .plotting import plot_locus

        plot_locus(net, cfg.figure, case=case, samples=min(samples, 96), height=height)
        report["figure"] = cfg.figure
    return report, EXIT_OK


_HANDLERS = {"classify": _classify, "project": _project, "orbit": _orbit, "verify-tables": _verify, "mesh": _mesh}


def run(cfg: RunConfig) -> tuple[dict, int]:
    """Execute one command; returns (report, exit code). Never raises for bad input."""
    head = {"schema": SCHEMA, "command": cfg.command, "seed": cfg.seed, "tolerance": cfg.tolerance}
    try:
        cfg.validate()
        body, code = _HANDLERS[cfg.command](cfg)
    except (InputError, NetParseError) as exc:
        return dict(head, error=str(exc)), EXIT_INPUT
    return dict(head, **body), code


# -- argument parsing -----------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="curvature-locus", description="Curvature loci of 3-manifolds from nets of quadrics.")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0, help="seed for every random choice (default 0)")
    common.add_argument("--tol", type=float, default=None, help=f"numeric tolerance (default ${TOL_ENV} or {DEFAULT_TOL})")
    common.add_argument("--figure", metavar="PATH", help="also save a matplotlib figure here")
    common.add_argument("--report", metavar="PATH", help="write the JSON report here instead of stdout")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("classify", parents=[common], help="classify the regular locus of a net")
    p.add_argument("--net", required=True, help="net JSON file")
    p.add_argument("--constraint", help="positive-definite quadratic form replacing the unit sphere")

    p = sub.add_parser("project", parents=[common], help="project along a tangent direction")
    p.add_argument("--net", required=True)
    p.add_argument("--direction", required=True, help='unit vector, e.g. "sqrt(2)/2,0,sqrt(2)/2"')

    p = sub.add_parser("orbit", parents=[common], help="classify a stored orbit form")
    p.add_argument("--name", required=True)
    p.add_argument("--form", help="label of the stored generic form (e.g. RomanSteiner)")

    p = sub.add_parser("verify-tables", parents=[common], help="check the orbit tables")
    p.add_argument("--mode", choices=("regular", "singular"), default="regular")
    p.add_argument("--grid", type=int, default=0, help="also check the (g, c) family on a W x W grid")
    p.add_argument("--trials", type=int, default=20)

    p = sub.add_parser("mesh", parents=[common], help="export a triangle mesh of the locus")
    p.add_argument("--net", required=True)
    p.add_argument("--output", required=True)
    p.add_argument("--case", choices=("sphere", "cylinder"), default="sphere")
    p.add_argument("--samples", type=int, default=64)
    p.add_argument("--height", type=float, default=4.0)
    return parser


def config_from_args(args) -> RunConfig:
    tol = args.tol if args.tol is not None else default_tolerance()
    extra = {}
    for key in ("constraint", "form", "mode", "grid", "trials", "case", "samples", "height"):
        if hasattr(args, key):
            extra[key] = getattr(args, key)
    return RunConfig(
        command=args.command,
        net_path=getattr(args, "net", None),
        direction=getattr(args, "direction", None),
        orbit_name=getattr(args, "name", None),
        seed=args.seed,
        tolerance=tol,
        output=getattr(args, "output", None),
        figure=args.figure,
        extra=extra,
    )


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = config_from_args(args)
    except InputError as exc:
        report, code = {"schema": SCHEMA, "command": args.command, "error": str(exc)}, EXIT_INPUT
    else:
        report, code = run(cfg)
    text = json.dumps(report, indent=2, default=_fallback) + "\n"
    if args.report:
        with open(args.report, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    if "error" in report and code == EXIT_INPUT:
        print(f"error: {report['error']}", file=sys.stderr)
    return code


def _fallback(obj):
    if isinstance(obj, (Fraction, surd.Surd)):
        return surd.format_number(obj)
    if isinstance(obj, (set, frozenset)):
        return sorted(obj)
    if isinstance(obj, np.generic):
        return obj.item()
    raise TypeError(f"cannot serialize {type(obj).__name__}")


if __name__ == "__main__":
    sys.exit(main())
