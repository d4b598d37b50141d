"""Command-line interface.

Exit codes: 0 ok, 2 invalid input, 3 unsaturated sampling, 4 no perfect
matching, 5 verification failure.
"""
from __future__ import annotations

import argparse
import hashlib
import json
import sys
from fractions import Fraction
from pathlib import Path

from . import __version__
from .arrangement import EnumerationConfig
from .errors import HVError, NoMatching, Unsaturated, ValidationError, VerificationFailure

EXIT_OK, EXIT_VALIDATION, EXIT_UNSATURATED, EXIT_NO_MATCHING, EXIT_VERIFICATION = 0, 2, 3, 4, 5


def dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2, default=_default) + "\n"


def _default(o):
    if isinstance(o, Fraction):
        return str(o)
    if isinstance(o, tuple):
        return list(o)
    if hasattr(o, "item"):  # numpy scalars
        return o.item()
    raise TypeError(f"cannot serialize {type(o).__name__}")


def sha256_bytes(data: bytes) -> str:
    return hashlib.sha256(data).hexdigest()


class Run:
    """Collects artifacts and writes the run manifest."""

    def __init__(self, command, args, input_bytes=b""):
        self.command = command
        self.out = Path(args.out_dir)
        self.out.mkdir(parents=True, exist_ok=True)
        self.seed = getattr(args, "seed", None)
        self.config = {k: v for k, v in sorted(vars(args).items())
                       if k not in ("func", "out_dir", "command", "jobs") and not k.startswith("_")}
        self.input_digest = sha256_bytes(input_bytes)
        self.outputs = []
        self.done = False
        args._run = self

    def write(self, name, data):
        raw = data.encode() if isinstance(data, str) else data
        (self.out / name).write_bytes(raw)
        self.outputs.append({"path": name, "sha256": sha256_bytes(raw)})

    def write_json(self, name, obj):
        self.write(name, dumps(obj))

    def register(self, name):
        self.outputs.append({"path": name, "sha256": sha256_bytes((self.out / name).read_bytes())})

    def finish(self, status="ok"):
        manifest = {
            "command": self.command,
            "input_digest": self.input_digest,
            "seed": self.seed,
            "config": self.config,
            "tool_version": __version__,
            "status": status,
            "outputs": sorted(self.outputs, key=lambda o: o["path"]),
        }
        (self.out / "run_manifest.json").write_text(dumps(manifest))
        self.done = True
        return manifest


def _fail(args, status, exc):
    print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
    run = getattr(args, "_run", None)
    try:
        if run is None:
            run = Run(args.command, args)
        if not run.done:
            run.finish(status)
    except OSError as err:
        print(f"error: cannot write run manifest: {err}", file=sys.stderr)


def _read(path) -> bytes:
    try:
        return Path(path).read_bytes()
    except OSError as exc:
        raise ValidationError(f"cannot read {path}: {exc}") from exc


def _load_json(raw: bytes):
    try:
        return json.loads(raw)
    except (json.JSONDecodeError, UnicodeDecodeError) as exc:
        raise ValidationError(f"malformed JSON: {exc}") from exc


def _config(args) -> EnumerationConfig:
    return EnumerationConfig(seed=args.seed, grid_denominator=args.grid_denominator,
                             saturation_count=args.saturation_count, max_samples=args.max_samples)


def _polygon_from(data):
    from .lattice import validate_polygon

    verts = data.get("vertices") if isinstance(data, dict) else data
    if not isinstance(verts, list):
        raise ValidationError("polygon JSON needs a 'vertices' list")
    try:
        return validate_polygon([tuple(int(c) for c in v) for v in verts])
    except (TypeError, ValueError) as exc:
        if isinstance(exc, ValidationError):
            raise
        raise ValidationError(f"bad vertex list: {exc}") from exc


# -- commands ------------------------------------------------------------------


def cmd_hv(args):
    from .hv import linear_hv, theorem1_report
    from .render import arrangement_svg, dimer_svg

    raw = _read(args.polygon)
    run = Run("hv", args, raw)
    p = _polygon_from(_load_json(raw))
    try:
        res, models = linear_hv(p, _config(args), jobs=args.jobs)
    except Unsaturated as exc:
        part = exc.result
        run.write_json("arrangements.json", {"saturated": False, "samples": part.samples,
                                             "distinct_types": part.distinct_types})
        run.finish("Unsaturated")
        raise
    run.write_json("arrangements.json", {
        "polygon": p.to_json(),
        "samples": res.samples,
        "simple_samples": res.simple_samples,
        "distinct_types": res.distinct_types,
        "saturated": res.saturated,
        "admissible": [
            {"signature": sha256_bytes(sig), "complex": cpx.to_json()}
            for sig, cpx in zip(res.signatures, res.complexes)
        ],
    })
    for k, (cpx, g) in enumerate(zip(res.complexes, models)):
        run.write_json(f"dimer_{k}.json", g.to_json())
        run.write(f"dimer_{k}.svg", dimer_svg(g, f"dimer model {k}"))
        run.write(f"arrangement_{k}.svg", arrangement_svg(cpx, f"arrangement {k}"))
    report = theorem1_report(p, res, models)
    run.write_json("theorem1_report.json", report)
    run.finish()
    print(f"{len(models)} dimer model(s); polygon and isoradiality check {'passed' if report['pass'] else 'FAILED'}")
    return EXIT_OK if report["pass"] else EXIT_VERIFICATION


def _load_dimer(raw):
    from .dimer import DimerModel

    return DimerModel.from_json(_load_json(raw))


def cmd_charpoly(args):
    from .dimer import centered_reference, characteristic_polynomial, enumerate_matchings
    from .lattice import hull_polygon, normalize_translation

    raw = _read(args.dimer)
    run = Run("charpoly", args, raw)
    g = _load_dimer(raw)
    ms = enumerate_matchings(g)
    try:
        if not ms:
            raise NoMatching("model has no perfect matching")
        ref = centered_reference(g, ms) if args.reference == "centered" else ms[0]
        z = characteristic_polynomial(g, ref, ms)
    except NoMatching:
        run.finish("NoMatching")
        raise
    try:
        poly = normalize_translation(hull_polygon(z.terms)).to_json()
    except ValidationError:
        poly = None  # degenerate Newton polygon
    run.write_json("charpoly.json", {
        "polynomial": z.to_json(),
        "num_matchings": z.num_matchings,
        "reference_matching": list(ref),
        "newton_polygon": poly,
    })
    run.finish()
    print(z)
    return EXIT_OK


def cmd_zigzag(args):
    from .zigzag import check_consistency, check_isoradiality, zigzag_paths

    raw = _read(args.dimer)
    run = Run("zigzag", args, raw)
    g = _load_dimer(raw)
    paths = zigzag_paths(g)
    iso, cons = check_isoradiality(g), check_consistency(g)
    run.write_json("zigzag.json", {
        "paths": [z.to_json() for z in paths],
        "homology_classes": sorted(list(z.homology) for z in paths),
        "isoradiality": iso,
        "consistency": cons,
    })
    run.finish()
    print(f"{len(paths)} zig-zag paths; isoradial: {iso['pass']}; consistent: {cons['pass']}")
    return EXIT_OK


def _parse_matrix(text):
    try:
        vals = [int(v) for v in text.replace(";", ",").split(",")]
    except ValueError as exc:
        raise ValidationError(f"bad matrix {text!r}") from exc
    if len(vals) != 4:
        raise ValidationError("matrix needs four entries p,r,q,s (row by row)")
    return [vals[:2], vals[2:]]


def cmd_mckay(args):
    from .errors import SingularMatrix
    from .lattice import GroupMatrix, triangle_to_matrix
    from .mckay import mckay_quiver, quiver_tiling, verify_theorem2
    from .render import dimer_svg

    if args.input is None and args.matrix is None:
        raise ValidationError("give an input file or --matrix")
    raw = _read(args.input) if args.input else args.matrix.encode()
    run = Run("mckay", args, raw)
    triangle = None
    if args.input:
        data = _load_json(raw)
        if isinstance(data, dict) and "matrix" in data:
            rows = data["matrix"]
        else:
            triangle = _polygon_from(data)
            if len(triangle.vertices) != 3:
                raise ValidationError("McKay input polygon must be a triangle")
            rows = triangle_to_matrix(triangle).rows()
    else:
        rows = _parse_matrix(args.matrix)
    try:
        P = GroupMatrix.from_rows(rows)
    except (TypeError, ValueError) as exc:
        raise ValidationError(f"bad matrix: {exc}") from exc
    if P.det == 0:
        raise SingularMatrix("det P = 0")
    if P.det < 0:
        raise ValidationError("det P must be positive")
    q = mckay_quiver(P)
    tiling = quiver_tiling(P)
    out = q.to_json()
    out["matrix"] = P.rows()
    out["relations_text"] = [q.format_relation(a) for a in range(len(q.arrows))]
    run.write_json("quiver.json", out)
    run.write("quiver.dot", q.to_dot())
    run.write_json("tiling.json", tiling.dimer.to_json())
    run.write("tiling.svg", dimer_svg(tiling.dimer, "McKay dual tiling"))
    status = EXIT_OK
    if triangle is not None:
        report = verify_theorem2(triangle, _config(args), jobs=args.jobs)
        run.write_json("theorem2_report.json", report)
        if not report["pass"]:
            status = EXIT_VERIFICATION
    run.finish("ok" if status == EXIT_OK else "VerificationFailure")
    print(f"{len(q.vertices)} vertices, {len(q.arrows)} arrows, {len(q.potential)} potential cycles")
    return status


def cmd_coamoeba(args):
    from .coamoeba import LaurentPolynomial, Trinomial, coamoeba_decomposition, sample_zero_locus, verify_theorem3
    from .render import coamoeba_png, coamoeba_svg

    raw = _read(args.trinomial)
    run = Run("coamoeba", args, raw)
    data = _load_json(raw)
    if not isinstance(data, dict):
        raise ValidationError("trinomial JSON must be an object")
    try:
        w = Trinomial.from_polynomial(LaurentPolynomial.from_json(data))
    except (KeyError, TypeError, ZeroDivisionError) as exc:
        raise ValidationError(f"malformed trinomial: {exc}") from exc
    dec = coamoeba_decomposition(w)
    # negative-control hook: fixtures may flip cells of the decomposition
    for cell in data.get("tamper", {}).get("flip_cells", []):
        dec = dec.with_flipped_cell(int(cell))
    run.write_json("decomposition.json", dec.to_json())
    pts = sample_zero_locus(w, args.samples, args.seed)
    run.write("coamoeba.svg", coamoeba_svg(dec, pts))
    coamoeba_png(dec, run.out / "coamoeba.png", args.resolution, pts)
    run.register("coamoeba.png")
    try:
        report = verify_theorem3(w, args.samples, args.grid, args.seed, decomposition=dec)
    except VerificationFailure as exc:
        run.write_json("theorem3_report.json", {"pass": False, "message": str(exc),
                                                "counterexample": exc.counterexample})
        run.finish("VerificationFailure")
        raise
    run.write_json("theorem3_report.json", report)
    run.finish()
    print(f"{report['colored_cells']} colored cells, {len(report['vertices'])} vertices; check passed")
    return EXIT_OK


def cmd_repro(args):
    from .repro import run_suite

    run = Run("repro", args)
    rep = run_suite(_config(args), jobs=args.jobs, samples=args.samples, grid=args.grid, seed=args.seed)
    timings = {k: v.pop("seconds") for k, v in rep["items"].items()}
    run.write_json("repro_report.json", rep)
    run.finish("ok" if rep["pass"] else "VerificationFailure")
    for name, item in rep["items"].items():
        print(f"{'PASS' if item['pass'] else 'FAIL'}  {name}  ({timings[name]:.2f}s)")
    return EXIT_OK if rep["pass"] else EXIT_VERIFICATION


# -- parser --------------------------------------------------------------------


def _common(p, sampling=False):
    p.add_argument("--out-dir", default="out", help="directory for artifacts (default: out)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--jobs", type=int, default=1, help="worker processes; never changes results")
    if sampling:
        p.add_argument("--grid-denominator", type=int, default=64)
        p.add_argument("--saturation-count", type=int, default=200)
        p.add_argument("--max-samples", type=int, default=50_000)


def build_parser():
    ap = argparse.ArgumentParser(prog="hvdimer", description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version", version=__version__)
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("hv", help="dimer models of a lattice polygon")
    p.add_argument("polygon", help='JSON file {"vertices": [[x, y], ...]}')
    _common(p, sampling=True)
    p.set_defaults(func=cmd_hv)

    p = sub.add_parser("charpoly", help="characteristic polynomial of a dimer model")
    p.add_argument("dimer")
    p.add_argument("--reference", choices=("centered", "first"), default="centered")
    _common(p)
    p.set_defaults(func=cmd_charpoly)

    p = sub.add_parser("zigzag", help="zig-zag paths and isoradiality/consistency reports")
    p.add_argument("dimer")
    _common(p)
    p.set_defaults(func=cmd_zigzag)

    p = sub.add_parser("mckay", help="McKay quiver, dual tiling and duality check")
    p.add_argument("input", nargs="?", help='JSON file {"matrix": [[p, r], [q, s]]} or a triangle')
    p.add_argument("--matrix", help="entries p,r,q,s row by row")
    _common(p, sampling=True)
    p.set_defaults(func=cmd_mckay)

    p = sub.add_parser("coamoeba", help="coamoeba decomposition of a trinomial")
    p.add_argument("trinomial", help='JSON file {"polynomial": "1 + x + y"} or {"terms": [...]}')
    p.add_argument("--samples", type=int, default=10_000)
    p.add_argument("--grid", type=int, default=512)
    p.add_argument("--resolution", type=int, default=512)
    _common(p)
    p.set_defaults(func=cmd_coamoeba)

    p = sub.add_parser("repro", help="run the full reference-example suite")
    p.add_argument("--samples", type=int, default=10_000)
    p.add_argument("--grid", type=int, default=512)
    _common(p, sampling=True)
    p.set_defaults(func=cmd_repro)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if getattr(args, "jobs", 1) < 1:
            raise ValidationError("--jobs must be at least 1")
        return args.func(args)
    except Unsaturated as exc:
        _fail(args, "Unsaturated", exc)
        return EXIT_UNSATURATED
    except NoMatching as exc:
        _fail(args, "NoMatching", exc)
        return EXIT_NO_MATCHING
    except VerificationFailure as exc:
        _fail(args, "VerificationFailure", exc)
        return EXIT_VERIFICATION
    except ValidationError as exc:
        _fail(args, "ValidationError", exc)
        return EXIT_VALIDATION
    except HVError as exc:
        _fail(args, "VerificationFailure", exc)
        return EXIT_VERIFICATION

if __name__ == "__main__":
    sys.exit(main())
