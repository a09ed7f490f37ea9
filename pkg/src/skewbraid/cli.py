"""Command-line interface.

Every command prints a JSON document (or writes it to ``--out``). Floats are
rounded to 12 decimals and keys are sorted, so identical inputs give
byte-identical output. Exit status 1 means a precondition failed, 2 means a
numerical procedure did not converge; both write an error object to stderr.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import sys
from typing import Any, Optional, Sequence

import numpy as np

from . import braid as braidmod
from .errors import NumericalError, ParameterFormatError, PreconditionError
from .escape import EscapeConfig, admissibility_certificate, shift_locus_test
from .factory import CycleSpec, cycle_type_params, preset_info, quad_s, smallest_admissible_scale
from .julia import Code, Perm, component_orbit, fixed_point_components, h_apply, perm_order
from .monodromy import level_monodromy_check, track_circle
from .skewparam import SkewParam, discriminant_in_z, e_membership, escape_norm

SCHEMA = "skewbraid/1"


class UsageError(PreconditionError):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def canon(obj: Any) -> Any:
    """JSON-ready copy with floats rounded to 12 decimals."""
    if isinstance(obj, dict):
        return {str(k): canon(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [canon(v) for v in obj]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        if not math.isfinite(x):
            return str(x)
        x = round(x, 12)
        return 0.0 if x == 0 else x
    if isinstance(obj, (complex, np.complexfloating)):
        return [canon(obj.real), canon(obj.imag)]
    if isinstance(obj, np.ndarray):
        return canon(obj.tolist())
    return obj


def dumps(obj: Any) -> str:
    return json.dumps(canon(obj), sort_keys=True, indent=2) + "\n"


def parse_complex(text: str) -> complex:
    try:
        return complex(text.strip().replace("i", "j").replace(" ", ""))
    except ValueError as exc:
        raise ParameterFormatError(f"not a complex number: {text!r}") from exc


def _emit(doc: dict, out: Optional[str]) -> None:
    text = dumps(doc)
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _config(args) -> EscapeConfig:
    return EscapeConfig(alpha=args.alpha, max_iter=args.max_iter, z_samples=args.grid, margin=args.margin)


def _load_param(args, cfg: EscapeConfig) -> tuple[SkewParam, dict]:
    if bool(args.params) == bool(args.preset):
        raise UsageError("give exactly one of --params FILE or --preset NAME")
    info: dict = {}
    if args.preset:
        p = preset_info(args.preset)
        lam = p.param
        info = {"preset": p.name, "preset_scale": p.scale, "description": p.description}
    else:
        lam = SkewParam.load(args.params)
        info = {"params_file": args.params}
    scale = args.scale
    if scale == "auto":
        for k in range(21):
            t = float(2**k)
            if admissibility_certificate(lam.scaled(t), cfg)[0]:
                break
        else:
            t = 1.0
        info["scale"] = t
        lam = lam.scaled(t)
    elif scale is not None:
        try:
            t = float(scale)
        except ValueError as exc:
            raise ParameterFormatError(f"--scale must be a number or auto, got {scale!r}") from exc
        info["scale"] = t
        lam = lam.scaled(t)
    else:
        info["scale"] = 1.0
    return lam, info


def _param_doc(lam: SkewParam) -> dict:
    doc = lam.to_json_obj()
    doc["flat"] = [complex(x) for x in lam.flat]
    return doc


def _config_doc(args, cfg: EscapeConfig) -> dict:
    doc = {"escape": cfg.to_dict()}
    for key in ("steps", "tol", "level", "turns", "angle"):
        if hasattr(args, key):
            doc[key] = getattr(args, key)
    return doc


def _braid_section(g, angle: float) -> tuple[dict, Any, Any]:
    ex = braidmod.extract(g, angle)
    lk = braidmod.pairwise_linking(g)
    inv = braidmod.invariants(g)
    word_fp = braidmod.fingerprint_from_word(ex.word)
    doc = {
        "word": str(ex.word),
        "crossings": len(ex.crossings),
        "all_crossings_positive": all(c.sign > 0 for c in ex.crossings),
        "projection_angle": ex.angle,
        "exponent_sum_word": ex.word.exponent_sum,
        "exponent_sum_linking": lk.total,
        "invariants": inv.to_dict(),
        "components": [list(c) for c in lk.components],
    }
    agree = {
        "exponent_word_vs_linking": ex.word.exponent_sum == lk.total,
        "fingerprint_word_vs_geometry": braidmod.fingerprint_equal(inv, word_fp),
        "permutation_word_vs_geometry":
            braidmod.word_permutation(ex.word) == braidmod.position_permutation(ex, g),
    }
    return doc, agree, inv


def cmd_analyze(args) -> int:
    cfg = _config(args)
    lam, info = _load_param(args, cfg)
    report: dict = {"schema": SCHEMA, "command": "analyze", "config": _config_doc(args, cfg),
                    "input": info, "parameter": _param_doc(lam)}
    report["escape_norm"] = escape_norm(lam)
    report["alpha"] = cfg.alpha
    ok, rep = admissibility_certificate(lam, cfg)
    report["e_membership"] = {"in_E": rep.in_E, "circle_roots": rep.circle_roots}
    verdict = shift_locus_test(lam, cfg)
    report["shift_locus"] = {"verdict": verdict.kind, "grid": verdict.grid,
                             "witnesses": verdict.witnesses[:8]}
    report["admissibility"] = {
        "admissible": ok, "reason": rep.reason, "min_critical_value": rep.min_critical_value,
        "bound": rep.bound, "slack": rep.slack, "binding_z": rep.binding_z,
        "binding_c": rep.binding_c, "doubling_ok": rep.doubling_ok,
    }
    if not ok:
        report["monodromy"] = None
        _emit(report, args.out)
        return 0
    g = track_circle(lam, 1, 1, args.steps, args.tol, certify=False)
    S = g.permutation
    report["monodromy"] = {"images": list(S.images), "cycles": str(S), "cycle_type": list(S.cycle_type())}
    bdoc, agree, inv = _braid_section(g, args.angle)
    report["braid"] = bdoc
    comps = fixed_point_components(S)
    report["julia"] = {
        "m_S": perm_order(S),
        "fixed_point_components": [{"members": list(c.members), "winding": c.winding} for c in comps],
    }
    agree["windings_geometry_vs_combinatorics"] = sorted(inv.windings) == sorted(c.winding for c in comps)
    level = args.level
    if level is None:
        level = 2 if lam.d**2 <= 32 else 1
    check = level_monodromy_check(lam, level, args.turns, args.steps, args.tol, certify=False)
    agree["recurrence_numeric_vs_formula"] = check.match
    report["recurrence"] = {"level": level, "turns": args.turns, "match": check.match,
                            "numeric": list(check.numeric.images), "formula": list(check.formula.images)}
    report["agreement"] = agree
    if "preset" in info and preset_info(info["preset"]).diagram_word is not None:
        dw = braidmod.BraidWord.parse(preset_info(info["preset"]).diagram_word, lam.d)
        same = braidmod.fingerprint_equal(inv, braidmod.fingerprint_from_word(dw))
        report["reference_diagram"] = {"word": str(dw), "exponent_sum": dw.exponent_sum,
                                       "fingerprint_equal": same, "discrepancy": not same}
    if args.figure:
        from .plotting import plot_braid

        plot_braid(g, args.figure, args.angle, title=str(S))
    _emit(report, args.out)
    return 0


def cmd_braid(args) -> int:
    cfg = _config(args)
    lam, info = _load_param(args, cfg)
    g = track_circle(lam, args.level or 1, args.turns, args.steps, args.tol, cfg=cfg)
    bdoc, agree, _ = _braid_section(g, args.angle)
    ex = braidmod.extract(g, args.angle)
    if args.svg:
        with open(args.svg, "w", encoding="utf-8") as fh:
            fh.write(braidmod.to_svg(ex.word))
    if args.csv:
        g.write_csv(args.csv)
    if args.figure:
        from .plotting import plot_braid

        plot_braid(g, args.figure, ex.angle, title=str(ex.word))
    if args.out:
        doc = {"schema": SCHEMA, "command": "braid", "config": _config_doc(args, cfg), "input": info,
               "parameter": _param_doc(lam), "permutation": str(g.permutation), "braid": bdoc,
               "agreement": agree}
        _emit(doc, args.out)
    sys.stdout.write(str(ex.word) + "\n")
    return 0


def cmd_img_verify(args) -> int:
    cfg = _config(args)
    lam, info = _load_param(args, cfg)
    level = args.level or 2
    check = level_monodromy_check(lam, level, args.turns, args.steps, args.tol, cfg=cfg)
    doc = {"schema": SCHEMA, "command": "img-verify", "config": _config_doc(args, cfg), "input": info,
           "parameter": _param_doc(lam), "level": level, "turns": args.turns, "match": check.match,
           "S": str(check.S), "numeric": list(check.numeric.images), "formula": list(check.formula.images),
           "words": ["".join(map(str, w)) for w in check.words]}
    _emit(doc, args.out)
    return 0


def cmd_scan_e(args) -> int:
    cfg = _config(args)
    lam, info = _load_param(args, cfg)
    P = discriminant_in_z(lam)
    in_E, hits = e_membership(lam, args.e_tol)
    from .cpoly import roots as all_roots

    rts = all_roots(P) if P.degree >= 1 else []
    rows = [{"index": i + 1, "z": r, "modulus": abs(r), "on_circle": abs(abs(r) - 1) <= args.e_tol}
            for i, r in enumerate(rts)]
    if args.csv:
        with open(args.csv, "w", newline="", encoding="utf-8") as fh:
            wr = csv.writer(fh)
            wr.writerow(["index", "re_z", "im_z", "modulus", "on_circle"])
            for row in rows:
                z = row["z"]
                wr.writerow([row["index"], f"{z.real:.12g}", f"{z.imag:.12g}", f"{row['modulus']:.12g}",
                             int(row["on_circle"])])
    if args.figure:
        from .plotting import plot_discriminant_roots

        plot_discriminant_roots(rts, args.figure, args.e_tol)
    doc = {"schema": SCHEMA, "command": "scan-e", "config": _config_doc(args, cfg), "input": info,
           "parameter": _param_doc(lam), "discriminant_coefficients": list(P.coeffs),
           "roots": rows, "in_E": in_E, "circle_roots": hits, "tolerance": args.e_tol}
    _emit(doc, args.out)
    return 0


def cmd_quad(args) -> int:
    a, b, c = (parse_complex(x) for x in (args.a, args.b, args.c))
    s = quad_s(a, b, c)
    word = braidmod.BraidWord(((1, 1),) * s, 2)
    doc = {"schema": SCHEMA, "command": "quad", "a": a, "b": b, "c": c, "s": s, "word": str(word)}
    _emit(doc, args.out)
    return 0


def _int_list(text: str) -> tuple[int, ...]:
    text = text.strip()
    if not text:
        return ()
    try:
        return tuple(int(x) for x in text.split(","))
    except ValueError as exc:
        raise ParameterFormatError(f"expected comma-separated integers, got {text!r}") from exc


def cmd_factory(args) -> int:
    cfg = _config(args)
    radii = ()
    if args.radii:
        try:
            radii = tuple(float(x) for x in args.radii.split(","))
        except ValueError as exc:
            raise ParameterFormatError(f"bad --radii {args.radii!r}") from exc
    spec = CycleSpec(args.d, args.fixed, _int_list(args.cycles), radii)
    if args.scale in (None, "auto"):
        t, lam = smallest_admissible_scale(spec, cfg)
    else:
        t = float(args.scale)
        lam = cycle_type_params(spec, t)
    g = track_circle(lam, 1, 1, args.steps, args.tol, cfg=cfg)
    tracked = g.permutation.cycle_type()
    doc = {"schema": SCHEMA, "command": "factory", "config": _config_doc(args, cfg), "spec": spec.to_dict(),
           "scale": t, "parameter": _param_doc(lam),
           "pipeline": {"requested_cycle_type": list(spec.cycle_type), "tracked_cycle_type": list(tracked),
                        "permutation": str(g.permutation), "match": tuple(tracked) == spec.cycle_type}}
    if args.csv:
        g.write_csv(args.csv)
    if args.figure:
        from .plotting import plot_braid

        plot_braid(g, args.figure, title=str(g.permutation))
    _emit(doc, args.out)
    return 0


def cmd_suspension(args) -> int:
    S = Perm.parse(args.perm, args.d)
    code = Code.parse(args.code)
    code.check(args.d)
    orbit, winding = component_orbit(S, args.d, code)
    doc = {"schema": SCHEMA, "command": "suspension", "perm": str(S), "d": args.d, "m_S": perm_order(S),
           "code": str(code), "h_code": str(h_apply(S, args.d, code)), "orbit": [str(c) for c in orbit],
           "winding": winding}
    _emit(doc, args.out)
    return 0


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--out", help="write the JSON document here instead of stdout")

    params = _Parser(add_help=False)
    params.add_argument("--params", help="parameter JSON file")
    params.add_argument("--preset", help="named parameter")
    params.add_argument("--scale", help="multiply the parameter by F, or 'auto'")

    tuning = _Parser(add_help=False)
    tuning.add_argument("--alpha", type=float, default=1.5)
    tuning.add_argument("--grid", type=int, default=256)
    tuning.add_argument("--margin", type=float, default=1.25)
    tuning.add_argument("--max-iter", dest="max_iter", type=int, default=200)
    tuning.add_argument("--steps", type=int, default=1024)
    tuning.add_argument("--tol", type=float, default=1e-10)

    tracking = _Parser(add_help=False)
    tracking.add_argument("--level", type=int, default=None)
    tracking.add_argument("--turns", type=int, default=1)
    tracking.add_argument("--angle", type=float, default=0.0, help="projection angle for crossings")

    p = _Parser(prog="skewbraid", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    a = sub.add_parser("analyze", parents=[common, params, tuning, tracking], help="full report")
    a.add_argument("--figure", help="PNG of the tracked strands")
    a.set_defaults(func=cmd_analyze)

    b = sub.add_parser("braid", parents=[common, params, tuning, tracking], help="braid word and diagrams")
    b.add_argument("--svg")
    b.add_argument("--csv", help="strand samples (strand_id, t, re_w, im_w)")
    b.add_argument("--figure")
    b.set_defaults(func=cmd_braid)

    i = sub.add_parser("img-verify", parents=[common, params, tuning, tracking],
                       help="tree monodromy against the recurrence")
    i.set_defaults(func=cmd_img_verify)

    e = sub.add_parser("scan-e", parents=[common, params, tuning], help="discriminant zeros")
    e.add_argument("--e-tol", dest="e_tol", type=float, default=1e-6)
    e.add_argument("--csv")
    e.add_argument("--figure")
    e.set_defaults(func=cmd_scan_e)

    q = sub.add_parser("quad", parents=[common], help="the count s for the quadratic family")
    q.add_argument("--a", required=True)
    q.add_argument("--b", required=True)
    q.add_argument("--c", required=True)
    q.set_defaults(func=cmd_quad)

    f = sub.add_parser("factory", parents=[common, tuning], help="cycle-type witness parameter")
    f.add_argument("--d", type=int, required=True)
    f.add_argument("--fixed", type=int, default=0)
    f.add_argument("--cycles", default="")
    f.add_argument("--radii", default="")
    f.add_argument("--scale", default="auto")
    f.add_argument("--csv")
    f.add_argument("--figure")
    f.set_defaults(func=cmd_factory)

    s = sub.add_parser("suspension", parents=[common], help="h-orbit and winding of a code")
    s.add_argument("--perm", required=True, help='cycle notation, e.g. "(2 3)"')
    s.add_argument("--d", type=int, required=True)
    s.add_argument("--code", required=True, help='"pre:period", e.g. "2:1,3"')
    s.set_defaults(func=cmd_suspension)
    return p


def _fail(exc: Exception, code: int) -> int:
    sys.stderr.write(json.dumps({"error": type(exc).__name__, "message": str(exc), "exit": code},
                                sort_keys=True) + "\n")
    return code


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except PreconditionError as exc:
        return _fail(exc, 1)
    except NumericalError as exc:
        return _fail(exc, 2)
    except OSError as exc:
        return _fail(exc, 1)


if __name__ == "__main__":
    sys.exit(main())
