"""Command-line interface.

Subcommands: validate | spectrum | lichnerowicz | pform | report.
Exit codes: 0 all must-pass identities hold, 1 a mathematical must-pass
failed, 2 usage or configuration error.  Reports are byte-identical for
identical (config, seed) pairs; timings go to stderr.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import report as rpt
from .config import RunConfig
from .errors import ConfigError, QC7Error, StructuralError

EXIT_OK = 0
EXIT_MATH_FAILURE = 1
EXIT_USAGE = 2


def _add_common(p):
    p.add_argument("--config", help="JSON config file (flags override it)")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--points", type=int, default=None,
                   help="sample point count")
    p.add_argument("--functions", type=int, default=None,
                   help="random function count")
    p.add_argument("--degree", type=int, default=None,
                   help="spectral basis degree")
    p.add_argument("--max-poly-degree", type=int, default=None)
    p.add_argument("--tol", default=None, help="eigensolver residual tolerance")
    p.add_argument("--format", choices=("json", "csv", "markdown"),
                   default=None)
    p.add_argument("--out", default=None, help="output path (default stdout)")


def _config_from(args):
    overrides = {
        "seed": args.seed,
        "sample_points": args.points,
        "random_functions": args.functions,
        "spectral_degree": args.degree,
        "max_poly_degree": args.max_poly_degree,
        "eigen_tol": args.tol,
        "output_format": args.format,
        "output_path": args.out,
    }
    return RunConfig.load(args.config, overrides)


def _emit(cfg, text):
    if cfg.output_path:
        with open(cfg.output_path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def cmd_validate(args):
    cfg = _config_from(args)
    doc = {
        "tool": "qc7", "command": "validate",
        "kernel_backend": rpt.kernel.backend_name(),
        "config": {"seed": cfg.seed, "sample_points": cfg.sample_points},
        "suites": {
            "quatalg": rpt.quatalg_suite(cfg),
            "models": rpt.models_suite(cfg),
        }}
    doc["must_pass_failures"] = rpt._collect_must_pass(doc["suites"])
    text = rpt.to_json(doc) if cfg.output_format != "markdown" \
        else rpt.to_markdown(doc)
    _emit(cfg, text)
    return EXIT_OK if not doc["must_pass_failures"] else EXIT_MATH_FAILURE


def cmd_spectrum(args):
    cfg = _config_from(args)
    spectral_doc = rpt.spectral_suite(cfg, full=False)
    lam_ok = spectral_doc["lambda1"] == "4"
    mu_ok = spectral_doc["mu1"] == "7"
    certified = all(
        r["certified"] for r in spectral_doc["eigenvalues_sub"]
        if r["lambda"] == "4")
    doc = {"tool": "qc7", "command": "spectrum",
           "kernel_backend": rpt.kernel.backend_name(),
           "config": {"seed": cfg.seed,
                      "spectral_degree": cfg.spectral_degree,
                      "eigen_tol": cfg.eigen_tol},
           "spectral": spectral_doc,
           "pass": lam_ok and mu_ok and certified}
    if cfg.output_format == "csv":
        _emit(cfg, rpt.eigentable_csv(spectral_doc))
    elif cfg.output_format == "markdown":
        _emit(cfg, rpt.to_markdown({"suites": {"spectral": spectral_doc}}))
    else:
        _emit(cfg, rpt.to_json(doc))
    return EXIT_OK if doc["pass"] else EXIT_MATH_FAILURE


def cmd_lichnerowicz(args):
    cfg = _config_from(args)
    spectral_doc = rpt.spectral_suite(cfg, full=False)
    lz = spectral_doc["lichnerowicz"]
    doc = {"k0": lz["k0"], "bound": lz["bound"],
           "lambda1": spectral_doc["lambda1"], "sharp": lz["sharp"]}
    _emit(cfg, rpt.to_json(doc))
    return EXIT_OK if lz["sharp"] else EXIT_MATH_FAILURE


def cmd_pform(args):
    cfg = _config_from(args)
    from .poly import parse_poly
    from .scalarops import jet as make_jet, p_form

    sphere, _ = rpt._get_models()
    f = parse_poly(args.function).reduce_sphere()
    pf = p_form(sphere, make_jet(sphere, f))
    doc = {
        "tool": "qc7", "command": "pform", "function": args.function,
        "p_function_integral": rpt.rat(pf.p_function_integral),
        "neg_p_function_integral": rpt.rat(pf.p_integral),
        "consistency_residual": rpt.rat(pf.consistency_residual),
        "b0_identically_zero": pf.B0.is_zero(),
    }
    doc["pass"] = pf.consistency_residual == 0 and doc["b0_identically_zero"]
    _emit(cfg, rpt.to_json(doc))
    return EXIT_OK if doc["pass"] else EXIT_MATH_FAILURE


def cmd_report(args):
    cfg = _config_from(args)
    doc = rpt.full_report(cfg)
    if cfg.output_format == "markdown":
        _emit(cfg, rpt.to_markdown(doc))
    elif cfg.output_format == "csv":
        _emit(cfg, rpt.eigentable_csv(doc["suites"]["spectral"]))
    else:
        _emit(cfg, rpt.to_json(doc))
    return EXIT_OK if doc["summary"]["all_must_pass"] else EXIT_MATH_FAILURE


def build_parser():
    parser = argparse.ArgumentParser(
        prog="qc7",
        description="Exact verification of the quaternionic contact geometry"
                    " of the 3-Sasakian 7-sphere: structure equations,"
                    " curvature constants, identity suites, and the sharp"
                    " first-eigenvalue bound of the sub-Laplacian.")
    sub = parser.add_subparsers(dest="command", required=True)
    p = sub.add_parser("validate", help="structure axioms on both models")
    _add_common(p)
    p.set_defaults(fn=cmd_validate)
    p = sub.add_parser("spectrum", help="exact Rayleigh-Ritz eigenvalue table")
    _add_common(p)
    p.set_defaults(fn=cmd_spectrum)
    p = sub.add_parser("lichnerowicz", help="k0, the bound k0/3, sharpness")
    _add_common(p)
    p.set_defaults(fn=cmd_lichnerowicz)
    p = sub.add_parser("pform", help="P-form integrals of a polynomial")
    _add_common(p)
    p.add_argument("--function", required=True,
                   help="polynomial in x1..x8, e.g. 'x1^2*x2 - 3*x5/4'")
    p.set_defaults(fn=cmd_pform)
    p = sub.add_parser("report", help="full verification report")
    _add_common(p)
    p.set_defaults(fn=cmd_report)
    return parser


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else EXIT_OK
    try:
        return args.fn(args)
    except (ConfigError, StructuralError) as exc:
        print("qc7: error: %s" % exc, file=sys.stderr)
        return EXIT_USAGE
    except QC7Error as exc:
        print("qc7: failure: %s" % exc, file=sys.stderr)
        return EXIT_MATH_FAILURE


if __name__ == "__main__":
    sys.exit(main())
