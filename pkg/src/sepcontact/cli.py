"""Command-line entry point: ``sepcontact <subcommand> [flags]``.

Exit codes: 0 success, 1 a mathematical check failed, 2 usage or input error.
Every run writes a manifest (arguments, seed, version, timestamps, output
digest) to ``<out>.manifest.json`` when ``--out`` is given, else to stderr.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import math
import os
import sys
from datetime import datetime, timezone
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import __version__
from . import constants as K
from .bounds import appendix_chain_check, bound_report
from .census import component_censuses
from .errors import (DegreeError, EmbeddingError, InternalInconsistency, MissingPairError,
                     OverlapError, SepContactError)
from .formats import (certificate_from_dict, certificate_to_dict, csv_value, dumps, graph_to_dict,
                      packing_from_dict, packing_to_dict)
from .geometry import LATTICE, contact_graph, scale_to_unit_radius
from .lattice import LatticeShape, adjacency_count, box_shape, format_shape, quasicube, random_animal
from .oracle import max_contacts_lattice
from .separability import Unknown, axis_certificate, find_certificate, guillotine_generate, verify_certificate

CHECK_FAILURES = (OverlapError, DegreeError, InternalInconsistency, EmbeddingError, MissingPairError)


class CheckFailed(Exception):
    """Raised by a subcommand whose report contains a failed check."""

    def __init__(self, report):
        super().__init__("check failed")
        self.report = report


def _read_json(path: str) -> dict:
    with open(path, encoding="utf-8") as fh:
        return json.load(fh)


def _load_packing(args):
    if not args.input:
        raise argparse.ArgumentTypeError("--in is required")
    data = _read_json(args.input)
    return data, packing_from_dict(data)


# -- subcommands ------------------------------------------------------------

def cmd_bounds(args):
    rep = bound_report(args.n, args.d)
    if args.csv:
        lines = ["n,d,quantity,bound_name,value,strict"]
        for e in rep.entries():
            lines.append(",".join(csv_value(v) for v in (rep.n, rep.d, e.quantity, e.name, e.value, e.strict)))
        return "\n".join(lines) + "\n"
    return rep.to_dict()


def cmd_construct(args):
    shape = quasicube(args.n, args.d)
    c = adjacency_count(shape)
    out = {"n": args.n, "d": args.d, "contacts": c,
           "cells": [list(x) for x in shape.sorted_cells()],
           "packing": packing_to_dict(shape.to_packing())}
    if args.n >= 2:
        out["thm1_bound"] = bound_report(args.n, args.d).thm1_lattice
    return out


def cmd_oracle(args):
    res = max_contacts_lattice(args.n, args.d, connected_only=not args.any_shape, prune=not args.no_prune,
                               allow_large=args.allow_large, threads=args.threads,
                               cache_dir=os.environ.get("SEPCONTACT_CACHE_DIR") or None)
    if args.out:
        Path(args.out).with_suffix(".shape").write_text(format_shape(res.witness))
    return res.to_dict()


def cmd_verify(args):
    data, p = _load_packing(args)
    g = contact_graph(p)
    if args.cert:
        cert, source = certificate_from_dict(_read_json(args.cert)), "file"
    elif "certificate" in data:
        cert, source = certificate_from_dict(data["certificate"]), "embedded"
    elif p.mode == LATTICE:
        cert, source = axis_certificate(p), "axis"
    else:
        cert, source = find_certificate(p), "search"
    out = {"n": p.n, "d": p.dimension, "contacts": g.contact_number,
           "max_degree": max(g.degree), "certificate_source": source,
           "graph": graph_to_dict(g)}
    if isinstance(cert, Unknown):
        out.update(certified=False, status="unknown", unresolved_pair=list(cert.pair))
        raise CheckFailed(out)
    rep = verify_certificate(p, cert)
    out.update(certified=rep.valid, status="valid" if rep.valid else "invalid",
               first_violation=rep.first_violation)
    if args.emit_cert:
        out["certificate"] = certificate_to_dict(cert)
    if not rep.valid:
        raise CheckFailed(out)
    return out


def cmd_gen(args):
    p, cert = guillotine_generate(args.d, args.n, args.seed, jitter=args.jitter)
    out = packing_to_dict(p)
    out["certificate"] = certificate_to_dict(cert)
    return out


def cmd_census(args):
    _, p = _load_packing(args)
    if p.mode == LATTICE:
        p = scale_to_unit_radius(p)
    comps = component_censuses(p)
    rows = []
    for fc in comps:
        row = fc.to_dict()
        row["appendix_chain"] = appendix_chain_check(fc.n, fc.c) if fc.n >= 2 else None
        rows.append(row)
    ok = all(fc.ok for fc in comps) and all(r["appendix_chain"] is not False for r in rows)
    out = comps[0].to_dict() if len(comps) == 1 else {"n": p.n, "components": rows}
    if len(comps) == 1:
        out["appendix_chain"] = rows[0]["appendix_chain"]
    out["ok"] = ok
    if not ok:
        raise CheckFailed(out)
    return out


def _is_full_cube(s: LatticeShape) -> bool:
    arr = np.array(s.sorted_cells())
    sides = arr.max(axis=0) - arr.min(axis=0) + 1
    return bool(np.all(sides == sides[0]) and s.n == int(sides[0]) ** s.dimension)


def check_profile() -> dict:
    x, v = K.minimize_profile()
    return {"argmin": x, "min": v, "pass": abs(x * x - 1.5) <= 1e-12 and abs(v - K.PROFILE_MIN) <= 1e-12}


def check_caps() -> dict:
    c = K.cap_density_constant()
    target = 3.0 * (1.0 - 1.0 / math.sqrt(2.0))
    t3 = K.theorem3_constant_check(Fraction("0.6401"))
    return {"cap_density_constant": c, "target": target, "theorem3_constant": t3,
            "pass": abs(c - target) <= 1e-12 and t3}


def check_iso(seed: int, shapes: int = 1000) -> dict:
    rng = np.random.default_rng(seed)
    tested, failures, bad_equality = 0, 0, 0
    for d in (2, 3):
        pool = [box_shape((k,) * d) for k in range(1, 5)]
        pool += [random_animal(int(rng.integers(1, 40)), d, rng) for _ in range(shapes)]
        for s in pool:
            r = K.box_isoperimetric_check(s)
            tested += 1
            failures += not r.passed
            bad_equality += r.equality != _is_full_cube(s)
    return {"shapes": tested, "failures": failures, "equality_mismatches": bad_equality,
            "pass": failures == 0 and bad_equality == 0}


def check_orthoscheme(seed: int, samples: int, threads: int = 1) -> dict:
    quad, qerr = K.orthoscheme_density_quadrature(K.EXTREMAL_ORTHOSCHEME)
    mc = K.orthoscheme_ball_density(K.EXTREMAL_ORTHOSCHEME, seed=seed, samples=samples, threads=threads)
    tol = mc.half_width + qerr
    upper = mc.value + mc.half_width
    const_ok = K.theorem3_constant_check(Fraction(K.ORTHOSCHEME_DENSITY))
    return {"quadrature": quad, "quadrature_error": qerr, "golden": K.ORTHOSCHEME_DENSITY,
            "monte_carlo": mc.to_dict(), "combined_tolerance": tol, "upper_confidence": upper,
            "theorem3_constant_from_golden": const_ok,
            "pass": abs(mc.value - quad) <= tol and tol <= 2e-4 and upper < K.DENSITY_BOUND
            and abs(quad - K.ORTHOSCHEME_DENSITY) <= 1e-12 and const_ok}


def cmd_constants(args):
    which = ["profile", "caps", "iso", "orthoscheme"] if args.check == "all" else [args.check]
    out = {}
    for name in which:
        if name == "profile":
            out[name] = check_profile()
        elif name == "caps":
            out[name] = check_caps()
        elif name == "iso":
            out[name] = check_iso(args.seed)
        else:
            out[name] = check_orthoscheme(args.seed, args.samples or 10 ** 7, args.threads)
    out["pass"] = all(v["pass"] for v in out.values())
    if not out["pass"]:
        raise CheckFailed(out)
    return out


def cmd_estimate(args):
    _, p = _load_packing(args)
    if p.mode == LATTICE or p.radius != 1.0:
        p = scale_to_unit_radius(p)
    samples = args.samples or 10 ** 5
    out = K.union_inequalities(p, seed=args.seed, volume_samples=samples * 10, surface_samples=samples)
    out["pass"] = all(out[k] for k in ("a_density", "b_isoperimetric", "c_contact_surface",
                                        "d_surface_lower", "e_full_degree"))
    if not out["pass"]:
        raise CheckFailed(out)
    return out


# -- argument parsing ---------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--samples", type=int, default=None)
    common.add_argument("--threads", type=int, default=1)
    common.add_argument("--csv", action="store_true")
    common.add_argument("--json", action="store_true")
    common.add_argument("--in", dest="input")
    common.add_argument("--out")

    parser = argparse.ArgumentParser(prog="sepcontact", description="Contact numbers of totally separable packings.")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, fn, help_, need_nd=True, n_required=True):
        sp = sub.add_parser(name, parents=[common], help=help_)
        if need_nd:
            sp.add_argument("--n", type=int, required=n_required)
            sp.add_argument("--d", type=int, required=True)
        sp.set_defaults(fn=fn)
        return sp

    add("bounds", cmd_bounds, "closed-form upper bounds at (n, d)")
    add("construct", cmd_construct, "greedy quasi-cube lattice packing")
    sp = add("oracle", cmd_oracle, "exact lattice maximum by exhaustive search")
    sp.add_argument("--no-prune", action="store_true")
    sp.add_argument("--allow-large", action="store_true")
    sp.add_argument("--any-shape", action="store_true", help="allow disconnected shapes")
    sp = add("verify", cmd_verify, "check a packing and its separation certificate", need_nd=False)
    sp.add_argument("--cert", help="certificate JSON (default: embedded, axis or searched)")
    sp.add_argument("--emit-cert", action="store_true")
    sp = add("gen", cmd_gen, "random guillotine packing with certificate")
    sp.add_argument("--jitter", type=float, default=0.0)
    add("census", cmd_census, "face census of a planar packing", need_nd=False)
    sp = add("constants", cmd_constants, "verify numeric constants", need_nd=False)
    sp.add_argument("--check", choices=["all", "orthoscheme", "caps", "iso", "profile"], default="all")
    add("estimate", cmd_estimate, "Monte Carlo union volume/surface audit", need_nd=False)
    return parser


def _render(result, args) -> str:
    if isinstance(result, str):
        return result
    return dumps(result) + "\n"


def _manifest(argv, args, text: str, started: str) -> dict:
    return {
        "subcommand": args.command, "argv": list(argv), "seed": args.seed, "version": __version__,
        "started": started, "finished": datetime.now(timezone.utc).isoformat(),
        "output_sha256": hashlib.sha256(text.encode()).hexdigest(),
    }


def run(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.input is None and args.command in ("verify", "census", "estimate"):
        parser.error(f"{args.command}: the --in flag is required")
    started = datetime.now(timezone.utc).isoformat()
    code = 0
    try:
        result = args.fn(args)
    except CheckFailed as exc:
        result, code = exc.report, 1
    except CHECK_FAILURES as exc:
        result, code = {"error": type(exc).__name__, "message": str(exc)}, 1
    except (SepContactError, ValueError, OSError, KeyError) as exc:
        print(f"sepcontact {args.command}: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    text = _render(result, args)
    if args.out:
        Path(args.out).write_text(text)
        manifest_path = Path(str(args.out) + ".manifest.json")
        manifest_path.write_text(dumps(_manifest(argv, args, text, started)) + "\n")
    else:
        sys.stdout.write(text)
        sys.stderr.write(dumps(_manifest(argv, args, text, started)) + "\n")
    return code


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
