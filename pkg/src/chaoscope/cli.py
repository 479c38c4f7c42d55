"""
``chaoscope`` command line.

Analysis commands print ``{"command", "params", "result"}`` JSON (or CSV with
``# key=value`` header lines); ``gallery build`` and ``op apply`` print bare
spec / vector documents so they can be fed back in.  Exit codes: 0 success,
1 computation error, 2 usage error, 3 relation violation or gallery mismatch.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from pathlib import Path

import numpy as np

from . import classifier, constructions as gal, orbits, serialization as ser, spectral
from .operators import SparseVector, apply

EXIT_OK, EXIT_ERROR, EXIT_USAGE, EXIT_VIOLATION = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}\n{self.format_usage().strip()}")


# ---------------------------------------------------------------------------
# input helpers


def _read(value: str, inline: bool) -> str:
    if inline:
        return value
    try:
        return Path(value).read_text()
    except OSError as exc:
        raise UsageError(f"cannot read {value}: {exc.strerror}") from None


def _spec(args):
    if getattr(args, "gallery", None):
        return gal.gallery(args.gallery).spec
    if not args.spec:
        raise UsageError("--spec (or --gallery) is required")
    return ser.parse_spec(_read(args.spec, args.inline))


def _vector(value, args) -> SparseVector:
    if value is None:
        raise UsageError("a vector argument is required")
    return ser.parse_vector(_read(value, args.inline))


def _floats(text: str) -> list[float]:
    return [float(x) for x in text.split(",") if x.strip()]


def _ints(text: str) -> list[int]:
    return [int(x) for x in text.split(",") if x.strip()]


def _random_vectors(op, count: int, seed: int, width: int = 10) -> list[SparseVector]:
    rng = np.random.default_rng(seed)
    lo, hi = op.domain()
    start = 0 if lo is not None else -(width // 2)
    if lo is not None and hi is not None:
        width = min(width, hi - lo + 1)
    out = []
    for _ in range(count):
        vals = rng.standard_normal(width) + 1j * rng.standard_normal(width)
        out.append(SparseVector.from_array(vals, start if lo is None else lo))
    return out


# ---------------------------------------------------------------------------
# output


class Output:
    def __init__(self, args):
        self.args = args

    def document(self, doc, kind: str | None = None) -> str:
        if kind is not None:
            ser.validate(ser.canonical(doc), kind)
        return ser.dumps(doc, self.args.pretty) + "\n"

    def envelope(self, command: str, params: dict, result, kind: str) -> str:
        ser.validate(ser.canonical(result), kind)
        return ser.dumps({"command": command, "params": params, "result": result}, self.args.pretty) + "\n"

    @staticmethod
    def table(params: dict, header: list[str], rows) -> str:
        buf = io.StringIO()
        for k in sorted(params):
            buf.write(f"# {k}={json.dumps(ser.canonical(params[k]), sort_keys=True)}\n")
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow([repr(x) if isinstance(x, float) else x for x in row])
        return buf.getvalue()


def _emit(args, text: str) -> None:
    if args.output:
        Path(args.output).write_text(text)
    else:
        sys.stdout.write(text)


# ---------------------------------------------------------------------------
# commands; each returns (text, exit code)


def cmd_op_validate(args, out):
    op = _spec(args)
    lo, hi = op.domain()
    res = {
        "valid": True,
        "domain": ["-inf" if lo is None else lo, "+inf" if hi is None else hi],
        "norm_bound": op.norm_bound(),
        "canonical": ser.spec_to_dict(op),
    }
    return out.envelope("op validate", {}, res, "validation"), EXIT_OK


def cmd_op_apply(args, out):
    op = _spec(args)
    if args.power < 0:
        raise UsageError("--power must be non-negative")
    v = apply(op, _vector(args.vector, args), args.power)
    if args.format == "csv":
        return out.table({"power": args.power}, ["i", "re", "im"], [(i, z.real, z.imag) for i, z in v.items()]), 0
    return out.document(ser.vector_to_dict(v), "vector"), EXIT_OK


def cmd_spectral_picture(args, out):
    p = spectral.spectral_picture(_spec(args))
    if args.format == "csv":
        return spectral.picture_to_csv(p), EXIT_OK
    return out.envelope("spectral picture", {}, spectral.picture_to_dict(p), "picture"), EXIT_OK


def cmd_classify(args, out):
    v = classifier.classify(spectral.spectral_picture(_spec(args)))
    if args.format == "csv":
        d = v.to_dict()
        rows = [(k, d[k]["value"]) for k in classifier.PREDICATES]
        return out.table({}, ["predicate", "value"], rows), EXIT_OK
    return out.envelope("classify", {}, v.to_dict(), "verdict"), EXIT_OK


def cmd_orbit_norms(args, out):
    op = _spec(args)
    tr = orbits.orbit(op, _vector(args.vector, args), args.horizon)
    params = {"horizon": args.horizon, "overflow_threshold": orbits.OVERFLOW}
    if args.format == "csv":
        return out.table(dict(params, overflow_flag=tr.overflow_flag), ["n", "norm"], tr.to_rows()), EXIT_OK
    res = {"horizon": tr.horizon, "overflow_flag": tr.overflow_flag, "norms": list(tr.norms)}
    return out.envelope("orbit norms", params, res, "orbit"), EXIT_OK


def cmd_orbit_pair(args, out):
    op = _spec(args)
    s = orbits.li_yorke_score(
        op, _vector(args.vector, args), _vector(args.other, args), args.horizon, args.delta_low, args.delta_high
    )
    params = {"horizon": args.horizon, "delta_low": args.delta_low, "delta_high": args.delta_high}
    if args.format == "csv":
        rows = [("inf_estimate", s.inf_estimate), ("sup_estimate", s.sup_estimate), ("verdict", s.verdict)]
        return out.table(params, ["field", "value"], rows), EXIT_OK
    return out.envelope("orbit pair", params, s.to_dict(), "li_yorke"), EXIT_OK


def cmd_orbit_dc_stats(args, out):
    op = _spec(args)
    tau = _floats(args.tau) if args.tau else orbits.default_tau_grid()
    prof = orbits.pair_profile(op, _vector(args.vector, args), _vector(args.other, args), args.horizon, tau)
    params = {"horizon": args.horizon, "tau_grid": [float(t) for t in prof.tau_grid]}
    if args.format == "csv":
        return out.table(params, ["n", "tau", "F"], prof.to_rows()), EXIT_OK
    res = {
        "horizon": prof.horizon,
        "tau_grid": [float(t) for t in prof.tau_grid],
        "lower_envelope": [float(x) for x in prof.lower_envelope],
        "upper_envelope": [float(x) for x in prof.upper_envelope],
        "final_F": [float(x) for x in prof.F_n[-1]],
    }
    return out.envelope("orbit dc-stats", params, res, "profile"), EXIT_OK


def cmd_certify_unimodal(args, out):
    op = _spec(args)
    cands = None
    if args.candidates:
        lo, hi = (int(x) for x in args.candidates.split(":"))
        cands = range(lo, hi + 1)
    horizon = args.horizon if args.horizon is not None else 4 * args.m
    c = orbits.unimodal_certify(op, args.gamma, args.m, horizon, cands)
    params = {"gamma": args.gamma, "m": args.m, "horizon": horizon, "decay_abs": 1e-6, "decay_rel": 1e-3}
    res = dict(c.to_dict(), found=True) if c else {"found": False, "reason": c.reason, "tried": c.tried}
    return out.envelope("certify unimodal", params, res, "certificate"), EXIT_OK


def cmd_dichotomy(args, out):
    op = _spec(args)
    samples = _random_vectors(op, args.samples, args.seed)
    rep = orbits.dichotomy_check(op, samples, args.horizon, args.delta)
    params = {"horizon": args.horizon, "delta": args.delta, "samples": args.samples, "seed": args.seed}
    if args.format == "csv":
        rows = [(k, s.liminf_proxy, s.tail_norm, s.consistent) for k, s in enumerate(rep.samples)]
        return out.table(params, ["sample", "liminf_proxy", "tail_norm", "consistent"], rows), EXIT_OK
    return out.envelope("dichotomy", params, rep.to_dict(), "dichotomy"), EXIT_OK


def cmd_gallery_list(args, out):
    entries = []
    for n in gal.NAMES:
        e = gal.gallery(n)
        entries.append({"name": n, "description": e.description, "provenance": e.provenance})
    if args.format == "csv":
        return out.table({}, ["name", "description"], [(e["name"], e["description"]) for e in entries]), 0
    return out.envelope("gallery list", {}, {"entries": entries}, "gallery_list"), EXIT_OK


def cmd_gallery_build(args, out):
    e = gal.gallery(args.name)
    text = out.document(ser.spec_to_dict(e.spec), "operator")
    bad = e.mismatches()
    for m in bad:
        sys.stderr.write(f"E: gallery mismatch in {e.name}: {m}\n")
    return text, EXIT_VIOLATION if bad else EXIT_OK


def cmd_path(args, out):
    ts = [args.t] if args.t is not None else list(np.linspace(-1.0, 2.0, args.count))
    points = [gal.path_picture(t) for t in ts]
    if args.format == "csv":
        rows = []
        for pt in points:
            for k, c in enumerate(pt.positive_index_regions):
                for j in range(args.resolution + 1):
                    z = c.point_at(2 * np.pi * j / args.resolution)
                    rows.append((pt.t, k, j, float(z.real), float(z.imag)))
        return out.table({"count": len(ts)}, ["t", "disk", "k", "x", "y"], rows), EXIT_OK
    results = []
    for pt in points:
        d = pt.to_dict()
        d["verdict"] = classifier.classify(pt.picture).to_dict()
        ser.validate(ser.canonical(d), "path_point")
        results.append(d)
    res = results[0] if args.t is not None else {"points": results}
    return ser.dumps({"command": "path", "params": {"t": ts}, "result": res}, args.pretty) + "\n", EXIT_OK


def cmd_perturb_identity(args, out):
    dims = _ints(args.dims)
    rep = gal.identity_perturbation(args.epsilon, dims)
    params = {"epsilon": args.epsilon, "dims": dims}
    return out.envelope("perturb identity", params, rep.to_dict(), "perturbation"), EXIT_OK


def cmd_relations(args, out):
    pics, labels = [], []
    for n in gal.NAMES:
        pics.append(gal.gallery(n).picture())
        labels.append(f"gallery:{n}")
    for s in range(args.seed, args.seed + args.count):
        pics.append(classifier.random_picture(s, args.budget))
        labels.append(f"seed:{s}")
    rep = classifier.relation_suite(pics, labels)
    params = {"seed": args.seed, "count": args.count, "budget": args.budget}
    for v in rep.violations:
        sys.stderr.write(f"E: relation violated on {v['picture']}: {v['relation']}\n")
    text = out.envelope("relations", params, rep.to_dict(), "relations")
    return text, EXIT_VIOLATION if rep.violations else EXIT_OK


# ---------------------------------------------------------------------------
# parser


def _common(p, spec=True, vector=False, pair=False):
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("--pretty", action="store_true", help="indented JSON")
    p.add_argument("--output", help="write to this file instead of stdout")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--inline", action="store_true", help="treat --spec/--vector values as JSON text")
    if spec:
        p.add_argument("--spec", help="operator spec JSON file")
        p.add_argument("--gallery", help="use a gallery operator instead of --spec")
    if vector:
        p.add_argument("--vector", help="vector JSON file")
    if pair:
        p.add_argument("--other", help="second vector JSON file")


def build_parser() -> argparse.ArgumentParser:
    root = _Parser(prog="chaoscope", description="Spectral and orbit analysis of weighted shifts.")
    verbs = root.add_subparsers(dest="verb", required=True, parser_class=_Parser)

    op = verbs.add_parser("op").add_subparsers(dest="sub", required=True, parser_class=_Parser)
    p = op.add_parser("validate")
    _common(p)
    p.set_defaults(func=cmd_op_validate)
    p = op.add_parser("apply")
    _common(p, vector=True)
    p.add_argument("--power", type=int, default=1)
    p.set_defaults(func=cmd_op_apply)

    sp = verbs.add_parser("spectral").add_subparsers(dest="sub", required=True, parser_class=_Parser)
    p = sp.add_parser("picture")
    _common(p)
    p.set_defaults(func=cmd_spectral_picture)

    p = verbs.add_parser("classify")
    _common(p)
    p.set_defaults(func=cmd_classify)

    ob = verbs.add_parser("orbit").add_subparsers(dest="sub", required=True, parser_class=_Parser)
    p = ob.add_parser("norms")
    _common(p, vector=True)
    p.add_argument("--horizon", type=int, default=100)
    p.set_defaults(func=cmd_orbit_norms)
    p = ob.add_parser("pair")
    _common(p, vector=True, pair=True)
    p.add_argument("--horizon", type=int, default=1000)
    p.add_argument("--delta-low", type=float, default=orbits.DELTA_LOW)
    p.add_argument("--delta-high", type=float, default=orbits.DELTA_HIGH)
    p.set_defaults(func=cmd_orbit_pair)
    p = ob.add_parser("dc-stats")
    _common(p, vector=True, pair=True)
    p.add_argument("--horizon", type=int, default=1000)
    p.add_argument("--tau", help="comma-separated tau grid (default: 33 points from 1e-6 to 1e2)")
    p.set_defaults(func=cmd_orbit_dc_stats)

    ce = verbs.add_parser("certify").add_subparsers(dest="sub", required=True, parser_class=_Parser)
    p = ce.add_parser("unimodal")
    _common(p)
    p.add_argument("--gamma", type=float, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--horizon", type=int, help="default 4m")
    p.add_argument("--candidates", help="basis index range lo:hi (default 0:4m)")
    p.set_defaults(func=cmd_certify_unimodal)

    p = verbs.add_parser("dichotomy")
    _common(p)
    p.add_argument("--samples", type=int, default=50)
    p.add_argument("--horizon", type=int, default=500)
    p.add_argument("--delta", type=float, default=1e-8)
    p.set_defaults(func=cmd_dichotomy)

    ga = verbs.add_parser("gallery").add_subparsers(dest="sub", required=True, parser_class=_Parser)
    p = ga.add_parser("list")
    _common(p, spec=False)
    p.set_defaults(func=cmd_gallery_list)
    p = ga.add_parser("build")
    _common(p, spec=False)
    p.add_argument("name", choices=gal.NAMES)
    p.set_defaults(func=cmd_gallery_build)

    p = verbs.add_parser("path")
    _common(p, spec=False)
    p.add_argument("--t", type=float, help="single time in [-1, 2]")
    p.add_argument("--count", type=int, default=31, help="uniform grid size when --t is absent")
    p.add_argument("--resolution", type=int, default=128, help="CSV points per disk boundary")
    p.set_defaults(func=cmd_path)

    pe = verbs.add_parser("perturb").add_subparsers(dest="sub", required=True, parser_class=_Parser)
    p = pe.add_parser("identity")
    _common(p, spec=False)
    p.add_argument("--epsilon", type=float, default=0.5)
    p.add_argument("--dims", default="4,16,64,256")
    p.set_defaults(func=cmd_perturb_identity)

    p = verbs.add_parser("relations")
    _common(p, spec=False)
    p.add_argument("--count", type=int, default=500)
    p.add_argument("--budget", type=int, default=4)
    p.set_defaults(func=cmd_relations)
    return root


def run(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        text, code = args.func(args, Output(args))
        _emit(args, text)
        return code
    except UsageError as exc:
        sys.stderr.write(f"E: {exc}\n")
        return EXIT_USAGE
    except (ValueError, KeyError, TypeError, ArithmeticError, OSError) as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else exc
        sys.stderr.write(f"E: {type(exc).__name__}: {msg}\n")
        return EXIT_ERROR


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
