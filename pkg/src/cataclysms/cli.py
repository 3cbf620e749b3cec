"""Command-line front end.

Every command writes JSON (sorted keys) to ``--out`` or stdout.  Exit
status: 0 on success, 1 when a check or assertion fails, 2 for I/O or
schema errors.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from pathlib import Path

import numpy as np

from .anosov import (
    BoundaryOracle,
    Representation,
    divergence_report,
    exterior_square,
    from_fuchsian,
    hitchin,
    horocyclic,
    representation_from_json,
)
from .cataclysm import CataclysmError, busemann_recover, cataclysm
from .cycles import CycleError, TwistedCycle, dim_maximal, dim_multicurve, dim_twisted, evaluate_arc, random_cycle
from .lamination import (
    STANDARD_MULTICURVES,
    Curve,
    LaminationError,
    MultiCurve,
    chain_from_json,
    multicurve_from_json,
)
from .hypgeom import PlanePoint
from .liealg import CartanVector, LieAlgebraError, RootSubset
from .suites import DEFAULT_TOLERANCES, SUITES, run_suite
from .surface import Word, fuchsian_octagon

EXIT_OK, EXIT_FAIL, EXIT_IO = 0, 1, 2


class SchemaError(Exception):
    """Input file missing, unreadable or malformed."""


class CheckFailed(Exception):
    """A verification or certificate failed."""


# ------------------------------------------------------------------ helpers


def _plain(obj):
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _plain(obj.tolist())
    if isinstance(obj, (np.floating,)):
        return float(obj)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, np.bool_):
        return bool(obj)
    return obj


def dumps(obj) -> str:
    return json.dumps(_plain(obj), sort_keys=True, indent=2) + "\n"


def _emit(obj, out: str | None) -> None:
    text = dumps(obj)
    if out:
        try:
            Path(out).write_text(text)
        except OSError as exc:
            raise SchemaError(f"cannot write {out}: {exc}") from exc
    else:
        sys.stdout.write(text)


def _load(path: str) -> dict:
    try:
        return json.loads(Path(path).read_text())
    except OSError as exc:
        raise SchemaError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise SchemaError(f"{path} is not valid JSON: {exc}") from exc


def _schema(fn, what: str, *args):
    try:
        return fn(*args)
    except (KeyError, TypeError, IndexError, ValueError) as exc:
        raise SchemaError(f"invalid {what}: {exc!r}") from exc


def parse_theta(text: str, n: int) -> RootSubset:
    if text in ("all", "full", "delta"):
        return RootSubset.full(n)
    try:
        return RootSubset(n, [int(x) for x in text.split(",") if x.strip()])
    except ValueError as exc:
        raise SchemaError(f"invalid theta {text!r}: {exc}") from exc


def _parse_tolerances(items) -> dict:
    tols = dict(DEFAULT_TOLERANCES)
    for item in items or []:
        key, _, val = item.partition("=")
        if key not in tols:
            raise SchemaError(f"unknown tolerance {key!r}; choose from {sorted(tols)}")
        try:
            tols[key] = float(val)
        except ValueError as exc:
            raise SchemaError(f"invalid tolerance value {val!r}") from exc
    return tols


def load_rep(path: str) -> Representation:
    return _schema(representation_from_json, "representation", _load(path))


def load_lam(path: str, depth: int | None = None) -> MultiCurve:
    data = _load(path)
    genus = int(data.get("genus", 2)) if isinstance(data, dict) else 2
    curves = data["curves"] if isinstance(data, dict) else data
    kwargs = {} if depth is None else {"depth": depth}
    return _schema(lambda: multicurve_from_json(fuchsian_octagon(genus), curves, **kwargs), "lamination")


def load_cycle(path: str) -> TwistedCycle:
    return _schema(TwistedCycle.from_json, "cycle", _load(path))


def lam_to_json(lam: MultiCurve) -> dict:
    return {"kind": "lamination", "genus": lam.rho0.genus, "curves": lam.to_json(),
            "base_point": lam.base_point.to_json()}


# ----------------------------------------------------------------- commands


def cmd_rep(args) -> int:
    rho0 = fuchsian_octagon(args.genus)
    if args.kind == "fuchsian":
        rep = from_fuchsian(rho0)
    elif args.kind == "hitchin":
        rep = hitchin(rho0, args.n)
    elif args.kind == "horocyclic":
        rep = horocyclic(rho0, args.n, args.k)
    else:
        if args.n < 3:
            raise SchemaError("exterior square needs --n >= 3")
        rep = exterior_square(hitchin(rho0, args.n))
    out = rep.to_json()
    out["diagnostics"] = {"relator_residual": rep.relator_residual, "relator_tol": rep.relator_tol}
    _emit(out, args.out)
    return EXIT_OK


def cmd_lam(args) -> int:
    rho0 = fuchsian_octagon(args.genus)
    if args.curves:
        orient = args.orientations or [1] * len(args.curves)
        if len(orient) != len(args.curves):
            raise SchemaError("need one orientation per curve")
        curves = []
        for i, (w, o) in enumerate(zip(args.curves, orient)):
            cid, _, word = w.rpartition("=")
            curves.append(Curve(cid or f"c{i + 1}", _schema(Word.parse, "word", word), o))
        try:
            lam = MultiCurve(rho0, curves, depth=args.depth)
        except LaminationError as exc:
            raise CheckFailed(str(exc)) from exc
    else:
        curves = [Curve(cid, Word.parse(w), 1) for cid, w in STANDARD_MULTICURVES[args.preset]]
        lam = MultiCurve(rho0, curves, depth=args.depth)
    out = lam_to_json(lam)
    out["diagnostics"] = {"disjoint": True, "depth": args.depth, "components": len(lam)}
    _emit(out, args.out)
    return EXIT_OK


def cmd_cycle(args) -> int:
    lam = load_lam(args.lam)
    if args.rep:
        theta = load_rep(args.rep).theta
        if args.theta:
            theta = parse_theta(args.theta, theta.n)
    elif args.n:
        theta = parse_theta(args.theta or "all", args.n)
    else:
        raise SchemaError("give --rep or --n")
    ids = lam.curve_ids()
    try:
        if args.random:
            eps = random_cycle(np.random.default_rng(args.seed), ids, theta, args.scale)
        else:
            weights = {cid: CartanVector.zero(theta.n) for cid in ids}
            for item in args.weight or []:
                cid, _, vals = item.partition("=")
                if cid not in weights:
                    raise SchemaError(f"unknown curve id {cid!r}; have {ids}")
                weights[cid] = CartanVector([float(x) for x in vals.split(",")])
            eps = TwistedCycle(weights, theta)
    except ValueError as exc:
        raise SchemaError(str(exc)) from exc
    out = {"kind": "cycle", **eps.to_json()}
    _emit(out, args.out)
    return EXIT_OK


def _base_point(text: str, lam: MultiCurve):
    if text == "auto":
        return lam.base_point
    try:
        x, y = (float(v) for v in text.split(","))
        return PlanePoint(x, y)
    except ValueError as exc:
        raise SchemaError(f"invalid base point {text!r}") from exc


def cmd_deform(args) -> int:
    rep = load_rep(args.rep)
    lam = load_lam(args.lam)
    eps = load_cycle(args.cycle)
    if eps.theta != rep.theta:
        raise SchemaError(f"cycle theta {eps.theta.dims} differs from representation theta {rep.theta.dims}")
    p0 = _base_point(args.base_region, lam)
    try:
        res = cataclysm(rep, lam, eps, base_point=p0, relator_tol=args.relator_tol)
    except CataclysmError as exc:
        raise CheckFailed(str(exc)) from exc
    _emit(res.to_json(), args.out)
    if args.family_out:
        gens = rep.presentation.generator_names
        family = {
            "kind": "shearing_family",
            "representation": rep.to_json(),
            "cycle": eps.to_json(),
            "members": {g: {"chain": c.to_json(), "shearing": s.to_json()}
                        for g, c, s in zip(gens, res.chains, res.shearing)},
        }
        _emit(family, args.family_out)
    return EXIT_OK


def cmd_verify(args) -> int:
    tols = _parse_tolerances(args.tol)
    names = sorted(SUITES) if args.suite == "all" else [args.suite]
    reports = [run_suite(nm, seed=args.seed, tolerances=tols).to_json() for nm in names]
    passed = all(r["passed"] for r in reports)
    if args.format == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["suite", "check", "value", "tol", "mode", "count", "passed"])
        for r in reports:
            for c in r["checks"]:
                w.writerow([r["suite"], c["name"], c["value"], c["tol"], c["mode"], c["count"], c["passed"]])
        text = buf.getvalue()
        if args.out:
            Path(args.out).write_text(text)
        else:
            sys.stdout.write(text)
    else:
        out = reports[0] if len(reports) == 1 else {"suites": reports, "passed": passed}
        _emit(out, args.out)
    if not passed:
        for r in reports:
            bad = next((c for c in r["checks"] if not c["passed"]), None)
            if bad:
                sys.stderr.write(f"FAIL {r['suite']}:{bad['name']} value={bad['value']} tol={bad['tol']}\n")
                break
        return EXIT_FAIL
    return EXIT_OK


def cmd_recover(args) -> int:
    family = _load(args.family)
    rep = _schema(representation_from_json, "representation", family.get("representation", {}))
    if args.member:
        member = _schema(lambda: family["members"][args.member], "family member")
    else:
        member = family
    chain_data = _load(args.chain) if args.chain else member.get("chain")
    if chain_data is None:
        raise SchemaError("no chain: pass --chain or use a family member that records one")
    chain = _schema(chain_from_json, "chain", chain_data)
    partials = _schema(lambda: [np.asarray(p, dtype=float) for p in member["shearing"]["partials"]],
                       "shearing family")
    theta = _schema(lambda: RootSubset(rep.n, family["cycle"]["theta"]), "cycle theta") \
        if "cycle" in family else rep.theta
    try:
        delta = busemann_recover(chain, partials, BoundaryOracle(rep, theta), theta)
    except CataclysmError as exc:
        raise SchemaError(str(exc)) from exc
    out = {"kind": "recovered", "delta": list(delta.entries), "theta": theta.dims, "diagnostics": {}}
    status = EXIT_OK
    if "cycle" in family:
        eps = _schema(TwistedCycle.from_json, "cycle", family["cycle"])
        expected = evaluate_arc(eps, chain)
        err = float(np.abs(delta.array() - expected.array()).max())
        out["diagnostics"] = {"expected": list(expected.entries), "max_error": err, "tol": args.tol}
        if err > args.tol:
            sys.stderr.write(f"FAIL recover max_error={err} tol={args.tol}\n")
            status = EXIT_FAIL
    _emit(out, args.out)
    return status


def cmd_dims(args) -> int:
    theta = parse_theta(args.theta, args.n)
    try:
        if args.maximal:
            val = dim_maximal(args.genus, theta)
        elif args.multicurve is not None:
            val = dim_multicurve(args.multicurve, theta)
        else:
            val = dim_twisted(args.chi, args.components, args.orientable, theta)
    except (CycleError, LieAlgebraError) as exc:
        raise SchemaError(str(exc)) from exc
    if args.json:
        _emit({"dimension": val, "genus": args.genus, "n": args.n, "theta": theta.dims}, args.out)
    else:
        sys.stdout.write(f"{val}\n")
    return EXIT_OK


def cmd_divergence(args) -> int:
    if args.rep:
        rep = load_rep(args.rep)
    else:
        rho0 = fuchsian_octagon()
        rep = from_fuchsian(rho0) if args.kind == "fuchsian" else hitchin(rho0, args.n)
    theta = parse_theta(args.theta, rep.n) if args.theta else None
    report = divergence_report(rep, theta, max_length=args.max_length, seed=args.seed)
    if args.format == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["length", "min_gap", "words", "sampled"])
        for row in zip(report["lengths"], report["minima"], report["word_counts"], report["sampled"]):
            w.writerow(row)
        sys.stdout.write(buf.getvalue())
    else:
        _emit({"kind": "divergence", **report, "diagnostics": {"seed": args.seed}}, args.out)
    return EXIT_OK if report["strictly_increasing"] or not args.strict else EXIT_FAIL


# ------------------------------------------------------------------- parser


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="cataclysm", description="Cataclysm deformations of surface group representations.")
    sub = p.add_subparsers(dest="command", required=True)

    r = sub.add_parser("rep", help="build a representation")
    r.add_argument("--kind", choices=["fuchsian", "hitchin", "horocyclic", "exterior"], default="fuchsian")
    r.add_argument("--n", type=int, default=3)
    r.add_argument("--k", type=int, default=1)
    r.add_argument("--genus", type=int, default=2)
    r.add_argument("--out")
    r.set_defaults(func=cmd_rep)

    lm = sub.add_parser("lam", help="build a multicurve lamination")
    lm.add_argument("--preset", choices=sorted(STANDARD_MULTICURVES), default="pants")
    lm.add_argument("--curves", nargs="*", help="words, optionally as id=word")
    lm.add_argument("--orientations", nargs="*", type=int)
    lm.add_argument("--genus", type=int, default=2)
    lm.add_argument("--depth", type=int, default=8)
    lm.add_argument("--out")
    lm.set_defaults(func=cmd_lam)

    c = sub.add_parser("cycle", help="build a twisted cycle")
    c.add_argument("--lam", required=True)
    c.add_argument("--rep")
    c.add_argument("--n", type=int)
    c.add_argument("--theta")
    c.add_argument("--weight", action="append", help="id=h1,...,hn")
    c.add_argument("--random", action="store_true")
    c.add_argument("--scale", type=float, default=0.1)
    c.add_argument("--seed", type=int, default=0)
    c.add_argument("--out")
    c.set_defaults(func=cmd_cycle)

    d = sub.add_parser("deform", help="apply a cataclysm")
    d.add_argument("--rep", required=True)
    d.add_argument("--lam", required=True)
    d.add_argument("--cycle", required=True)
    d.add_argument("--base-region", default="auto", help="'auto' or x,y")
    d.add_argument("--relator-tol", type=float, default=1e-7)
    d.add_argument("--family-out", help="also write the shearing maps per generator")
    d.add_argument("--out")
    d.set_defaults(func=cmd_deform)

    v = sub.add_parser("verify", help="run a verification suite")
    v.add_argument("--suite", choices=sorted(SUITES) + ["all"], required=True)
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--tol", action="append", help="override a tolerance, key=value")
    v.add_argument("--format", choices=["json", "csv"], default="json")
    v.add_argument("--out")
    v.set_defaults(func=cmd_verify)

    rc = sub.add_parser("recover", help="recover eps(P, Q) from a shearing family")
    rc.add_argument("--family", required=True)
    rc.add_argument("--member", help="generator name inside a deform --family-out file")
    rc.add_argument("--chain")
    rc.add_argument("--tol", type=float, default=1e-8)
    rc.add_argument("--out")
    rc.set_defaults(func=cmd_recover)

    dm = sub.add_parser("dims", help="dimension of the space of twisted cycles")
    dm.add_argument("--genus", type=int, default=2)
    dm.add_argument("--n", type=int, default=3)
    dm.add_argument("--theta", default="all")
    g = dm.add_mutually_exclusive_group(required=True)
    g.add_argument("--maximal", action="store_true")
    g.add_argument("--multicurve", type=int, metavar="M")
    g.add_argument("--chi", type=int)
    dm.add_argument("--components", type=int, default=1)
    dm.add_argument("--orientable", type=int, default=0)
    dm.add_argument("--json", action="store_true")
    dm.add_argument("--out")
    dm.set_defaults(func=cmd_dims)

    dv = sub.add_parser("divergence", help="divergence diagnostic")
    dv.add_argument("--rep")
    dv.add_argument("--kind", choices=["fuchsian", "hitchin"], default="fuchsian")
    dv.add_argument("--n", type=int, default=3)
    dv.add_argument("--theta")
    dv.add_argument("--max-length", type=int, default=6)
    dv.add_argument("--seed", type=int, default=0)
    dv.add_argument("--strict", action="store_true", help="exit 1 unless minima increase strictly")
    dv.add_argument("--format", choices=["json", "csv"], default="json")
    dv.add_argument("--out")
    dv.set_defaults(func=cmd_divergence)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except SchemaError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_IO
    except CheckFailed as exc:
        sys.stderr.write(f"FAIL {exc}\n")
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
