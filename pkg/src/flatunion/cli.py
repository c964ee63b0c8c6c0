"""Command-line front end: records go to stdout, a short summary to stderr."""
from __future__ import annotations

import argparse
import json
import sys
from collections.abc import Sequence
from pathlib import Path

from .constructions import (
    hairbrush_family,
    minimize_union,
    planes_family,
    random_family,
    skew_lines,
)
from .decomposition import (
    captured_fraction,
    extract_quasi_extremizers,
    foliate,
    hairbrush_decompose,
    iterated_popularity,
    plane_select,
    points_family,
    popularity_refine,
)
from .flats import (
    GuardError,
    all_flats,
    count_containing,
    count_disjoint_hyperplanes,
    count_flats,
    gaussian_binomial,
    standard_flat,
    subflats,
)
from .gf_linear import as_field
from .harness import SUITES, VERIFY_SUITES, run_sweep, to_csv, to_jsonl, verify_suite
from .incidence import (
    FlatFamily,
    HypothesisError,
    check_dplane_wolff,
    check_wolff,
    dump_family,
    is_direction_separated,
    load_family,
    union_points,
)


def _parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    g = common.add_argument_group("parameters")
    g.add_argument("--p", type=int, default=3, help="field size (prime)")
    g.add_argument("--n", type=int, default=3, help="ambient dimension")
    g.add_argument("--k", type=int, default=1, help="flat dimension")
    g.add_argument("--kprime", type=int, default=0)
    g.add_argument("--d", type=int, default=2)
    g.add_argument("--m", type=int, default=None, help="dimension of the fixed flat")
    g.add_argument("--qint", type=int, default=0, help="intersection dimension for foliation")
    g.add_argument("--beta", type=float, default=None)
    g.add_argument("--gamma", type=float, default=1.0)
    g.add_argument("--lambda", dest="lam", type=float, default=1.0)
    g.add_argument("--C", type=float, default=1.0)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--N", type=int, default=1, help="number of planes")
    g.add_argument("--size", type=int, default=None, help="family size")
    g.add_argument("--steps", type=int, default=1000)
    g.add_argument("--density", type=float, default=1.0)
    g.add_argument("--family", type=Path, help="family file (JSON)")
    g.add_argument("--out", type=Path, help="write output here instead of stdout")
    g.add_argument("--format", choices=["json", "csv"], default="json")
    g.add_argument("--exhaustive", action="store_true",
                   help="use full enumeration instead of candidate generation")

    ap = argparse.ArgumentParser(prog="flatunion", description=__doc__)
    sub = ap.add_subparsers(dest="command", required=True, metavar="command")

    def add(name: str, help: str) -> argparse.ArgumentParser:
        return sub.add_parser(name, parents=[common], help=help)

    c = add("count", "closed-form counts")
    c.add_argument("what", nargs="?", default="flats",
                   choices=["flats", "subspaces", "containing", "disjoint"])
    c.add_argument("--l", type=int, default=0, help="dimension of the fixed flat")
    add("enumerate", "all k-flats of F_p^n as a family file")
    a = add("axioms", "Wolff-type axiom checks on a line family")
    a.add_argument("which", choices=["wolff", "dplane", "separated"])
    add("decompose", "rich-plane selection")
    add("foliate", "foliate F^n around a standard m-flat and verify routing")
    add("refine", "popularity refinement")
    add("hairbrush", "hairbrush decomposition trace")
    add("extract", "quasi-extremizer extraction")
    s = add("construct", "build a family file")
    s.add_argument("shape", choices=["planes", "pencil", "hairbrush", "random", "skew"])
    add("search", "hill-climb for a small union")
    w = add("sweep", "run a parameter sweep")
    w.add_argument("--config", type=Path, help="sweep config (JSON)")
    w.add_argument("--suite", choices=sorted(SUITES))
    v = add("verify", "run a named invariant suite")
    v.add_argument("suite", choices=sorted(VERIFY_SUITES))
    return ap


def _family(args) -> FlatFamily:
    if args.family is None:
        raise ValueError("--family is required for this command")
    if str(args.family) == "-":
        return FlatFamily.from_dict(json.load(sys.stdin))
    return load_family(args.family)


def _lines(args) -> FlatFamily:
    fam = _family(args)
    if fam.k != 1:
        raise ValueError(f"this command takes a line family, got k={fam.k}")
    return fam


def _method(args, default: str) -> str:
    return "exhaustive" if args.exhaustive else default


def cmd_count(args) -> tuple[list[dict], bool, str]:
    p, n, k = as_field(args.p).p, args.n, args.k
    if args.what == "flats":
        value = count_flats(n, k, p)
    elif args.what == "subspaces":
        value = gaussian_binomial(n, k, p)
    elif args.what == "containing":
        value = count_containing(args.l, k, n, p)
    else:
        value = count_disjoint_hyperplanes(args.l, n, p)
    rec = {"kind": "count", "what": args.what, "p": p, "n": n, "k": k, "value": value}
    if args.what in ("containing", "disjoint"):
        rec["l"] = args.l
    return [rec], True, str(value)


def cmd_axioms(args):
    fam = _lines(args)
    if args.which == "separated":
        ok = is_direction_separated(fam)
        return [{"kind": "direction_separated", "pass": ok}], True, f"direction separated: {ok}"
    if args.which == "wolff":
        rep = check_wolff(fam, _method(args, "joins"))
    else:
        rep = check_dplane_wolff(fam, args.d, _method(args, "superflats"))
    verdict = "pass" if rep.passed else "fail"
    return [rep.to_record()], True, f"{rep.kind}: {verdict} ({rep.max_count} vs {rep.threshold})"


def cmd_decompose(args):
    dec = plane_select(_family(args), args.d, _method(args, "superflats"))
    bad = dec.violations(_method(args, "superflats"))
    rec = dec.to_record()
    rec["violations"] = bad
    return [rec], not bad, f"m={dec.m}, N={dec.N}, |Lm|={len(dec.Lm)}, violations={len(bad)}"


def cmd_foliate(args):
    m = args.m if args.m is not None else 1
    S = standard_flat(args.n, m, args.p)
    fol = foliate(S, args.qint, args.k)
    chk = fol.verify_exhaustive()
    rec = {"kind": "foliation", "p": args.p, "n": args.n, "m": m, "qint": args.qint,
           "k": args.k, "leaves": len(fol.leaves), "leaf_dim": fol.leaf_dim,
           "pairs": chk.pairs, "violations": chk.violations, "pass": chk.ok}
    return [rec], chk.ok, f"{len(fol.leaves)} leaves, {chk.pairs} pairs, {chk.violations} violations"


def _refine_points(fam: FlatFamily) -> FlatFamily:
    if fam.k == 1:
        return points_family(fam)
    return FlatFamily(fam.p, fam.n, fam.k - 1,
                      tuple({X for L in fam for X in subflats(L, fam.k - 1)}))


def cmd_refine(args):
    fam = _family(args)
    P = _refine_points(fam)
    if fam.k == 1:
        beta = 1.0 if args.beta is None else args.beta
        t = popularity_refine(fam, P, args.C, args.lam, args.d, beta)
    else:
        t = iterated_popularity(fam, P, args.C, args.lam, args.d)
    bad = t.violations()
    return t.to_records(), not bad, \
        f"{t.mode}: |P#|={len(t.P_sharp)}, |L#|={len(t.L_sharp)}, branch={t.branch}"


def cmd_hairbrush(args):
    t = hairbrush_decompose(_lines(args), args.d, args.C, args.lam, args.beta,
                            method=_method(args, "superflats"))
    bad = t.violations()
    return t.to_records(), not bad, f"case {t.case}, stem {t.stem}, failed rows {bad}"


def cmd_extract(args):
    fam = _lines(args)
    found = extract_quasi_extremizers(fam, args.d, _method(args, "superflats"))
    recs = [{"kind": "quasi_extremizer", "plane": q.plane.to_dict(), "lines": len(q.lines),
             "density": float(q.density)} for q in found]
    frac = captured_fraction(fam, found)
    recs.append({"kind": "extraction", "N": len(found), "captured": float(frac),
                 "captured_exact": str(frac)})
    return recs, True, f"{len(found)} planes capture {frac} of the union"


def _family_out(fam: FlatFamily) -> tuple[list[dict], bool, str]:
    return [fam.to_dict()], True, f"{len(fam)} flats, union {union_points(fam)} points"


def cmd_enumerate(args):
    return _family_out(FlatFamily(args.p, args.n, args.k, all_flats(args.p, args.n, args.k)))


def cmd_construct(args):
    p, n, k = args.p, args.n, args.k
    if args.shape in ("planes", "pencil"):
        mode = "parallel" if args.shape == "planes" else "pencil"
        fam = planes_family(args.d, args.N, n, p, k, mode)
    elif args.shape == "hairbrush":
        fam = hairbrush_family(standard_flat(n, 1, p), args.density, args.seed)
    elif args.shape == "random":
        fam = random_family(n, k, _size(args), p, args.seed)
    else:
        fam = skew_lines(n, _size(args), p, args.seed)
    return _family_out(fam)


def _size(args) -> int:
    if args.size is None:
        raise ValueError("--size is required")
    return args.size


def cmd_search(args):
    start = _family(args) if args.family else None
    size = len(start) if start is not None else _size(args)
    p, n, k = (start.p, start.n, start.k) if start is not None else (args.p, args.n, args.k)
    fam, union = minimize_union(n, k, size, p, args.seed, args.steps, start)
    rec = {"kind": "search", "p": p, "n": n, "k": k, "size": size, "seed": args.seed,
           "steps": args.steps, "union": union, "family": fam.to_dict()}
    return [rec], True, f"union {union} after {args.steps} steps"


def cmd_sweep(args):
    if (args.config is None) == (args.suite is None):
        raise ValueError("give exactly one of --config and --suite")
    config = SUITES[args.suite] if args.suite else json.loads(args.config.read_text("utf-8"))
    res = run_sweep(config)
    low = res.min_ratio()
    msg = f"{len(res.records)} records, {len(res.skipped)} skipped, min ratio {low}"
    return res.rows(), True, msg


def cmd_verify(args):
    checks = verify_suite(args.suite)
    ok = all(c.passed for c in checks)
    failed = [c.name for c in checks if not c.passed]
    msg = f"{args.suite}: {'pass' if ok else 'FAIL ' + '; '.join(failed)}"
    return [c.to_record() for c in checks], ok, msg


COMMANDS = {
    "count": cmd_count, "enumerate": cmd_enumerate, "axioms": cmd_axioms,
    "decompose": cmd_decompose, "foliate": cmd_foliate, "refine": cmd_refine,
    "hairbrush": cmd_hairbrush, "extract": cmd_extract, "construct": cmd_construct,
    "search": cmd_search, "sweep": cmd_sweep, "verify": cmd_verify,
}


def _emit(records: list[dict], args) -> None:
    if args.command in ("construct", "enumerate"):
        text = dump_family(FlatFamily.from_dict(records[0])) + "\n"
    elif args.format == "csv":
        text = to_csv(records)
    else:
        text = to_jsonl(records)
    if args.out:
        args.out.write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def main(argv: Sequence[str] | None = None) -> int:
    ap = _parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        records, ok, msg = COMMANDS[args.command](args)
    except HypothesisError as exc:
        print(f"hypothesis violated: {exc}", file=sys.stderr)
        return 1
    except (ValueError, GuardError, OSError, json.JSONDecodeError, KeyError) as exc:
        print(f"{ap.prog} {args.command}: error: {exc}", file=sys.stderr)
        return 2
    _emit(records, args)
    print(msg, file=sys.stderr)
    if not ok:
        print(f"invariant failed: {args.command}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
