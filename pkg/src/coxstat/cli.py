"""Command-line front end: ``coxstat dist|image|verify|repro``."""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from typing import Optional

from . import analysis as AN
from . import repro
from .analysis import format_rational
from .bigcox import CapExceeded, CoxeterMatrix, enumerate_group, preset
from .enumeration import group_order
from .groups import GroupDescriptor, format_generator_set, parse_generator_set
from .posets import coxeter_good_decomposition, in_same_class, is_induced, load_function, load_poset
from .statistics import base_statistic, get_statistic

PRESETS = ("H3", "F4", "E6", "E7", "E8")


class UsageError(Exception):
    pass


def resolve_group(text: str, cap: Optional[int] = None):
    """``A:n``/``B:n``/``D:n``, a preset (``I2:m``, ``H3``, ``F4``, ``E6``..``E8``) or a JSON matrix."""
    text = text.strip()
    if text.endswith(".json") or os.path.sep in text:
        matrix = CoxeterMatrix.load(text)
    elif text[:2] in ("A:", "B:", "D:"):
        desc = GroupDescriptor.parse(text)
        if cap is not None and group_order(desc) > cap:
            raise CapExceeded(f"{desc} has {group_order(desc)} elements, above --cap {cap}")
        return desc
    elif text.startswith("I2:") or text in PRESETS:
        matrix = preset(text)
    else:
        raise UsageError(f"unknown group {text!r}")
    return enumerate_group(matrix) if cap is None else enumerate_group(matrix, cap)


def _split(text: Optional[str], count: int, what: str) -> list[str]:
    if text is None:
        raise UsageError(f"--{what} is required")
    parts = [p.strip() for p in text.split(",")] if "{" not in text else _split_braced(text)
    if len(parts) != count:
        raise UsageError(f"--{what} expects {count} comma-separated names")
    return parts


def _split_braced(text: str) -> list[str]:
    # commas inside {..} belong to a generator set
    out, depth, cur = [], 0, ""
    for ch in text:
        depth += ch == "{"
        depth -= ch == "}"
        if ch == "," and depth == 0:
            out.append(cur.strip())
            cur = ""
        else:
            cur += ch
    out.append(cur.strip())
    return out


def parse_ranks(text: str) -> list[int]:
    if ".." in text:
        lo, hi = text.split("..")
        return list(range(int(lo), int(hi) + 1))
    return [int(t) for t in text.split(",")]


def _stats_on(args, count: int):
    """Statistics named by ``--stat/--stats`` on the group, or vectors on ``--poset``."""
    if args.poset:
        poset = load_poset(args.poset)
        files = _split(args.values, count, "values")
        return poset, [poset.rank_function() if p == "rank"
                       else load_function(p, poset, os.path.basename(p)) for p in files]
    group = resolve_group(_need(args.group, "group"), args.cap)
    names = _split(args.stats, count, "stats")
    return group, [get_statistic(n, group) for n in names]


def _need(value, what):
    if value is None:
        raise UsageError(f"--{what} is required")
    return value


def _emit(args, text: str):
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _universe_name(u) -> str:
    if isinstance(u, GroupDescriptor):
        return str(u)
    return getattr(u, "name", None) or "poset"


# ----------------------------------------------------------------- dist

def cmd_dist(args) -> int:
    if args.poset:
        universe = load_poset(args.poset)
        f = load_function(_need(args.values, "values"), universe, "f")
    else:
        universe = resolve_group(_need(args.group, "group"), args.cap)
        f = get_statistic(_need(args.stat, "stat"), universe)
    dist = AN.distribution(f, args.threads)
    ok = None
    if args.check_against:
        # on a poset the only reference statistic is the rank
        g = universe.rank_function() if args.poset else get_statistic(args.check_against, universe)
        ok = dist == AN.distribution(g, args.threads)
    if args.format == "json":
        payload = {"group": _universe_name(universe), "stat": f.name, "distribution": dist.to_json()}
        if ok is not None:
            payload.update(check_against=args.check_against, equidistributed=ok)
        text = json.dumps(payload, indent=2) + "\n"
    elif args.format == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["value", "count"])
        for e in sorted(dist.coeffs):
            w.writerow([e, dist.coeffs[e]])
        text = buf.getvalue()
        if ok is not None:
            text += f"# equidistributed with {args.check_against}: {'OK' if ok else 'MISMATCH'}\n"
    else:
        text = dist.render() + "\n"
        if ok is not None:
            text += ("OK" if ok else f"MISMATCH: {args.check_against} has distribution "
                     f"{AN.distribution(g, args.threads).render()}") + "\n"
    _emit(args, text)
    return 0 if ok in (None, True) else 1


# ---------------------------------------------------------------- image

def cmd_image(args) -> int:
    family = _need(args.group, "group").strip().upper()
    if family not in ("A", "B", "D"):
        raise UsageError("image needs a classical family: A, B or D")
    stats = tuple(_split(args.stats or "len,maj", 2, "stats"))
    ranks = parse_ranks(_need(args.ranks, "ranks"))
    if args.cap is not None:
        for r in ranks:
            order = group_order(repro.family_group(family, r))
            if order > args.cap:
                raise CapExceeded(f"rank {r} has {order} elements, above --cap {args.cap}; "
                                  "raise --cap (and --threads for speed)")
    rows = [repro.image_row(family, r, stats, args.op, args.threads) for r in ranks]
    kname = "k_plus" if args.op == "sum" else "k_minus"
    if args.format == "json":
        text = json.dumps({"family": family, "op": args.op, "stats": list(stats), "rows": rows},
                          indent=2) + "\n"
    elif args.format == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["rank", "group", "image", kname])
        for row in rows:
            w.writerow([row["rank"], row["group"], row["image"], row[kname]])
        text = buf.getvalue()
    else:
        sign = "+" if args.op == "sum" else "-"
        lines = [f"|Im({stats[0]}{sign}{stats[1]})| on family {family}"]
        lines += [f"  rank {row['rank']:>2} {row['group']:<6} image {row['image']:>5}  "
                  f"{kname} {row[kname]}" for row in rows]
        lines.append(",".join(str(row["image"]) for row in rows))
        text = "\n".join(lines) + "\n"
    _emit(args, text)
    return 0


# --------------------------------------------------------------- verify

def _check_ratio(args):
    universe, (f, g) = _stats_on(args, 2)
    left, right, equal = AN.ratio_sum_check(f, g, args.threads)
    return equal, {"group": _universe_name(universe), "stats": [f.name, g.name],
                   "left": format_rational(left), "right": format_rational(right),
                   "verdict": "EQUAL" if equal else "UNEQUAL"}


def _check_symmetric(args):
    universe, (f, g) = _stats_on(args, 2)
    ok = AN.is_symmetric_pair(f, g, args.threads)
    return ok, {"group": _universe_name(universe), "stats": [f.name, g.name], "symmetric": ok}


def _check_class(args):
    universe, (f, g) = _stats_on(args, 2)
    ok = in_same_class(f, g)
    return ok, {"group": _universe_name(universe), "stats": [f.name, g.name], "same_class": ok}


def _check_involution(args):
    universe, (f, g) = _stats_on(args, 2)
    try:
        iota = AN.build_involution(f, g)
    except AN.NotSymmetric as exc:
        return False, {"group": _universe_name(universe), "error": str(exc)}
    return True, {"group": _universe_name(universe), "stats": [f.name, g.name],
                  "size": len(iota), "fixed_points": len(iota.fixed_points())}


def _check_induced(args):
    group = resolve_group(_need(args.group, "group"), args.cap)
    J = _need(args.J, "J")
    d = coxeter_good_decomposition(group, J)
    fname, gname = _split(args.stats, 2, "stats")
    f = get_statistic(fname, group)
    if isinstance(group, GroupDescriptor):
        from .groups import parabolic_model
        model = parabolic_model(group, parse_generator_set(J, group))
        if model is None:
            raise UsageError(f"W_J for J={J} has no classical model on {group}")
        g = base_statistic(gname, model)
        where = str(model)
    else:
        from .statistics import Statistic
        sub = get_statistic(f"induced:{gname}:{J}", group) if gname != "len" else None
        if sub is None:
            g = Statistic("len", group.lengths.__getitem__, d.factor_b)
        else:
            g = Statistic(gname, lambda i: sub(d.factor_b.labels[i]), d.factor_b)
        where = f"W_J of {group.name}"
    ok = is_induced(f, g, d)
    return ok, {"group": _universe_name(group), "J": J, "f": f.name, "g": f"{gname} on {where}",
                "induced": ok}


def _check_lift(args):
    group = resolve_group(_need(args.group, "group"), args.cap)
    if not isinstance(group, GroupDescriptor) or group.family not in ("B", "D"):
        raise UsageError("lift runs on B:n or D:n")
    ok = repro._lift_holds(group.family, group.n)
    fname = "nmaj" if group.family == "B" else "dmaj"
    return ok, {"group": str(group), "claim": f"{fname} = len o lifted(maj/len involution)",
                "holds": ok}


def _check_witness(args):
    n = int(_need(args.n, "n"))
    fam = AN.sum_image_witnesses(n)
    return fam.verified, {"n": n, "claims": fam.claims}


def _class_label(key) -> str:
    if isinstance(key, tuple):
        I, K = key
        return f"I={format_generator_set(I)} K={{{','.join(map(str, sorted(K)))}}}"
    return f"I={format_generator_set(key)}"


def _class_check(desc, mode, stat):
    s = base_statistic(stat, desc)
    from .groups import length
    bad = []
    for key, ws in AN.descent_class_partition(desc, mode).items():
        if sorted(length(w) for w in ws) != sorted(s(w) for w in ws):
            bad.append(_class_label(key))
    return not bad, {"group": str(desc), "statistic": stat, "failing_classes": bad}


def _check_foata(args):
    desc = resolve_group(_need(args.group, "group"), args.cap)
    return _class_check(desc, "A", "majstar")


def _check_descent_b(args):
    desc = resolve_group(_need(args.group, "group"), args.cap)
    return _class_check(desc, "B", "nmajstar")


def _check_reciprocal(args):
    group = resolve_group(_need(args.group, "group"), args.cap)
    if isinstance(group, GroupDescriptor):
        p = AN.distribution(base_statistic("len", group), args.threads)
    else:
        p = group.poincare()
    ok = AN.is_reciprocal(p)
    return ok, {"group": _universe_name(group), "poincare": p.render(), "reciprocal": ok}


def _check_erratum(args):
    res = repro.check_erratum_probe(args.threads)
    return res["passed"], res["details"]


CHECKS = {
    "ratio": _check_ratio, "symmetric": _check_symmetric, "class": _check_class,
    "involution": _check_involution, "induced": _check_induced, "lift": _check_lift,
    "witnessA": _check_witness, "foata": _check_foata, "descentB": _check_descent_b,
    "reciprocal": _check_reciprocal, "erratum": _check_erratum,
}


def cmd_verify(args) -> int:
    ok, details = CHECKS[args.check](args)
    outcome = "PASS" if ok else "FAIL"
    success = ok == (args.expect == "pass")
    if args.format == "json":
        text = json.dumps({"check": args.check, "result": outcome, "expected": args.expect.upper(),
                           "details": details}, indent=2, default=str) + "\n"
    else:
        lines = [f"{args.check}: {outcome}"]
        for k, v in details.items():
            if isinstance(v, dict):
                lines += [f"  {kk}: {vv}" for kk, vv in v.items()]
            else:
                lines.append(f"  {k}: {v}")
        text = "\n".join(lines) + "\n"
    _emit(args, text)
    return 0 if success else 1


# ---------------------------------------------------------------- repro

def cmd_repro(args) -> int:
    only = set(parse_ranks(args.only)) if args.only else None
    report = repro.run_all(args.threads, args.extended, only)
    text = json.dumps(report, indent=2, default=str) + "\n"
    _emit(args, text)
    for r in report["criteria"]:
        print(f"[{'PASS' if r['passed'] else 'FAIL'}] {r['id']:>2} {r['title']}", file=sys.stderr)
    return 0 if report["passed"] else 1


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--threads", type=int, default=None,
                        help="worker threads (default: COXSTAT_THREADS or all CPUs)")
    common.add_argument("--cap", type=int, default=None, help="refuse groups larger than this")
    common.add_argument("--format", choices=("text", "json", "csv"), default="text")
    common.add_argument("--out", default=None, help="write output to this file")

    p = argparse.ArgumentParser(prog="coxstat", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)

    d = sub.add_parser("dist", parents=[common], help="distribution of a statistic")
    d.add_argument("--group")
    d.add_argument("--stat")
    d.add_argument("--check-against", default=None)
    d.add_argument("--poset", help="JSON poset {ranks, bottom, top}")
    d.add_argument("--values", help="JSON vector of function values on --poset")
    d.set_defaults(func=cmd_dist)

    im = sub.add_parser("image", parents=[common], help="|Im(f+g)| or |Im(f-g)| by rank")
    im.add_argument("--group", help="family A, B or D")
    im.add_argument("--op", choices=("sum", "diff"), default="diff")
    im.add_argument("--stats", default="len,maj")
    im.add_argument("--ranks", help="a..b or a comma list")
    im.set_defaults(func=cmd_image)

    v = sub.add_parser("verify", parents=[common], help="run one named check")
    v.add_argument("check", choices=sorted(CHECKS))
    v.add_argument("--group")
    v.add_argument("--stats", "--stat", dest="stats")
    v.add_argument("--J", default=None, help="generator subset, e.g. {s1,s2}")
    v.add_argument("--n", default=None)
    v.add_argument("--poset")
    v.add_argument("--values", help="two JSON vectors, comma-separated ('rank' for the rank)")
    v.add_argument("--expect", choices=("pass", "fail"), default="pass")
    v.set_defaults(func=cmd_verify)

    r = sub.add_parser("repro", parents=[common], help="full reproduction report (JSON)")
    r.add_argument("--extended", action="store_true", help="include S_11, S_12 and B_8")
    r.add_argument("--only", default=None, help="criterion ids, e.g. 1..4 or 5,9")
    r.set_defaults(func=cmd_repro)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, CapExceeded, ValueError, OSError) as exc:
        print(f"coxstat: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
