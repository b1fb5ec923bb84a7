"""Reproduction suite: every reference number recomputed and compared.

Each check returns ``{"id", "title", "passed", "details"}``.  Expected values
are the reference ones, verbatim; a check fails when the recomputation
disagrees, and the details keep both sides.
"""

from __future__ import annotations

import hashlib
import json
import time
from typing import Optional

from . import analysis as AN
from . import universe as U
from .analysis import format_rational
from .bigcox import enumerate_group, generic_induce, preset
from .enumeration import EnumerationRange, joint_histogram
from .groups import GroupDescriptor, length, parabolic_decompose, word_length
from .posets import chain_poset, coxeter_good_decomposition, in_same_class, poset_function
from .statistics import base_statistic, get_statistic, maj

# |Im(len - maj)| on S_{n+1}, n = 1..11, reference values
REFERENCE_DIFF_A = (1, 3, 5, 9, 15, 21, 29, 39, 49, 51, 63)
REFERENCE_KMINUS_A = (1, 3, 7, 11, 15, 21, 27, 33, 41, 59, 69)
# |Im(len_B - fmaj)| on S_n^B, n = 2..8, reference values
REFERENCE_DIFF_B_FMAJ = (3, 7, 15, 25, 39, 55, 75)
REFERENCE_KMINUS_B_FMAJ = (5, 11, 17, 25, 33, 43, 53)


def family_group(family: str, rank: int) -> GroupDescriptor:
    """Coxeter rank -> classical group (type A of rank r lives on S_{r+1})."""
    return GroupDescriptor(family, rank + 1 if family == "A" else rank)


def image_row(family: str, rank: int, stats: tuple[str, str], op: str,
              threads: Optional[int] = None) -> dict:
    desc = family_group(family, rank)
    f, g = (base_statistic(s, desc) for s in stats)
    data = AN.image_data(AN.joint_distribution(f, g, threads))
    key = "sum" if op == "sum" else "diff"
    kname = "k_plus" if op == "sum" else "k_minus"
    return {"rank": rank, "group": str(desc), "image": data[f"{key}_image"], kname: data[kname]}


def _result(cid, title, passed, **details):
    return {"id": cid, "title": title, "passed": bool(passed), "details": details}


def check_diff_sequence_a(threads=None, extended=False):
    ranks = range(1, 12 if extended else 10)
    rows = [image_row("A", n, ("len", "maj"), "diff", threads) for n in ranks]
    got = [r["image"] for r in rows]
    want = list(REFERENCE_DIFF_A[: len(got)])
    return _result(1, "|Im(len-maj)| on S_{n+1}", got == want,
                   ranks=list(ranks), computed=got, reference=want,
                   k_minus=[r["k_minus"] for r in rows],
                   reference_k_minus=list(REFERENCE_KMINUS_A[: len(got)]),
                   mismatches={n: [g, w] for n, g, w in zip(ranks, got, want) if g != w})


def check_sum_image_a(threads=None, extended=False):
    got = {n: image_row("A", n, ("len", "maj"), "sum", threads)["image"] for n in range(1, 8)}
    want = {n: 2 if n == 1 else n * (n + 1) - 1 for n in got}
    witnesses = {n: AN.sum_image_witnesses(n, check_image=False).verified for n in range(2, 8)}
    return _result(2, "|Im(len+maj)| on S_{n+1} and witness families",
                   got == want and all(witnesses.values()),
                   computed=got, expected=want, witnesses=witnesses)


def check_type_b_nmaj(threads=None, extended=False):
    sums = {n: image_row("B", n, ("len", "nmaj"), "sum", threads)["image"] for n in range(2, 6)}
    want = {n: 5 if n == 2 else 2 * n * n - 1 for n in sums}
    same = {}
    for n in range(3, 6):
        B, A = GroupDescriptor("B", n), GroupDescriptor("A", n)
        same[n] = (AN.diff_image(base_statistic("len", B), base_statistic("nmaj", B), threads)
                   == AN.diff_image(base_statistic("len", A), base_statistic("maj", A), threads))
    return _result(3, "type B: |Im(len_B+nmaj)| and Im(len_B-nmaj) = Im(len-maj)",
                   sums == want and all(same.values()),
                   sum_images=sums, expected=want, diff_images_agree=same)


def check_diff_sequence_b(threads=None, extended=False):
    ranks = range(2, 9 if extended else 8)
    rows = [image_row("B", n, ("len", "fmaj"), "diff", threads) for n in ranks]
    got = [r["image"] for r in rows]
    want = list(REFERENCE_DIFF_B_FMAJ[: len(got)])
    return _result(4, "|Im(len_B-fmaj)| on S_n^B", got == want,
                   ranks=list(ranks), computed=got, reference=want,
                   k_minus=[r["k_minus"] for r in rows],
                   reference_k_minus=list(REFERENCE_KMINUS_B_FMAJ[: len(got)]))


def check_rationals(threads=None, extended=False):
    B3, D4 = GroupDescriptor("B", 3), GroupDescriptor("D", 4)
    b = AN.ratio_sum_check(base_statistic("fmaj", B3), base_statistic("len", B3), threads)
    d = AN.ratio_sum_check(base_statistic("Dmaj", D4), base_statistic("len", D4), threads)
    want_b = ("22303/420", "14731/280")
    want_d = ("6451033/27720", "829573/3465")
    got_b = tuple(format_rational(x) for x in b[:2])
    got_d = tuple(format_rational(x) for x in d[:2])
    return _result(5, "exact ratio sums", got_b == want_b and got_d == want_d and not b[2] and not d[2],
                   fmaj_lenB_S3B=list(got_b), Dmaj_lenD_S4D=list(got_d))


def _symmetric(name_f, desc):
    return AN.is_symmetric_pair(base_statistic(name_f, desc), base_statistic("len", desc))


def check_symmetric_pairs(threads=None, extended=False):
    cases = {}
    for n in range(2, 7):
        cases[f"maj,len A:{n}"] = (_symmetric("maj", GroupDescriptor("A", n)), True)
    for n in range(2, 5):
        cases[f"nmaj,len B:{n}"] = (_symmetric("nmaj", GroupDescriptor("B", n)), True)
    for n in (4, 5):
        cases[f"dmaj,len D:{n}"] = (_symmetric("dmaj", GroupDescriptor("D", n)), True)
    cases["fmaj,len B:3"] = (_symmetric("fmaj", GroupDescriptor("B", 3)), False)
    cases["Dmaj,len D:4"] = (_symmetric("Dmaj", GroupDescriptor("D", 4)), False)
    return _result(6, "symmetric pairs", all(g == w for g, w in cases.values()),
                   cases={k: {"symmetric": g, "expected": w} for k, (g, w) in cases.items()})


def _involution_exists(f, g) -> bool:
    try:
        AN.build_involution(f, g)
    except AN.NotSymmetric:
        return False
    return True


def _lift_holds(family: str, n: int) -> bool:
    W, S = GroupDescriptor(family, n), GroupDescriptor("A", n)
    iota = AN.build_involution(base_statistic("maj", S), base_statistic("len", S))
    d = coxeter_good_decomposition(W, range(1, n))
    lifted = AN.lift_involution(iota, d)
    fname = "nmaj" if family == "B" else "dmaj"
    fv = [base_statistic(fname, W)(x) for x in d.poset.labels]
    lv = [length(x) for x in d.poset.labels]
    return all(fv[x] == lv[lifted(x)] for x in range(len(fv)))


def check_involutions(threads=None, extended=False):
    built = {}
    for n in range(2, 7):
        A = GroupDescriptor("A", n)
        built[n] = _involution_exists(base_statistic("maj", A), base_statistic("len", A))
    lifts = {f"B:{n}": _lift_holds("B", n) for n in range(2, 5)}
    lifts.update({f"D:{n}": _lift_holds("D", n) for n in (4, 5)})
    pairs = [("maj", f"A:{n}") for n in range(2, 7)] + [("nmaj", f"B:{n}") for n in range(2, 5)]
    pairs += [("dmaj", "D:4"), ("dmaj", "D:5"), ("fmaj", "B:3"), ("Dmaj", "D:4")]
    equivalence = {}
    for name, g in pairs:
        desc = GroupDescriptor.parse(g)
        f, ell = base_statistic(name, desc), base_statistic("len", desc)
        equivalence[f"{name},len {g}"] = AN.is_symmetric_pair(f, ell) == _involution_exists(f, ell)
    passed = all(built.values()) and all(lifts.values()) and all(equivalence.values())
    return _result(7, "involutions, lifted involutions, symmetric <=> involution", passed,
                   maj_len_involution=built, lifted=lifts, equivalence=equivalence)


WORKED_EXAMPLE = {
    (1, 4, 2, 3): 3, (2, 1, 4, 3): 2, (4, 1, 2, 3): 2, (2, 4, 1, 3): 3, (4, 2, 1, 3): 4,
    (1, 4, 3, 2): 4, (3, 1, 4, 2): 3, (4, 1, 3, 2): 3, (3, 4, 1, 2): 4, (4, 3, 1, 2): 5,
    (2, 4, 3, 1): 5, (3, 2, 4, 1): 4, (4, 2, 3, 1): 4, (3, 4, 2, 1): 5, (4, 3, 2, 1): 6,
}


def check_worked_example(threads=None, extended=False):
    S4 = GroupDescriptor("A", 4)
    f = get_statistic("induced:maj:{s1,s2}:right", S4)
    got = {w: f(S4.element(w)) for w in WORKED_EXAMPLE}
    bad = {",".join(map(str, w)): [got[w], v] for w, v in WORKED_EXAMPLE.items() if got[w] != v}
    boundary = True
    for w in U.elements(S4):
        fac = parabolic_decompose(w, {1, 2})
        if w.window[3] == 4:
            boundary &= f(w) == maj(w.window[:3])
        if fac.w_quotient == w:
            boundary &= f(w) == length(w)
    return _result(8, "induced statistic on S_4 from maj on S_3", not bad and boundary,
                   mismatches=bad, boundary_rules=boundary)


def check_descent_classes(threads=None, extended=False):
    foata = {}
    for n in range(2, 7):
        A = GroupDescriptor("A", n)
        ms = base_statistic("majstar", A)
        classes = AN.descent_class_partition(A, "A")
        foata[n] = all(sorted(length(w) for w in ws) == sorted(ms(w) for w in ws)
                       for ws in classes.values())
    dik = {}
    counterexample = None
    for n in range(1, 5):
        B = GroupDescriptor("B", n)
        ns = base_statistic("nmajstar", B)
        classes = AN.descent_class_partition(B, "B")
        dik[n] = True
        for (I, K), ws in classes.items():
            if sorted(length(w) for w in ws) != sorted(ns(w) for w in ws):
                dik[n] = False
                if counterexample is None or len(ws) < len(counterexample["class"]):
                    counterexample = {"I": sorted(I), "K": sorted(K),
                                      "class": [list(w.window) for w in ws],
                                      "len": sorted(length(w) for w in ws),
                                      "nmajstar": sorted(ns(w) for w in ws)}
    bivariate_a = {}
    for n in range(2, 7):
        A = GroupDescriptor("A", n)
        m = base_statistic("maj", A)
        bivariate_a[n] = (AN.joint_distribution(base_statistic("len", A), m, threads)
                          == AN.joint_distribution(base_statistic("majstar", A), m, threads))
    bivariate_b = {}
    for n in range(1, 5):
        B = GroupDescriptor("B", n)
        fm = base_statistic("fmaj", B)
        bivariate_b[n] = (AN.joint_distribution(base_statistic("len", B), fm, threads)
                          == AN.joint_distribution(base_statistic("nmajstar", B), fm, threads))
    passed = all(foata.values()) and all(dik.values()) and all(bivariate_a.values()) \
        and all(bivariate_b.values())
    return _result(9, "descent classes and bivariate identities", passed, foata=foata,
                   descent_neg_classes=dik, smallest_counterexample=counterexample, len_maj_vs_majstar_maj=bivariate_a,
                   lenB_fmaj_vs_nmajstar_fmaj=bivariate_b)


def check_chain(threads=None, extended=False):
    X = chain_poset(8)
    f = poset_function(X, (0, 3, 1, 6, 5, 4, 2, 7), "f")
    rho = X.rank_function()
    left, right, equal = AN.ratio_sum_check(f, rho)
    symmetric = AN.is_symmetric_pair(f, rho)
    return _result(10, "8-chain: ratio sums equal, pair not symmetric",
                   equal and not symmetric and in_same_class(f, rho),
                   sums=[format_rational(left), format_rational(right)], symmetric=symmetric)


GENERIC_CASES = (
    ("H3", (1, 2), "maj", GroupDescriptor("A", 3)),
    ("F4", (2, 3, 4), "fmaj", GroupDescriptor("B", 3)),
    ("E6", (1, 3, 4, 5), "maj", GroupDescriptor("A", 5)),
)


def check_generic(threads=None, extended=False):
    orders = {}
    reciprocal = {}
    groups = {}
    for name in ("I2:5", "H3", "F4", "E6"):
        t0 = time.perf_counter()
        G = enumerate_group(preset(name))
        groups[name] = G
        orders[name] = {"order": len(G), "seconds": round(time.perf_counter() - t0, 3)}
        reciprocal[name] = AN.is_reciprocal(G.poincare())
    want = {"I2:5": 10, "H3": 120, "F4": 1152, "E6": 51840}
    induced = {}
    for name, J, base, model in GENERIC_CASES:
        G = groups[name]
        f = generic_induce(G, base_statistic(base, model), J)
        ell = get_statistic("len", G)
        induced[f"{base}_{model},{name}"] = {
            "equidistributed": AN.distribution(f) == G.poincare(),
            "in_class": in_same_class(f, ell),
        }
    passed = (all(orders[k]["order"] == v for k, v in want.items()) and all(reciprocal.values())
              and all(all(v.values()) for v in induced.values()))
    return _result(11, "generic engine: orders, reciprocity, induced statistics", passed,
                   orders=orders, reciprocal=reciprocal, induced=induced)


def check_erratum_probe(threads=None, extended=False):
    D4 = GroupDescriptor("D", 4)
    brute = len(AN.sum_image(base_statistic("len", D4), base_statistic("dmaj", D4), threads))
    # recount without closed formulas: Cayley-graph lengths and the parabolic split
    recount = set()
    for w in U.elements(D4):
        fac = parabolic_decompose(w, {1, 2, 3})
        recount.add(word_length(w) + word_length(fac.w_quotient) + maj(fac.restricted()))
    return _result(12, "|Im(len_D+dmaj)| on S_4^D", brute == len(recount),
                   brute_force=brute, recount=len(recount), reference=3,
                   formula_2n_n_minus_1_minus_1=23)


def _fingerprint(threads, extended):
    rows = []
    for n in range(1, 12 if extended else 10):
        rows.append(image_row("A", n, ("len", "maj"), "diff", threads))
        if n <= 7:
            rows.append(image_row("A", n, ("len", "maj"), "sum", threads))
    for n in range(2, 9 if extended else 8):
        rows.append(image_row("B", n, ("len", "fmaj"), "diff", threads))
        if n <= 5:
            rows.append(image_row("B", n, ("len", "nmaj"), "sum", threads))
    hist = joint_histogram(EnumerationRange.full(GroupDescriptor("A", 8)), "len", "maj", threads)
    blob = json.dumps(rows, sort_keys=True).encode() + hist.tobytes()
    return hashlib.sha256(blob).hexdigest()


def check_determinism(threads=None, extended=False):
    prints = {t: _fingerprint(t, extended) for t in (1, 2, 4, 8)}
    return _result(13, "bit-identical outputs at 1, 2, 4, 8 threads", len(set(prints.values())) == 1,
                   sha256=prints)


CHECKS = (
    check_diff_sequence_a, check_sum_image_a, check_type_b_nmaj, check_diff_sequence_b,
    check_rationals, check_symmetric_pairs, check_involutions, check_worked_example,
    check_descent_classes, check_chain, check_generic, check_erratum_probe, check_determinism,
)


def run_all(threads: Optional[int] = None, extended: bool = False, only=None) -> dict:
    results = []
    for cid, check in enumerate(CHECKS, 1):
        if only is not None and cid not in only:
            continue
        t0 = time.perf_counter()
        res = check(threads, extended)
        res["seconds"] = round(time.perf_counter() - t0, 3)
        results.append(res)
    return {"extended": extended, "passed": all(r["passed"] for r in results), "criteria": results}
