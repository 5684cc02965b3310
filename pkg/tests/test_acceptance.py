"""One test per acceptance criterion.

Each criterion is computed by a report builder that returns a JSON-ready dict
with an ``ok`` flag; the test records a pass/fail line and asserts ``ok``.
Criterion 13 re-runs every builder with two worker processes and compares the
serialized reports byte for byte.
"""
import itertools
import json
import time

import numpy as np

from commgrowth import commfree, counting, freeprod, freewords, modular
from commgrowth.freewords import Word, free_reduce, min_rotation
from commgrowth.groups import FiniteGroupTable

# pinned tolerances and bounds
CHEBYSHEV_TOL = 1e-9
C1_SECONDS = 1.0
C3_SECONDS = 300.0
C4_SECONDS = 1800.0
C7_SECONDS = 300.0
MARKOFF_LEN = 6
MARKOFF_TRACE_BOUND = 10
SEED = 0
N_THREADS = 2

FREE_KS = (4, 8, 12, 16, 20)
MODULAR_KS = (4, 8, 12, 16, 20, 24)
SHARP_MS = tuple(range(2, 13))

_cache: dict[tuple[int, int], dict] = {}


def _decreasing(values) -> bool:
    return all(b < a for a, b in zip(values, values[1:]))


def _cyclic_zero_rows(r, n):
    rows = freewords.cyclically_reduced_array(r, n)
    zero = np.ones(rows.shape[0], dtype=bool)
    for g in range(r):
        zero &= (rows == 2 * g).sum(1) == (rows == 2 * g + 1).sum(1)
    return rows[zero]


# ---------------------------------------------------------------------------
# report builders
# ---------------------------------------------------------------------------

def report_1(threads):
    start = time.perf_counter()
    formula = {(r, n): freewords.count_cyclically_reduced(r, n) for r in (2, 3) for n in range(1, 11)}
    formula_seconds = time.perf_counter() - start
    mismatches = []
    for (r, n), value in formula.items():
        enumerated = sum(freewords.cyclically_reduced_array(r, n, first).shape[0] for first in range(2 * r))
        if enumerated != value:
            mismatches.append([r, n, value, enumerated])
    endpoint_bad = []
    for n in range(2, 11):
        arr = freewords.reduced_word_array(2, n)
        table = np.zeros((4, 4), dtype=np.int64)
        np.add.at(table, (arr[:, 0], arr[:, -1]), 1)
        for s1, s2 in itertools.product(range(4), repeat=2):
            if freewords.count_endpoint_pairs(2, n, s1, s2) != table[s1, s2]:
                endpoint_bad.append([n, s1, s2])
    small = [freewords.endpoint_sequences(2, 1), freewords.endpoint_sequences(2, 2)]
    ok = not mismatches and not endpoint_bad and small == [(0, 4), (0, 4)] and formula_seconds < C1_SECONDS
    return {"ok": ok, "mismatches": mismatches, "endpoint_mismatches": endpoint_bad,
            "a1_b1_a2_b2": [list(x) for x in small], "formula_under_1s": formula_seconds < C1_SECONDS}


def report_2(threads):
    accepted = bad = nonzero = 0
    for n in range(0, 11):
        for w in freewords.enumerate_cyclically_reduced(2, n):
            wit = commfree.is_commutator_free(w)
            if wit is None:
                continue
            accepted += 1
            if wit.commutator() != Word(w.letters, 2):
                bad += 1
            if any(freewords.abelianize(w)):
                nonzero += 1
    return {"ok": accepted > 0 and bad == 0 and nonzero == 0,
            "accepted": accepted, "unverified": bad, "nonzero_abelianization": nonzero}


def report_3(threads):
    start = time.perf_counter()
    oracle = {k for k in commfree.forward_commutator_class_keys(2, 6, threads) if len(k) <= 12}
    accepted = {()}
    for k in range(1, 13):
        accepted |= {min_rotation(w.letters) for w in commfree.enumerate_wicks_commutators(2, k, threads)}
    square = free_reduce("abAB" * 2, 2)
    square_rejected = commfree.is_commutator_free(square) is None
    seconds = time.perf_counter() - start
    by_len = {}
    for key in oracle:
        by_len[len(key)] = by_len.get(len(key), 0) + 1
    ok = oracle == accepted and square_rejected and seconds < C3_SECONDS
    return {"ok": ok, "oracle_classes_by_length": dict(sorted(by_len.items())),
            "accepted_classes": len(accepted), "sets_equal": oracle == accepted,
            "square_rejected": square_rejected, "under_5min": seconds < C3_SECONDS}


def _free_reports(threads):
    key = ("free", threads)
    if key not in _cache:
        start = time.perf_counter()
        reps = [commfree.count_commutator_classes_free(2, k, threads) for k in FREE_KS]
        _cache[key] = {"reports": reps, "seconds": time.perf_counter() - start}
    return _cache[key]


def report_4(threads):
    data = _free_reports(threads)
    reps = data["reports"]
    devs = [abs(rep.ratio - 1) for rep in reps]
    ok = reps[0].exact_count == 2 and _decreasing(devs) and data["seconds"] < C4_SECONDS
    return {"ok": ok, "rows": [rep.to_dict() for rep in reps],
            "deviation": [round(d, 6) for d in devs], "under_30min": data["seconds"] < C4_SECONDS}


def report_5(threads):
    reps = _free_reports(threads)["reports"]
    avgs = [rep.words_per_class for rep in reps]
    increasing = all(b > a for a, b in zip(avgs, avgs[1:]))
    below_six = all(a <= 6 for a in avgs)
    ok = avgs[0] == 4 and increasing and below_six
    return {"ok": ok, "words_per_class": [str(a) for a in avgs],
            "as_float": [round(float(a), 6) for a in avgs],
            "exactly_4_at_k4": avgs[0] == 4, "increasing": increasing, "at_most_6": below_six}


def report_6(threads):
    orders_ok = True
    for r in (2, 3):
        for k in range(1, 21):
            both = counting.classes_trivial_ab_both(r, k)
            orders_ok &= both.by_primitive == both.by_totient and both.by_primitive.denominator == 1
    dp_vs_brute = {k: [counting.ck(2, k), counting.ck_bruteforce(2, k)] for k in range(0, 13)}
    dp_ok = all(a == b for a, b in dp_vs_brute.values())
    c24 = counting.classes_trivial_ab(2, 4)
    return {"ok": orders_ok and dp_ok and c24 == 2, "orders_agree": orders_ok,
            "classes_2_4": c24, "ck_dp_vs_bruteforce": {str(k): v for k, v in dp_vs_brute.items()}}


def report_7(threads):
    start = time.perf_counter()
    fp = freeprod.FreeProduct(*freeprod.hecke_group(3))
    reps = [fp.count_commutator_classes(k, threads) for k in MODULAR_KS]
    tail = [abs(rep.ratio - 1) for rep in reps if rep.k >= 12]
    others = {}
    contained = True
    for name, (n1, n2) in {"Z2*Z4": (2, 4), "Z3*Z3": (3, 3)}.items():
        other = freeprod.FreeProduct(FiniteGroupTable.cyclic(n1), FiniteGroupTable.cyclic(n2))
        others[name] = [other.count_commutator_classes(k, threads).exact_count for k in (4, 8, 12)]
        contained &= all(other.has_trivial_abelianization(c) for c in other.accepted_classes(12))
    contained &= all(fp.has_trivial_abelianization(c) for c in fp.accepted_classes(12))
    seconds = time.perf_counter() - start
    decreasing = _decreasing(tail)
    ok = reps[0].exact_count == 1 and decreasing and contained and seconds < C7_SECONDS
    return {"ok": ok, "rows": [rep.to_dict() for rep in reps], "deviation_k12_to_24": [round(d, 6) for d in tail],
            "deviation_decreasing": decreasing, "other_pairs": others,
            "trivial_abelianization_containment": contained, "under_5min": seconds < C7_SECONDS}


def report_8(threads):
    fp = freeprod.FreeProduct(*freeprod.hecke_group(3))
    oracle = fp.forward_oracle(8, 16)
    accepted = fp.accepted_classes(16)
    low_equal = {c for c in oracle if len(c) <= 12} == {c for c in accepted if len(c) <= 12}
    high_oracle = {c for c in oracle if 13 <= len(c) <= 16}
    high_subset = high_oracle <= accepted
    caveats = sorted(fp.format(c) for c in accepted if 13 <= len(c) <= 16 and c not in oracle)
    return {"ok": low_equal and high_subset, "equal_up_to_12": low_equal,
            "oracle_subset_13_to_16": high_subset,
            "not_reached_by_witness_bound": caveats}


def report_9(threads):
    paths_ok = all(
        freeprod.count_closed_paths_complete(m, n) == freeprod.adjacency_closed_paths(m, n)
        for m in range(2, 6) for n in range(0, 11)
    )
    rows, closed_ok, paths_formula_ok = [], True, True
    for n1, n2 in ((2, 3), (2, 4), (3, 3)):
        fp = freeprod.FreeProduct(FiniteGroupTable.cyclic(n1), FiniteGroupTable.cyclic(n2))
        for k in (4, 8, 12):
            res = fp.count_trivial_product_words(k)
            rows.append({"pair": f"Z{n1}*Z{n2}", "k": k, "enumerated": res.enumerated,
                         "closed_form": res.closed_form, "path_formula": res.path_formula})
            closed_ok &= res.enumerated == res.closed_form
            paths_formula_ok &= res.enumerated == res.path_formula
    return {"ok": paths_ok and closed_ok, "eigenvalue_vs_adjacency": paths_ok,
            "enumeration_equals_closed_form": closed_ok,
            "enumeration_equals_path_formula": paths_formula_ok, "rows": rows}


def report_10(threads):
    rng_words = modular.random_matrices(SEED, 1000)
    round_trip = all(modular.evaluate(modular.decompose_ST(m)).psl_equal(m) for m in rng_words)
    trace_ok = True
    for a, b in modular.random_pairs(SEED + 1, 1000):
        tri = modular.trace_identity_check(a, b)
        trace_ok &= modular.markoff_eval(tri.x, tri.y, tri.z) == tri.T
    chi_ok = all(
        modular.in_commutator_subgroup_psl2(m) == modular.psl2_fp_abelian_trivial(m)
        for m in modular.random_matrices(SEED + 2, 1000)
    )
    points = modular.markoff_scan(MARKOFF_LEN, MARKOFF_TRACE_BOUND, threads=threads)
    rows = [p.to_dict() for p in points]
    on_surface = all(modular.markoff_eval(r["x"], r["y"], r["z"]) == r["T"] for r in rows)
    has_223 = any((r["x"], r["y"], r["z"], r["T"]) == (2, 2, 3, 3) for r in rows)
    return {"ok": round_trip and trace_ok and chi_ok and on_surface and has_223,
            "round_trip": round_trip, "trace_identity": trace_ok, "chi_vs_abelianization": chi_ok,
            "markoff_triples": len(rows), "on_surface": on_surface, "has_2_2_3": has_223,
            "markoff_rows": rows}


def report_11(threads):
    values = {"ct_2_2": counting.rivin_ct(2, 2), "ct_2_4": counting.rivin_ct(2, 4)}
    worst = 0.0
    for r in (2, 3):
        for k in range(0, 13):
            poly = counting.chebyshev_poly(r, k)
            for point in ([0.7] * r, [1.3, 0.9, 1.1][:r], [0.55, 1.45, 1.0][:r]):
                exact, numeric = poly.evaluate(point), counting.chebyshev_numeric(r, k, point)
                worst = max(worst, abs(exact - numeric) / max(1.0, abs(numeric)))
    report = counting.rivin_discrepancy_report(2, 16)
    ok = values == {"ct_2_2": -4, "ct_2_4": 48} and worst <= CHEBYSHEV_TOL and len(report) == 16
    return {"ok": ok, **values, "cross_check_within_tol": worst <= CHEBYSHEV_TOL,
            "discrepancy_report": report}


def report_12(threads):
    ratios = [counting.sharp_ratio(2, m) for m in SHARP_MS]
    devs = [abs(x - 1) for x, m in zip(ratios, SHARP_MS) if m >= 4]
    decreasing = _decreasing(devs)
    return {"ok": decreasing, "m": list(SHARP_MS), "ratio": [round(x, 6) for x in ratios],
            "deviation_m_ge_4": [round(d, 6) for d in devs], "decreasing": decreasing}


BUILDERS = {i: globals()[f"report_{i}"] for i in range(1, 13)}


def build(criterion, threads):
    key = (criterion, threads)
    if key not in _cache:
        _cache[key] = BUILDERS[criterion](threads)
    return _cache[key]


def serialize(report) -> bytes:
    return json.dumps(report, sort_keys=True).encode()


def _check(criterion, acceptance_record, summary):
    report = build(criterion, 1)
    acceptance_record(criterion, report["ok"], summary(report))
    assert report["ok"], json.dumps({k: v for k, v in report.items() if k != "markoff_rows"})[:2000]


# ---------------------------------------------------------------------------
# tests
# ---------------------------------------------------------------------------

def test_criterion_01_word_counts(acceptance_record):
    _check(1, acceptance_record, lambda r: f"count mismatches={len(r['mismatches'])}, "
           f"endpoint mismatches={len(r['endpoint_mismatches'])}, a1,b1,a2,b2={r['a1_b1_a2_b2']}")


def test_criterion_02_decision_soundness(acceptance_record):
    _check(2, acceptance_record, lambda r: f"accepted={r['accepted']}, unverified={r['unverified']}, "
           f"nonzero abelianization={r['nonzero_abelianization']}")


def test_criterion_03_decision_completeness(acceptance_record):
    _check(3, acceptance_record, lambda r: f"oracle==accepted: {r['sets_equal']}, "
           f"[x,y]^2 rejected: {r['square_rejected']}, by length {r['oracle_classes_by_length']}")


def test_criterion_04_free_class_counts(acceptance_record):
    _check(4, acceptance_record, lambda r: "exact=" + str([row["exact_count"] for row in r["rows"]])
           + f", |ratio-1|={r['deviation']}")


def test_criterion_05_six_average(acceptance_record):
    _check(5, acceptance_record, lambda r: f"words/class={r['as_float']}, increasing={r['increasing']}, "
           f"<=6: {r['at_most_6']}")


def test_criterion_06_mobius_pipeline(acceptance_record):
    _check(6, acceptance_record, lambda r: f"orders agree={r['orders_agree']}, classes(2,4)={r['classes_2_4']}")


def test_criterion_07_modular_class_counts(acceptance_record):
    _check(7, acceptance_record, lambda r: "exact=" + str([row["exact_count"] for row in r["rows"]])
           + f", |ratio-1| k>=12: {r['deviation_k12_to_24']}, others={r['other_pairs']}")


def test_criterion_08_free_product_oracle(acceptance_record):
    _check(8, acceptance_record, lambda r: f"equal <=12: {r['equal_up_to_12']}, oracle subset 13-16: "
           f"{r['oracle_subset_13_to_16']}, caveats={len(r['not_reached_by_witness_bound'])}")


def test_criterion_09_closed_paths(acceptance_record):
    _check(9, acceptance_record, lambda r: f"eigen==adjacency: {r['eigenvalue_vs_adjacency']}, "
           f"enum==closed form: {r['enumeration_equals_closed_form']}, "
           f"enum==path formula: {r['enumeration_equals_path_formula']}")


def test_criterion_10_modular_bridge(acceptance_record):
    _check(10, acceptance_record, lambda r: f"round trip={r['round_trip']}, trace={r['trace_identity']}, "
           f"chi={r['chi_vs_abelianization']}, triples={r['markoff_triples']}, (2,2,3)={r['has_2_2_3']}")


def test_criterion_11_chebyshev_constant_term(acceptance_record):
    _check(11, acceptance_record, lambda r: f"CT(2,2)={r['ct_2_2']}, CT(2,4)={r['ct_2_4']}, "
           f"numeric within {CHEBYSHEV_TOL}: {r['cross_check_within_tol']}")


def test_criterion_12_sharp_asymptotic(acceptance_record):
    _check(12, acceptance_record, lambda r: f"|ratio-1| m>=4: {r['deviation_m_ge_4']}")


def test_criterion_13_determinism(acceptance_record, tmp_path):
    differing = []
    for criterion in BUILDERS:
        one = serialize(build(criterion, 1))
        many = serialize(build(criterion, N_THREADS))
        (tmp_path / f"c{criterion}_t1.json").write_bytes(one)
        (tmp_path / f"c{criterion}_tN.json").write_bytes(many)
        if (tmp_path / f"c{criterion}_t1.json").read_bytes() != (tmp_path / f"c{criterion}_tN.json").read_bytes():
            differing.append(criterion)
    ok = not differing
    acceptance_record(13, ok, f"threads 1 vs {N_THREADS}: differing reports {differing}")
    assert ok
