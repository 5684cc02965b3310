"""Verification drivers, run configuration and report output."""
from __future__ import annotations

import csv
import io
import json
import time
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Any, Callable, Iterable, Optional, Sequence, Union

import numpy as np

from . import commfree, counting, freeprod, freewords, modular
from .errors import CapacityError, InvalidInputError
from .groups import named_group

CHECK_IDS = ("free-classes", "product-classes", "endpoints", "class-identity", "paths", "six-average", "sharp", "rivin-ct", "chi")

PASS = "pass"
TREND = "pass (trend row)"
FLAG = "flag"

CSV_COLUMNS = ("theorem", "k", "exact", "main_term", "ratio", "status")
RECORD_FIELDS = ("theorem", "inputs", "exact", "formula", "ratio", "status", "note")

# resource bounds for single verifications
MAX_FREE_K = 24
MAX_FP_K = 28
MAX_SERIES_K = 60


@dataclass
class RunConfig:
    seed: int = 0
    threads: Optional[int] = None
    out: Optional[str] = None
    format: str = "json"
    params: dict[str, Any] = field(default_factory=dict)


@dataclass
class VerificationRecord:
    theorem: str
    inputs: dict[str, Any]
    exact: Any
    formula: Any
    ratio: Optional[float]
    status: str
    note: str = ""
    wall_time: float = field(default=0.0, compare=False)

    @property
    def passed(self) -> bool:
        return self.status != FLAG

    def to_dict(self, include_time: bool = False) -> dict:
        out = {name: _jsonable(getattr(self, name)) for name in RECORD_FIELDS}
        if out["ratio"] is not None:
            out["ratio"] = round(out["ratio"], 6)
        if include_time:
            out["wall_time"] = round(self.wall_time, 3)
        return out


def _jsonable(value: Any) -> Any:
    if isinstance(value, Fraction):
        return str(value) if value.denominator != 1 else int(value)
    if isinstance(value, (np.integer,)):
        return int(value)
    if isinstance(value, dict):
        return {str(k): _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    return value


def _ratio(exact: Union[int, Fraction], formula: Union[int, Fraction, float, None]) -> Optional[float]:
    if formula is None or formula == 0:
        return None
    if isinstance(formula, float):
        return float(exact) / formula
    return float(Fraction(exact) / Fraction(formula))


def _need(params: dict, *names: str) -> list:
    missing = [n for n in names if n not in params]
    if missing:
        raise InvalidInputError(f"missing parameters: {', '.join(missing)}")
    return [params[n] for n in names]


# ---------------------------------------------------------------------------
# single verifications
# ---------------------------------------------------------------------------

def _verify_free_classes(p: dict, threads: int) -> VerificationRecord:
    r, k = (int(x) for x in _need(p, "r", "k"))
    if k > MAX_FREE_K:
        raise CapacityError(f"free class verification capped at k = {MAX_FREE_K}")
    rep = commfree.count_commutator_classes_free(r, k, threads)
    main = commfree.free_main_term(r, k)
    return VerificationRecord("free-classes", {"r": r, "k": k}, rep.exact_count, main, _ratio(rep.exact_count, main), TREND)


def _verify_product_classes(p: dict, threads: int) -> VerificationRecord:
    g1, g2 = p.get("g1", "Z2"), p.get("g2", "Z3")
    k = int(_need(p, "k")[0])
    if k > MAX_FP_K:
        raise CapacityError(f"product class verification capped at k = {MAX_FP_K}")
    fp = freeprod.FreeProduct(named_group(g1), named_group(g2))
    rep = fp.count_commutator_classes(k, threads)
    return VerificationRecord(
        "product-classes", {"g1": g1, "g2": g2, "k": k}, rep.exact_count, rep.main_term, rep.ratio, TREND
    )


def _verify_endpoints(p: dict, threads: int) -> VerificationRecord:
    r, n = (int(x) for x in _need(p, "r", "n"))
    if (2 * r - 1) ** n > 5_000_000:
        raise CapacityError("endpoint enumeration too large")
    arr = freewords.reduced_word_array(r, n)
    enumerated = np.zeros((2 * r, 2 * r), dtype=np.int64)
    np.add.at(enumerated, (arr[:, 0], arr[:, -1]), 1)
    formula = [[freewords.count_endpoint_pairs(r, n, s1, s2) for s2 in range(2 * r)] for s1 in range(2 * r)]
    ok = enumerated.tolist() == formula
    return VerificationRecord(
        "endpoints", {"r": r, "n": n}, enumerated.tolist(), formula, None, PASS if ok else FLAG
    )


def _verify_class_identity(p: dict, threads: int) -> VerificationRecord:
    r, k = (int(x) for x in _need(p, "r", "k"))
    both = counting.classes_trivial_ab_both(r, k)
    ok = both.by_primitive == both.by_totient and both.by_primitive.denominator == 1
    return VerificationRecord(
        "class-identity", {"r": r, "k": k}, both.by_primitive, both.by_totient, 1.0, PASS if ok else FLAG
    )


def _verify_paths(p: dict, threads: int) -> VerificationRecord:
    m, n = (int(x) for x in _need(p, "m", "n"))
    exact = freeprod.adjacency_closed_paths(m, n)
    shortcut = freeprod.closed_paths_shortcut(m, n)
    ok = exact == shortcut
    note = "" if ok else f"eigenvalue count {freeprod.count_closed_paths_complete(m, n)} differs from m(m-1)^(n-1)"
    return VerificationRecord(
        "paths", {"m": m, "n": n}, exact, shortcut, _ratio(exact, shortcut), PASS if ok else FLAG, note
    )


def _verify_six(p: dict, threads: int) -> VerificationRecord:
    r, k = (int(x) for x in _need(p, "r", "k"))
    if k > MAX_FREE_K:
        raise CapacityError(f"six-average verification capped at k = {MAX_FREE_K}")
    rep = commfree.count_commutator_classes_free(r, k, threads)
    avg = rep.words_per_class
    ratio = None if avg is None else float(avg / 6)
    return VerificationRecord("six-average", {"r": r, "k": k}, avg, 6, ratio, TREND)


def _verify_sharp(p: dict, threads: int) -> VerificationRecord:
    r, m = (int(x) for x in _need(p, "r", "m"))
    if 2 * m > MAX_SERIES_K:
        raise CapacityError(f"sharp verification capped at 2m = {MAX_SERIES_K}")
    exact = counting.ck(r, 2 * m)
    formula = counting.sharp_asymptotic(r, m)
    return VerificationRecord("sharp", {"r": r, "m": m}, exact, round(formula, 6), exact / formula, TREND)


def _verify_rivin(p: dict, threads: int) -> VerificationRecord:
    r, k = (int(x) for x in _need(p, "r", "k"))
    ct = counting.rivin_ct(r, k)
    exact = counting.ck(r, k)
    ok = ct == exact
    note = "" if ok else "constant term differs from the enumerated count"
    return VerificationRecord(
        "rivin-ct", {"r": r, "k": k}, exact, ct, _ratio(exact, ct), PASS if ok else FLAG, note
    )


def _verify_chi(p: dict, threads: int) -> VerificationRecord:
    seed = int(p.get("seed", 0))
    count = int(p.get("count", 1000))
    mats = modular.random_matrices(seed, count)
    agree = sum(modular.in_commutator_subgroup_psl2(m) == modular.psl2_fp_abelian_trivial(m) for m in mats)
    return VerificationRecord(
        "chi", {"seed": seed, "count": count}, agree, count, agree / count, PASS if agree == count else FLAG
    )


_DRIVERS: dict[str, Callable[[dict, int], VerificationRecord]] = {
    "free-classes": _verify_free_classes,
    "product-classes": _verify_product_classes,
    "endpoints": _verify_endpoints,
    "class-identity": _verify_class_identity,
    "paths": _verify_paths,
    "six-average": _verify_six,
    "sharp": _verify_sharp,
    "rivin-ct": _verify_rivin,
    "chi": _verify_chi,
}


def verify(theorem_id: str, params: dict, threads: int = 1) -> VerificationRecord:
    if theorem_id not in _DRIVERS:
        raise InvalidInputError(f"unknown theorem id {theorem_id!r}; choose from {', '.join(CHECK_IDS)}")
    start = time.perf_counter()
    rec = _DRIVERS[theorem_id](params, threads)
    rec.wall_time = time.perf_counter() - start
    return rec


def deviations(records: Sequence[VerificationRecord]) -> list[float]:
    return [abs(rec.ratio - 1) for rec in records]


def strictly_decreasing(values: Sequence[float]) -> bool:
    return all(b < a for a, b in zip(values, values[1:]))


def trend_record(theorem_id: str, records: Sequence[VerificationRecord], key: str) -> VerificationRecord:
    """Summary row: pass when ``|ratio - 1|`` strictly decreases along the rows."""
    devs = deviations(records)
    ok = strictly_decreasing(devs)
    return VerificationRecord(
        theorem_id,
        {key: [rec.inputs[key] for rec in records]},
        [round(d, 6) for d in devs],
        "strictly decreasing |ratio - 1|",
        None,
        PASS if ok else FLAG,
    )


# ---------------------------------------------------------------------------
# persistence
# ---------------------------------------------------------------------------

def append_log(records: Iterable[VerificationRecord], path: Union[str, Path]) -> None:
    """Append records as JSON lines; earlier lines are never rewritten."""
    with open(path, "a") as fh:
        for rec in records:
            fh.write(json.dumps(rec.to_dict(include_time=True)) + "\n")


def read_log(path: Union[str, Path]) -> list[dict]:
    with open(path) as fh:
        return [json.loads(line) for line in fh if line.strip()]


def _csv_row(rec: VerificationRecord) -> list:
    d = rec.to_dict()
    k = rec.inputs.get("k", rec.inputs.get("n", rec.inputs.get("m", "")))
    return [d["theorem"], json.dumps(_jsonable(k)), json.dumps(d["exact"]), json.dumps(d["formula"]),
            "" if d["ratio"] is None else f"{d['ratio']:.6f}", d["status"]]


def render(records: Sequence[VerificationRecord], fmt: str = "json") -> str:
    """Serialize records; wall times are left out so reruns are byte-identical."""
    if fmt == "json":
        return json.dumps([rec.to_dict() for rec in records], indent=2) + "\n"
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(CSV_COLUMNS)
        for rec in records:
            writer.writerow(_csv_row(rec))
        return buf.getvalue()
    raise InvalidInputError(f"unknown format {fmt!r}")


def emit(records: Sequence[VerificationRecord], fmt: str = "json", out: Optional[Union[str, Path]] = None) -> str:
    text = render(records, fmt)
    if out is not None:
        try:
            Path(out).write_text(text)
        except OSError as exc:
            raise OSError(f"cannot write report to {out}: {exc}") from exc
    return text


def render_rows(rows: Sequence[dict], fmt: str = "json") -> str:
    """Plain dict rows (series tables, counts) in the same two formats."""
    if fmt == "json":
        return json.dumps(list(rows), indent=2) + "\n"
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        if rows:
            cols = list(rows[0])
            writer.writerow(cols)
            for row in rows:
                writer.writerow([_cell(row.get(c)) for c in cols])
        return buf.getvalue()
    raise InvalidInputError(f"unknown format {fmt!r}")


def _cell(value: Any) -> str:
    if value is None:
        return ""
    if isinstance(value, (dict, list)):
        return json.dumps(value)
    return str(value)


# ---------------------------------------------------------------------------
# standard report
# ---------------------------------------------------------------------------

def standard_report(threads: int = 1, seed: int = 0, quick: bool = False) -> list[VerificationRecord]:
    """The fixed set of verifications emitted by the ``report`` command."""
    free_ks = [4, 8, 12] if quick else [4, 8, 12, 16, 20]
    fp_ks = [4, 8, 12, 16] if quick else [4, 8, 12, 16, 20, 24]
    sharp_ms = range(2, 9) if quick else range(2, 13)
    records: list[VerificationRecord] = []

    free_rows = [verify("free-classes", {"r": 2, "k": k}, threads) for k in free_ks]
    records += free_rows + [trend_record("free-classes", free_rows, "k")]

    six = [verify("six-average", {"r": 2, "k": k}, threads) for k in free_ks]
    avgs = [rec.exact for rec in six]
    six_ok = avgs[0] == 4 and all(b > a for a, b in zip(avgs, avgs[1:])) and all(a < 6 for a in avgs)
    records += six + [
        VerificationRecord(
            "six-average", {"k": free_ks}, [str(a) for a in avgs],
            "4 at k=4, increasing, below 6", None, PASS if six_ok else FLAG,
        )
    ]

    fp_rows = [verify("product-classes", {"g1": "Z2", "g2": "Z3", "k": k}, threads) for k in fp_ks]
    tail = [rec for rec in fp_rows if rec.inputs["k"] >= 12]
    records += fp_rows + [trend_record("product-classes", tail, "k")]

    records += [verify("endpoints", {"r": 2, "n": n}, threads) for n in range(2, 9)]
    records += [verify("class-identity", {"r": r, "k": k}, threads) for r in (2, 3) for k in (4, 8, 12)]
    records += [verify("paths", {"m": m, "n": n}, threads) for m in (2, 3) for n in (2, 3, 4)]

    sharp = [verify("sharp", {"r": 2, "m": m}, threads) for m in sharp_ms]
    records += sharp + [trend_record("sharp", [rec for rec in sharp if rec.inputs["m"] >= 4], "m")]

    records += [verify("rivin-ct", {"r": 2, "k": k}, threads) for k in (2, 4, 6, 8)]
    records.append(verify("chi", {"seed": seed, "count": 200 if quick else 1000}, threads))
    return records
