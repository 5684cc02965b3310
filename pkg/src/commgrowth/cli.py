"""Command-line interface: ``commgrowth <command> ...``."""
from __future__ import annotations

import argparse
import sys
from typing import Optional, Sequence

from . import commfree, counting, freeprod, freewords, harness, modular, parallel
from .errors import CapacityError, ConsistencyError, InvalidInputError
from .groups import named_group

EXIT_PASS, EXIT_ERROR, EXIT_FLAGGED = 0, 1, 2


def _write(text: str, out: Optional[str]) -> None:
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _emit_rows(rows: list[dict], args) -> None:
    _write(harness.render_rows(rows, args.format), args.out)


def _parse_params(items: Sequence[str]) -> dict:
    params = {}
    for item in items:
        if "=" not in item:
            raise InvalidInputError(f"parameter {item!r} is not key=value")
        key, value = item.split("=", 1)
        params[key] = int(value) if value.lstrip("-").isdigit() else value
    return params


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------

def cmd_fg(args) -> int:
    threads = parallel.resolve_threads(args.threads)
    if args.action == "classify":
        w = freewords.free_reduce(args.word, args.rank)
        cyc, _ = freewords.cyclic_reduce(w)
        witness = commfree.is_commutator_free(w)
        row = {
            "word": str(w),
            "cyclic": str(cyc),
            "class_rep": str(freewords.canonical_rep(cyc)),
            "abelianization": list(freewords.abelianize(w)),
            "is_commutator": witness is not None,
            "witness": None if witness is None else witness.to_dict(),
        }
        _emit_rows([row], args)
        return EXIT_PASS
    rows = [commfree.count_commutator_classes_free(args.rank, k, threads).to_dict() for k in args.k]
    _emit_rows(rows, args)
    return EXIT_PASS


def _free_product(g1: str, g2: str) -> freeprod.FreeProduct:
    # Z2 * Zq gets the Hecke letter names s, r, ..., R
    if g1 == "Z2" and g2[:1] == "Z" and g2[1:].isdigit() and int(g2[1:]) >= 3:
        return freeprod.FreeProduct(*freeprod.hecke_group(int(g2[1:])))
    return freeprod.FreeProduct(named_group(g1), named_group(g2))


def cmd_fp(args) -> int:
    threads = parallel.resolve_threads(args.threads)
    fp = _free_product(args.g1, args.g2)
    if args.action == "classify":
        w = fp.parse(args.word)
        dec = fp.is_commutator(w)
        row = {
            "word": fp.format(w.letters),
            "cyclic": fp.format(dec.cyclic),
            "trivial_abelianization": fp.has_trivial_abelianization(w.letters),
            "is_commutator": dec.accepted,
            "form": None if dec.form is None else dec.form.form_id,
            "witness": None if dec.witness is None else [fp.format(x) for x in dec.witness],
            "matched_forms": sorted({f.form_id for f in fp.match_wicks_form(
                freeprod.FPWord(dec.cyclic), literal=args.literal)}),
        }
        _emit_rows([row], args)
        return EXIT_PASS
    rows = [fp.count_commutator_classes(k, threads).to_dict() for k in args.k]
    _emit_rows(rows, args)
    return EXIT_PASS


def cmd_series(args) -> int:
    table = counting.series_table(args.rank, args.max_k)
    table.check()
    _emit_rows([row.to_dict() for row in table.rows], args)
    return EXIT_PASS


def cmd_psl2(args) -> int:
    m = modular.Mat2.parse(args.matrix)
    word = modular.decompose_ST(m)
    if args.action == "decompose":
        _emit_rows([{"matrix": str(m), "word": str(word)}], args)
        return EXIT_PASS
    fpw = modular.to_free_product_word(m)
    row = {
        "matrix": str(m),
        "word": str(word),
        "free_product_word": modular.modular_free_product().format(fpw.letters),
        "chi": modular.chi(m),
        "in_commutator_subgroup": modular.in_commutator_subgroup_psl2(m),
        "is_commutator": modular.is_commutator_psl2(m),
    }
    _emit_rows([row], args)
    return EXIT_PASS


def cmd_markoff(args) -> int:
    threads = parallel.resolve_threads(args.threads)
    points = modular.markoff_scan(args.max_len, args.trace_bound, args.out, args.resume, threads)
    if not args.out:
        _emit_rows([p.to_dict() for p in points], args)
    return EXIT_PASS


def cmd_verify(args) -> int:
    threads = parallel.resolve_threads(args.threads)
    params = _parse_params(args.param)
    if args.theorem == "chi":
        params.setdefault("seed", args.seed)
    rec = harness.verify(args.theorem, params, threads)
    if args.log:
        harness.append_log([rec], args.log)
    _write(harness.render([rec], args.format), args.out)
    return EXIT_PASS if rec.passed else EXIT_FLAGGED


def cmd_report(args) -> int:
    threads = parallel.resolve_threads(args.threads)
    records = harness.standard_report(threads, args.seed, quick=args.quick)
    if args.log:
        harness.append_log(records, args.log)
    _write(harness.render(records, args.format), args.out)
    return EXIT_PASS if all(rec.passed for rec in records) else EXIT_FLAGGED


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="commgrowth", description=__doc__)
    parser.add_argument("--seed", type=int, default=0, help="seed for randomized checks (default 0)")
    parser.add_argument("--threads", type=int, default=None,
                        help=f"worker processes (default: ${parallel.THREADS_ENV} or CPU count)")
    parser.add_argument("--out", default=None, help="write output here instead of stdout")
    parser.add_argument("--format", choices=("json", "csv"), default="json")
    sub = parser.add_subparsers(dest="command", required=True)

    fg = sub.add_parser("fg", help="free group F_r")
    fg_sub = fg.add_subparsers(dest="action", required=True)
    p = fg_sub.add_parser("classify", help="decide whether a word is a commutator")
    p.add_argument("word", help="letters a, b, ... with capitals as inverses, e.g. abAB")
    p.add_argument("--rank", type=int, default=2)
    p = fg_sub.add_parser("count", help="count commutator classes of length k")
    p.add_argument("--rank", type=int, default=2)
    p.add_argument("--k", type=int, nargs="+", required=True)
    fg.set_defaults(func=cmd_fg)

    fp = sub.add_parser("fp", help="free product G1 * G2 of finite groups")
    fp_sub = fp.add_subparsers(dest="action", required=True)
    for name, help_text in (("classify", "decide whether a word is a commutator"),
                            ("count", "count commutator classes of length k")):
        p = fp_sub.add_parser(name, help=help_text)
        p.add_argument("--g1", default="Z2", help="Z<n>, S3, S4 or a group JSON file")
        p.add_argument("--g2", default="Z3")
        if name == "classify":
            p.add_argument("word", help="dot-separated letters, e.g. 1:1.2:1 or s.r.s.R")
            p.add_argument("--literal", action="store_true", help="also match forms 3/4 as printed")
        else:
            p.add_argument("--k", type=int, nargs="+", required=True)
    fp.set_defaults(func=cmd_fp)

    p = sub.add_parser("series", help="c_k, p_k, class counts and comparison columns")
    p.add_argument("--rank", type=int, default=2)
    p.add_argument("--max-k", type=int, required=True)
    p.set_defaults(func=cmd_series)

    ps = sub.add_parser("psl2", help="matrices in SL2(Z)")
    ps_sub = ps.add_subparsers(dest="action", required=True)
    for name in ("decompose", "classify"):
        p = ps_sub.add_parser(name)
        p.add_argument("matrix", help='entries "a b c d"')
    ps.set_defaults(func=cmd_psl2)

    mk = sub.add_parser("markoff", help="trace triples of commutator witness pairs")
    mk_sub = mk.add_subparsers(dest="action", required=True)
    p = mk_sub.add_parser("scan")
    p.add_argument("--max-len", type=int, required=True)
    p.add_argument("--trace-bound", type=int, required=True)
    p.add_argument("--resume", action="store_true", help="continue from <out>.ckpt")
    p.add_argument("--out", dest="out", default=argparse.SUPPRESS, help="JSON-lines output file")
    mk.set_defaults(func=cmd_markoff)

    p = sub.add_parser("verify", help="run one verification")
    p.add_argument("theorem", choices=harness.CHECK_IDS)
    p.add_argument("param", nargs="*", help="key=value, e.g. r=2 k=8")
    p.add_argument("--log", default=None, help="append the record to this JSON-lines log")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("report", help="run the standard verification set")
    p.add_argument("--quick", action="store_true", help="smaller sizes")
    p.add_argument("--log", default=None)
    p.set_defaults(func=cmd_report)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (InvalidInputError, CapacityError, ConsistencyError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
