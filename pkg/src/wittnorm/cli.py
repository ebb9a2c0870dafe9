"""Command-line front end.

Subcommands mirror the library layers: `witt` for vector arithmetic,
`mackey` for functor construction and validation, `polywitt` for the
two-pipeline comparison, `drw` for tower builds and axiom checks,
`trace` for exchange-axiom reports, and `run` for the verification
suites.  Exit code 0 means everything passed, 2 means a check failed,
3 means the invocation itself was invalid.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction
from typing import List, Optional

from .drw import (
    build_drw,
    check_fv_axioms,
    mixed_char_weight_piece,
    weight_down,
    weight_total,
    weight_up,
)
from .mackey import (
    augmentation_cokernel,
    base_change_to_witt,
    box_with_permutation,
    constant_mackey,
    fixed_point_mackey,
    orbit_gmodule,
    permutation_mackey,
    regular_gmodule,
    validate_mackey,
    witt_mackey,
    witt_mackey_resolution,
    zero_mackey,
)
from .polywitt import DEFAULT_CAP, FpVectorSpace, compare_pipelines
from .rings import GFPolyRing, QuotPolyRing, ZModRing, ZRing
from .serialize import (
    base_elt_json,
    dumps_value,
    emit,
    group_json,
    mackey_json,
    matrix_json,
    weight_str,
    witt_json,
)
from .suites import SUITE_IDS, run_suites
from .traces import (
    NormTraceTheory,
    OrbitTraceTheory,
    RawPowerTraceTheory,
    negative_raw_power,
    polywitt_trace,
    run_axiom_checks,
)
from .witt import WittRing


class _Parser(argparse.ArgumentParser):
    # configuration errors must exit 3, not argparse's default 2
    def error(self, message):
        self.print_usage(sys.stderr)
        raise SystemExit(3)


def _env_cap() -> int:
    raw = os.environ.get("WITTNORM_CAP")
    if raw is None:
        return DEFAULT_CAP
    try:
        return int(raw)
    except ValueError:
        raise SystemExit(3)


def _add_common(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--json", metavar="PATH", default=None,
                     help="write the JSON document to PATH ('-' for stdout)")
    sub.add_argument("--seed", type=int, default=0)
    sub.add_argument("--cap", type=int, default=None,
                     help="tensor dimension cap (default: WITTNORM_CAP or 4096)")
    sub.add_argument("--jobs", type=int, default=1)
    sub.add_argument("--timings", action="store_true",
                     help="include wall times (output no longer byte-stable)")


def _write(doc_text: str, path: Optional[str]) -> None:
    if path is None or path == "-":
        sys.stdout.write(doc_text)
    else:
        with open(path, "w") as fh:
            fh.write(doc_text)


def _parse_range(text: str) -> set:
    vals = set()
    for part in text.split(","):
        if ".." in part:
            lo, hi = part.split("..", 1)
            vals.update(range(int(lo), int(hi) + 1))
        else:
            vals.add(int(part))
    return vals


# ---------------------------------------------------------------------------
# witt


_RING_CHOICES = ("z", "fp", "zp2", "fpx")


def _base_ring(name: str, p: int):
    if name == "z":
        return ZRing()
    if name == "fp":
        return ZModRing(p)
    if name == "zp2":
        return ZModRing(p * p)
    if name == "fpx":
        return GFPolyRing(p)
    raise SystemExit(3)


def _parse_elt(raw, ring):
    if isinstance(raw, list):
        return tuple(int(c) for c in raw)
    return ring.from_int(int(raw))


def _cmd_witt(args) -> int:
    ring = _base_ring(args.ring, args.p)
    w = WittRing(args.p, args.r, ring)
    payload = json.loads(args.infile)
    if args.verb in ("add", "mul"):
        a = w.vector([_parse_elt(c, ring) for c in payload[0]])
        b = w.vector([_parse_elt(c, ring) for c in payload[1]])
        out = a + b if args.verb == "add" else a * b
    elif args.verb == "teich":
        out = w.teichmuller(_parse_elt(payload, ring))
    else:
        vec = w.vector([_parse_elt(c, ring) for c in payload])
        if args.verb == "F":
            out = w.frobenius(vec)
        elif args.verb == "V":
            out = w.verschiebung(vec)
        else:
            out = w.restrict(vec)
    _write(dumps_value(witt_json(out)), args.json)
    return 0


# ---------------------------------------------------------------------------
# mackey


_MACKEY_KINDS = ("constant", "witt", "zero", "permutation",
                 "fixed-regular", "fixed-orbit")


def _build_mackey(args):
    p, n = args.p, args.n
    if args.kind == "constant":
        return constant_mackey(p, n)
    if args.kind == "witt":
        return witt_mackey(p, n)
    if args.kind == "zero":
        return zero_mackey(p, n)
    if args.kind == "permutation":
        orbits = [int(x) for x in (args.orbits or "0").split(",")]
        return permutation_mackey(p, n, orbits)
    if args.kind == "fixed-regular":
        return fixed_point_mackey(regular_gmodule(p, n))
    if args.kind == "fixed-orbit":
        return fixed_point_mackey(orbit_gmodule(p, n, args.h))
    raise SystemExit(3)


def _cmd_mackey(args) -> int:
    if args.verb == "resolve":
        res = witt_mackey_resolution(args.p, args.r)
        rep = res.check()
        doc = {
            "kind": "resolution-report",
            "p": str(args.p),
            "r": str(args.r),
            "exact": rep.ok,
            "entries": [{"check": name, "level": str(level), "ok": ok}
                        for name, level, ok in rep.entries],
        }
        _write(dumps_value(doc), args.json)
        return 0 if rep.ok else 2
    m = _build_mackey(args)
    if args.verb == "validate":
        validate_mackey(m)
        _write(dumps_value({"kind": "mackey-validation", "ok": True}), args.json)
        return 0
    if args.verb == "boxperm":
        m = box_with_permutation(m, args.k)
    elif args.verb == "q":
        m = augmentation_cokernel(m)
    elif args.verb == "witt-basechange":
        m = base_change_to_witt(m)
    _write(dumps_value(mackey_json(m)), args.json)
    return 0


# ---------------------------------------------------------------------------
# polywitt


def _cmd_polywitt(args) -> int:
    cap = args.cap if args.cap is not None else _env_cap()
    rep = compare_pipelines(FpVectorSpace(args.p, args.d), args.r, cap=cap)
    _write(dumps_value(rep.to_dict(with_timings=args.timings)), args.json)
    return 0 if rep.passed else 2


# ---------------------------------------------------------------------------
# drw


def _drw_build_doc(args) -> dict:
    tower = build_drw(args.p, args.r, args.vars, args.weight_cap)
    keys = sorted(tower.pieces,
                  key=lambda k: (k[0], k[1], weight_total(k[2]), k[2]))
    pieces = []
    operators = []
    for key in keys:
        s, deg, w = key
        piece = tower.pieces[key]
        if not piece.symbols:
            continue
        pieces.append({
            "level": str(s),
            "degree": str(deg),
            "weight": weight_str(w),
            "invariant_factors": group_json(piece.group)["invariant_factors"],
            "symbols": [v.label for v in tower.symbol_views(s, deg, w)],
        })
        targets = [
            ("d", (s, deg + 1, w), lambda: tower.d_hom(s, deg, w)),
            ("v", (s + 1, deg, weight_down(w, args.p)), lambda: tower.v_hom(s, deg, w)),
        ]
        if s >= 2:
            targets.append(("f", (s - 1, deg, weight_up(w, args.p)),
                            lambda: tower.f_hom(s, deg, w)))
            targets.append(("r", (s - 1, deg, w), lambda: tower.r_hom(s, deg, w)))
        for tag, target_key, build in targets:
            if target_key not in tower.pieces:
                continue
            hom = build()
            operators.append({
                "op": tag,
                "from": {"level": str(s), "degree": str(deg), "weight": weight_str(w)},
                "matrix": matrix_json(hom.matrix)["matrix"],
            })
    return {"kind": "drw-tower", "p": str(args.p), "r": str(args.r),
            "vars": str(args.vars), "weight_cap": str(args.weight_cap),
            "pieces": pieces, "operators": operators}


def _drw_mixed_doc(args) -> dict:
    pieces = []
    for num in range(args.weight_cap + 1):
        for s in range(1, args.r + 1):
            g = mixed_char_weight_piece(args.p, args.r, args.char_exp, s, num)
            pieces.append({
                "level": str(s),
                "degree": "0",
                "weight": weight_str((Fraction(num),)),
                "invariant_factors": group_json(g)["invariant_factors"],
            })
    return {"kind": "drw-degree-zero-mixed", "p": str(args.p), "r": str(args.r),
            "char_exp": str(args.char_exp), "weight_cap": str(args.weight_cap),
            "pieces": pieces}


def _cmd_drw(args) -> int:
    if args.verb == "build":
        if args.base == "zpN":
            doc = _drw_mixed_doc(args)
        else:
            doc = _drw_build_doc(args)
        _write(dumps_value(doc), args.json)
        return 0
    tower = build_drw(args.p, args.r, args.vars, args.weight_cap)
    rep = check_fv_axioms(tower, seed=args.seed)
    doc = {
        "kind": "drw-axiom-report",
        "p": str(args.p), "r": str(args.r),
        "axioms": [{"axiom": name, "ok": ok, "witness": wit}
                   for name, ok, wit in rep.entries],
        "ok": rep.ok,
    }
    _write(dumps_value(doc), args.json)
    return 0 if rep.ok else 2


# ---------------------------------------------------------------------------
# trace


def _cmd_trace(args) -> int:
    if args.theory == "polywitt":
        data = polywitt_trace(args.p, args.r, rank_cap=args.rank_cap,
                              seed=args.seed)
        reports, ok = data.reports, data.descended
        extra = {"m": str(data.m), "descended": data.descended}
    else:
        cls = OrbitTraceTheory if args.theory == "orbit" else RawPowerTraceTheory
        theory = cls(args.m, args.p, rank_cap=args.rank_cap)
        reports = run_axiom_checks(theory, seed=args.seed)
        if args.theory == "orbit":
            ok = all(r.ok for r in reports)
            extra = {}
        else:
            neg = negative_raw_power(args.m, args.p, rank_cap=args.rank_cap)
            ok = neg.passed
            extra = {"counterexample": list(neg.found) if neg.found else None,
                     "counterexample_found": neg.passed}
    doc = {
        "kind": "trace-report",
        "theory": args.theory,
        "axioms": [{"axiom": r.axiom, "ok": r.ok, "checked": str(r.checked),
                    "witness": r.witness} for r in reports],
        "ok": ok,
    }
    doc.update(extra)
    _write(dumps_value(doc), args.json)
    return 0 if ok else 2


# ---------------------------------------------------------------------------
# run


def _csv_multi(reports, timings: bool) -> str:
    import csv as _csv
    import io
    buf = io.StringIO()
    cols = ["suite", "key", "ok", "skipped", "witness"] + (["ms"] if timings else [])
    w = _csv.writer(buf, lineterminator="\n")
    w.writerow(cols)
    for rep in reports:
        for r in rep.records:
            row = [rep.suite, r.key, str(r.ok).lower(), str(r.skipped).lower(),
                   r.witness or ""]
            if timings:
                row.append(str(r.ms))
            w.writerow(row)
    return buf.getvalue()


def _cmd_run(args) -> int:
    ids = args.suite
    for sid in ids:
        if sid != "all" and sid not in SUITE_IDS:
            sys.stderr.write(f"unknown suite {sid!r}; known: "
                             f"{', '.join(SUITE_IDS)} or all\n")
            return 3
    grid = {}
    for name in ("p", "d", "r", "m"):
        raw = getattr(args, name)
        if raw is not None:
            try:
                grid[name] = _parse_range(raw)
            except ValueError:
                sys.stderr.write(f"bad range for --{name}: {raw!r}\n")
                return 3
    cap = args.cap if args.cap is not None else _env_cap()
    reports = run_suites(ids, seed=args.seed, cap=cap, jobs=args.jobs,
                         grid=grid or None)
    for rep in reports:
        sys.stdout.write(emit(rep, "text", timings=args.timings))
    if args.json:
        from .serialize import report_dict
        if len(reports) == 1:
            doc = report_dict(reports[0], timings=args.timings)
        else:
            doc = [report_dict(r, timings=args.timings) for r in reports]
        _write(json.dumps(doc, sort_keys=True, indent=2) + "\n", args.json)
    if args.csv:
        _write(_csv_multi(reports, args.timings), args.csv)
    return 0 if all(r.ok for r in reports) else 2


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    top = _Parser(prog="wittnorm",
                  description="Exact computations with Witt vectors, cyclic "
                              "Mackey functors, polynomial Witt vectors, "
                              "truncated de Rham-Witt towers, and trace axioms.")
    subs = top.add_subparsers(dest="command", required=True)

    w = subs.add_parser("witt", help="Witt vector arithmetic")
    w.add_argument("verb", choices=("add", "mul", "F", "V", "R", "teich"))
    w.add_argument("--p", type=int, required=True)
    w.add_argument("--r", type=int, required=True)
    w.add_argument("--ring", choices=_RING_CHOICES, default="z")
    w.add_argument("--in", dest="infile", required=True,
                   help="JSON component tuples (array, or array pair for add/mul)")
    _add_common(w)
    w.set_defaults(fn=_cmd_witt)

    m = subs.add_parser("mackey", help="cyclic Mackey functors")
    m.add_argument("verb", choices=("build", "validate", "resolve", "boxperm",
                                    "q", "witt-basechange"))
    m.add_argument("--kind", choices=_MACKEY_KINDS, default="constant")
    m.add_argument("--p", type=int, default=2)
    m.add_argument("--n", type=int, default=1)
    m.add_argument("--r", type=int, default=2, help="resolve only")
    m.add_argument("--h", type=int, default=0, help="orbit stabilizer level")
    m.add_argument("--k", type=int, default=0, help="boxperm orbit level")
    m.add_argument("--orbits", default=None, help="comma-separated orbit levels")
    _add_common(m)
    m.set_defaults(fn=_cmd_mackey)

    pw = subs.add_parser("polywitt", help="polynomial Witt vector pipelines")
    pw.add_argument("verb", choices=("compare",))
    pw.add_argument("--p", type=int, required=True)
    pw.add_argument("--d", type=int, required=True)
    pw.add_argument("--r", type=int, required=True)
    _add_common(pw)
    pw.set_defaults(fn=_cmd_polywitt)

    d = subs.add_parser("drw", help="truncated de Rham-Witt towers")
    d.add_argument("verb", choices=("build", "check"))
    d.add_argument("--p", type=int, required=True)
    d.add_argument("--r", type=int, required=True)
    d.add_argument("--vars", type=int, default=1)
    d.add_argument("--weight-cap", type=int, default=8)
    d.add_argument("--base", choices=("fp", "zpN"), default="fp",
                   help="zpN emits the degree-zero weight pieces over Z/p^N")
    d.add_argument("--char-exp", type=int, default=2,
                   help="N for --base zpN")
    _add_common(d)
    d.set_defaults(fn=_cmd_drw)

    t = subs.add_parser("trace", help="trace exchange axioms")
    t.add_argument("verb", choices=("check",))
    t.add_argument("--theory", choices=("orbit", "raw", "polywitt"),
                   required=True)
    t.add_argument("--p", type=int, default=2,
                   help="base characteristic (0 for the integers)")
    t.add_argument("--r", type=int, default=2, help="polywitt truncation")
    t.add_argument("--m", type=int, default=2, help="tensor power")
    t.add_argument("--rank-cap", type=int, default=2)
    _add_common(t)
    t.set_defaults(fn=_cmd_trace)

    r = subs.add_parser("run", help="verification suites")
    r.add_argument("suite", nargs="+",
                   help=f"one or more of: {', '.join(SUITE_IDS)}, all")
    r.add_argument("--p", default=None, help="grid filter, e.g. 2 or 2..3")
    r.add_argument("--d", default=None)
    r.add_argument("--r", default=None)
    r.add_argument("--m", default=None)
    r.add_argument("--csv", metavar="PATH", default=None)
    _add_common(r)
    r.set_defaults(fn=_cmd_run)

    return top


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.fn(args)
    except (ValueError, KeyError, json.JSONDecodeError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 3


if __name__ == "__main__":
    raise SystemExit(main())
