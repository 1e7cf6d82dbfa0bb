"""Command-line front end.

    moonexp verify --primes 2..71 --format json
    moonexp series j1 --prec 10
    moonexp ss --prime 71
    moonexp deligne --prime 23 --K 4
    moonexp probe-faber --primes 2..31

Exit codes: 0 all checks pass, 1 mathematical mismatch, 2 usage error,
3 internal consistency or precision failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import sys
from dataclasses import dataclass

from . import __version__
from .arith import is_prime, primes_between
from .deligne import FitError, fit_partial_fractions, residue_class
from .errors import ConsistencyError
from .etaforms import e4_series, delta_series, hauptmodul_jn, j1_series, jn_plus_series, sn_series, tn_series
from .monster import PrimeReport, VerifyConfig, remark12_faber_probe, verify_primes
from .qlaurent import INFINITE, PrecisionError
from .supersingular import ss_j_set

logger = logging.getLogger(__name__)

SCHEMA_VERSION = 1
MAX_PRIME = 271
FORMATS = ("text", "json", "csv")

EXIT_OK, EXIT_MISMATCH, EXIT_USAGE, EXIT_INTERNAL = 0, 1, 2, 3


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    command: str
    primes: list[int]
    window: int = 60
    K: int = 4
    fmt: str = "text"
    out: str | None = None

    def echo(self) -> dict:
        return {"command": self.command, "primes": self.primes, "window": self.window, "K": self.K, "format": self.fmt}


def parse_primes(spec: str, allow_large: bool = False) -> list[int]:
    """'5..71' (inclusive range, primes only) or '2,3,5' (every entry must be prime)."""
    spec = spec.strip()
    try:
        if ".." in spec:
            lo, hi = (int(x) for x in spec.split("..", 1))
            if lo > hi:
                raise UsageError(f"empty range {spec!r}")
            primes = primes_between(lo, hi)
        else:
            primes = [int(x) for x in spec.split(",") if x.strip()]
            bad = [n for n in primes if not is_prime(n)]
            if bad:
                raise UsageError(f"not prime: {', '.join(map(str, bad))}")
    except ValueError as exc:
        raise UsageError(f"cannot parse prime list {spec!r}") from exc
    if not allow_large and any(p > MAX_PRIME for p in primes):
        raise UsageError(f"primes above {MAX_PRIME} need --allow-large")
    return sorted(set(primes))


# ---------------------------------------------------------------- rendering


def _json_val(v):
    return None if v is INFINITE else v


def report_record(r: PrimeReport) -> dict:
    """One result entry, keys in schema order."""
    row = None
    if r.table2_row is not None:
        m744, c984, other = r.table2_row
        row = {"-744": m744, "984": c984, "other": list(other)}
    return {
        "p": r.p,
        "vp_monster": r.vp_monster,
        "term_plus": _json_val(r.term_plus),
        "term_p": _json_val(r.term_p),
        "term_p2": _json_val(r.term_p2),
        "rhs11": r.rhs11,
        "rhs12": r.rhs12,
        "m_p": r.m_p,
        "s1": list(r.s1),
        "s2_pairs": [[[a0, a1], [b0, b1]] for a0, a1, b0, b1 in r.s2_pairs],
        "table2_row": row,
        "deligne": r.deligne,
        "remarks": r.remarks,
        "pass": r.passed,
        "expected_discrepancy": r.expected_discrepancy,
        "table1_ok": r.table1_ok,
        "table2_ok": r.table2_ok,
        "checks": r.checks,
    }


CSV_COLUMNS = [
    "p", "vp_monster", "term_plus", "term_p", "term_p2", "rhs11", "rhs12", "m_p", "s1", "s2_pairs",
    "table2_row", "deligne_K", "deligne_a1_valuations", "deligne_residual_valuation",
    "remarks_r11", "remarks_r13a", "remarks_r13b", "remarks_r13c", "remarks_faber_probe", "pass",
    "expected_discrepancy",
]


def _compact(v) -> str:
    return "" if v is None else json.dumps(v, separators=(",", ":"))


def _csv_row(rec: dict) -> list:
    d = rec["deligne"] or {}
    rm = rec["remarks"]
    return [
        rec["p"], rec["vp_monster"], rec["term_plus"], rec["term_p"], rec["term_p2"], rec["rhs11"], rec["rhs12"],
        rec["m_p"], " ".join(map(str, rec["s1"])), _compact(rec["s2_pairs"]), _compact(rec["table2_row"]),
        d.get("K", ""), _compact(d.get("a1_valuations")), _compact(d.get("residual_valuation")),
        _compact(rm["r11"]), _compact(rm["r13a"]), _compact(rm["r13b"]), _compact(rm["r13c"]),
        _compact(rm["faber_probe"]), _compact(rec["pass"]), _compact(rec["expected_discrepancy"]),
    ]


def _text_report(reports: list[PrimeReport]) -> str:
    lines = [f"{'p':>4} {'v_p(#M)':>8} {'+':>3} {'p':>3} {'p^2':>3} {'rhs11':>6} {'rhs12':>6} {'m_p':>4}  status"]
    for r in reports:
        status = "PASS" if r.passed else "FAIL " + ",".join(r.failed_checks())
        if r.expected_discrepancy and r.passed:
            status += f" (v_p(#M) = {r.vp_monster}; p <= 3 is outside the formula's range)"
        lines.append(
            f"{r.p:>4} {r.vp_monster:>8} {r.term_plus:>3} {r.term_p:>3} {r.term_p2:>3} {r.rhs11:>6} {r.rhs12:>6} {r.m_p:>4}  {status}"
        )
    return "\n".join(lines) + "\n"


def render_report(reports: list[PrimeReport], fmt: str, config_echo: dict | None = None) -> bytes:
    """Deterministic serialisation of verification reports."""
    if fmt not in FORMATS:
        raise UsageError(f"unknown format {fmt!r}")
    records = [report_record(r) for r in sorted(reports, key=lambda r: r.p)]
    if fmt == "json":
        doc = {"schema_version": SCHEMA_VERSION, "config_echo": config_echo or {}, "results": records}
        return (json.dumps(doc, indent=2) + "\n").encode()
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(CSV_COLUMNS)
        for rec in records:
            w.writerow(_csv_row(rec))
        return buf.getvalue().encode()
    return _text_report(reports).encode()


def _emit(data: bytes, out: str | None) -> None:
    if out:
        with open(out, "wb") as fh:
            fh.write(data)
    else:
        sys.stdout.buffer.write(data)
        sys.stdout.flush()


def _emit_doc(doc, fmt: str, out: str | None, text: str, csv_rows: list[list] | None = None) -> None:
    if fmt == "json":
        _emit((json.dumps(doc, indent=2) + "\n").encode(), out)
    elif fmt == "csv" and csv_rows is not None:
        buf = io.StringIO()
        csv.writer(buf, lineterminator="\n").writerows(csv_rows)
        _emit(buf.getvalue().encode(), out)
    else:
        _emit(text.encode(), out)


# ---------------------------------------------------------------- commands


def _cmd_verify(args) -> int:
    primes = parse_primes(args.primes, args.allow_large)
    cfg = RunConfig("verify", primes, args.window, args.K, args.format, args.out)
    reports = verify_primes(primes, VerifyConfig(window=args.window, K=args.K))
    _emit(render_report(reports, args.format, cfg.echo()), args.out)
    return EXIT_OK if all(r.passed for r in reports) else EXIT_MISMATCH


_SERIES = {
    "j1": lambda N, prec: j1_series(prec),
    "e4": lambda N, prec: e4_series(prec),
    "delta": lambda N, prec: delta_series(prec),
    "t": tn_series,
    "J": hauptmodul_jn,
    "s": sn_series,
    "Jplus": jn_plus_series,
}


def _cmd_series(args) -> int:
    if args.name not in ("j1", "e4", "delta") and args.N is None:
        raise UsageError(f"series {args.name} needs --N")
    f = _SERIES[args.name](args.N, args.prec)
    coeffs = f.coeff_list(f.lo, f.prec) if not f.is_zero else []
    doc = {"name": args.name, "N": args.N, "lo": f.lo, "prec": f.prec, "coeffs": coeffs}
    text = "".join(f"{n}\t{c}\n" for n, c in zip(range(f.lo, f.prec), coeffs))
    rows = [["n", "c"]] + [[n, c] for n, c in zip(range(f.lo, f.prec), coeffs)]
    _emit_doc(doc, args.format, args.out, text, rows)
    return EXIT_OK


def _cmd_ss(args) -> int:
    p = args.prime
    if not is_prime(p):
        raise UsageError(f"{p} is not prime")
    data = ss_j_set(p, oracle=False if args.no_oracle else None)
    vals = data.j1_values()
    m744, c984 = (-744) % p, 984 % p
    row = {
        "-744": m744 if m744 in vals else None,
        "984": c984 if c984 in vals else None,
        "other": [v for v in vals if v not in (m744, c984)],
    }
    doc = {
        "p": p,
        "s1": list(data.s1),
        "s2_pairs": [[[x.a, x.b], [y.a, y.b]] for x, y in data.s2],
        "m_p": data.m_p,
        "j1_values": vals,
        "table2_row": row,
    }
    other = ", ".join(map(str, row["other"])) or "-"
    fmt = lambda v: "-" if v is None else str(v)  # noqa: E731
    text = (
        f"p = {p}: s1 = {list(data.s1)}, #S^2 = {data.size - len(data.s1)}, m_p = {data.m_p}\n"
        f"J_1-values: -744 column {fmt(row['-744'])} | 984 column {fmt(row['984'])} | other {other}\n"
    )
    rows = [["p", "-744", "984", "other", "m_p"], [p, fmt(row["-744"]), fmt(row["984"]), " ".join(map(str, row["other"])), data.m_p]]
    _emit_doc(doc, args.format, args.out, text, rows)
    return EXIT_OK


def _cmd_deligne(args) -> int:
    p = args.prime
    if not is_prime(p):
        raise UsageError(f"{p} is not prime")
    try:
        fit = fit_partial_fractions(p, args.K, args.nmax)
    except FitError as exc:
        print(f"fit failed: {exc}; largest K that fits: {exc.best_k}", file=sys.stderr)
        return EXIT_MISMATCH
    terms = [
        {"lift": a, "class": residue_class(a, p), "n": n, "A": fit.signed(a, n), "valuation": _json_val(fit.valuation(a, n))}
        for (a, n) in sorted(fit.A)
    ]
    doc = {
        "p": p,
        "K": fit.K,
        "nmax": fit.nmax,
        "residual_valuation": _json_val(fit.residual_valuation.value),
        "a1_valuations": {str(a): _json_val(v) for a, v in fit.a1_valuations().items()},
        "bound_lifts": {str(k): v for k, v in sorted((fit.bound_lifts() or {}).items())},
        "terms": terms,
    }
    lines = [f"p = {p}, K = {fit.K}, n <= {fit.nmax}, residual valuation {fit.residual_valuation.value}"]
    for t in terms:
        v = "inf" if t["valuation"] is None else t["valuation"]
        lines.append(f"  alpha={t['lift']:>4} ({t['class']:>5}) n={t['n']}  A mod p^K = {t['A']:>12}  v_p = {v}")
    rows = [["lift", "class", "n", "A", "valuation"]] + [[t["lift"], t["class"], t["n"], t["A"], t["valuation"]] for t in terms]
    _emit_doc(doc, args.format, args.out, "\n".join(lines) + "\n", rows)
    return EXIT_OK


def _cmd_probe(args) -> int:
    primes = parse_primes(args.primes, allow_large=True)
    probes = [remark12_faber_probe(p, args.window) for p in primes]
    doc = [{"p": pr.p, **pr.as_dict()} for pr in probes]
    text = "".join(f"p = {pr.p:>2}: m_p = {pr.m_p:>2}  (a) {pr.a:>2}  (b) {pr.b:>2}  (c) {pr.c:>2}\n" for pr in probes)
    rows = [["p", "m_p", "a", "b", "c"]] + [[pr.p, pr.m_p, pr.a, pr.b, pr.c] for pr in probes]
    _emit_doc(doc, args.format, args.out, text, rows)
    return EXIT_OK


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _window(s: str) -> int:
    w = int(s)
    if w < 20:
        raise argparse.ArgumentTypeError("window must be at least 20")
    return w


def _k(s: str) -> int:
    k = int(s)
    if k < 2:
        raise argparse.ArgumentTypeError("K must be at least 2")
    return k


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="moonexp", description="Exact checks of the monster-order valuation formulas.")
    ap.add_argument("--version", action="version", version=__version__)
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(p, default_fmt="text"):
        p.add_argument("--format", choices=FORMATS, default=default_fmt)
        p.add_argument("--out", default=None, help="write here instead of standard output")

    v = sub.add_parser("verify", help="verify both formulas prime by prime")
    v.add_argument("--primes", default="2..71")
    v.add_argument("--window", type=_window, default=60)
    v.add_argument("--K", type=_k, default=4)
    v.add_argument("--allow-large", action="store_true", help=f"permit primes above {MAX_PRIME}")
    common(v)
    v.set_defaults(func=_cmd_verify)

    s = sub.add_parser("series", help="print a q-expansion")
    s.add_argument("name", choices=sorted(_SERIES))
    s.add_argument("--N", type=int, default=None)
    s.add_argument("--prec", type=int, default=10)
    common(s)
    s.set_defaults(func=_cmd_series)

    ss = sub.add_parser("ss", help="supersingular locus")
    ss.add_argument("--prime", type=int, required=True)
    ss.add_argument("--no-oracle", action="store_true", help="skip the point-count cross-check")
    common(ss)
    ss.set_defaults(func=_cmd_ss)

    d = sub.add_parser("deligne", help="partial-fraction fit of p J_1|U_p")
    d.add_argument("--prime", type=int, required=True)
    d.add_argument("--K", type=_k, default=4)
    d.add_argument("--nmax", type=int, default=None)
    common(d)
    d.set_defaults(func=_cmd_deligne)

    pf = sub.add_parser("probe-faber", help="valuations of j|V_p - Phi_p(j) under three readings")
    pf.add_argument("--primes", default="2..31")
    pf.add_argument("--window", type=_window, default=60)
    common(pf)
    pf.set_defaults(func=_cmd_probe)
    return ap


def run_command(argv: list[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ConsistencyError, PrecisionError) as exc:
        print(f"internal consistency failure: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    except ValueError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def main() -> None:
    sys.exit(run_command())
