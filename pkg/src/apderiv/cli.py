"""Command-line front end.

Exit codes: 0 ok, 2 invalid input, 3 size guard, 4 verification failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Sequence

from . import __version__
from .antideriv import (
    anti_derivatives,
    construct_k0,
    construct_with_n_antis,
    count_anti,
    count_anti_rational,
    render_split,
)
from .core import INF, PSplit, check_prime, d_full, dp, dp_split, parse_number
from .errors import ApderivError, TooLarge, VerificationFailure
from .oracle import check_inc_prediction, compare_with_analytic, sweep_invert
from .orbit import OrbitKind, classify, inc_profile, ord_sequence, period, reverse_construct

EXIT_OK, EXIT_INPUT, EXIT_SIZE, EXIT_VERIFY = 0, 2, 3, 4


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _inf(v):
    return "inf" if v == INF else v


def _number_text(v) -> str:
    if isinstance(v, PSplit):
        r = render_split(v)
        return str(r) if isinstance(r, int) else r["form"]
    return str(v)


def _number_json(v):
    return render_split(v) if isinstance(v, PSplit) else v


def _int_arg(text: str) -> int:
    try:
        return int(text)
    except ValueError:
        raise UsageError(f"expected an integer, got {text!r}") from None


# -- subcommands: each returns (payload, human text, exit code) ---------------


def cmd_dp(a):
    x = parse_number(a.x, a.p)
    if isinstance(x, PSplit):
        r = dp_split(x)
        r = 0 if r is None else r
    else:
        r = dp(a.p, x)
    return {"p": a.p, "x": _number_json(x), "dp": _number_json(r)}, _number_text(r)


def cmd_d(a):
    x = parse_number(a.x)
    if isinstance(x, PSplit):
        x = x.value()
    r = d_full(x)
    return {"x": x, "d": r}, str(r)


def cmd_ord_seq(a):
    seq = ord_sequence(a.p, parse_number(a.x, a.p), a.terms)
    terms = [_inf(t) for t in seq.terms]
    return {"p": a.p, "terms": terms, "truncated_at": seq.truncated_at}, " ".join(map(str, terms))


def cmd_inc_profile(a):
    prof = inc_profile(a.p, _int_arg(a.ell))
    return prof.to_json(), prof.to_text()


def cmd_period(a):
    r = period(a.p, parse_number(a.x, a.p))
    return {"p": a.p, "period": r}, str(r)


def cmd_classify(a):
    cls = classify(a.p, parse_number(a.x, a.p))
    payload = {"p": a.p, "class": cls.kind.value}
    human = cls.kind.value
    if cls.kind is OrbitKind.FIXED_POINT:
        payload["value"] = None if cls.value is None else _number_json(cls.value)
        if cls.value is not None:
            human += f" {_number_text(cls.value)}"
    return payload, human


def cmd_reverse(a):
    ell = reverse_construct(a.p, [_int_arg(t) for t in a.i])
    return {"p": a.p, "i": [int(t) for t in a.i], "ell": ell}, str(ell)


def cmd_anti(a):
    s = anti_derivatives(a.p, parse_number(a.y, a.p))
    payload = s.to_json()
    lines = [f"count={s.count}"]
    for m, c in zip(payload["members"], s.c_values):
        shown = m.get("value", m.get("form"))
        lines.append(f"{m['a']}*{a.p}^({m['b']}*{a.p}^{m['k']}) = {shown}  c={c}")
    return payload, "\n".join(lines)


def cmd_count_anti(a):
    r = count_anti(a.p, parse_number(a.y, a.p))
    return {"p": a.p, "count": r}, str(r)


def cmd_count_anti_rational(a):
    r = count_anti_rational(a.p, parse_number(a.y, a.p))
    return {"p": a.p, "count": r}, str(r)


def cmd_construct(a):
    if a.m is not None:
        if a.k0 is not None:
            raise UsageError("give either --k0 or --m, not both")
        k0 = construct_k0(a.p, a.m)
    else:
        k0 = 0 if a.k0 is None else a.k0
    res = construct_with_n_antis(a.p, a.n, k0)
    payload = res.to_json()
    human = (f"x0={res.x0}\ny={_number_text(res.y)}\n"
             f"b0={payload['b0']}\na0={payload['a0']}\ncount={res.count}")
    return payload, human


def cmd_verify_sweep(a):
    report = compare_with_analytic(sweep_invert(a.p, a.range, jobs=a.jobs))
    if a.out:
        with open(a.out, "w", encoding="utf-8") as fh:
            report.write_jsonl(fh)
    payload = {
        "p": a.p,
        "range": a.range,
        "histogram": {str(n): c for n, c in report.histogram.items()},
        "mismatches": report.mismatches,
    }
    ok = not report.mismatches
    human = (f"p={a.p} range={a.range} mismatches={len(report.mismatches)} "
             + " ".join(f"i={n}:{c}" for n, c in report.histogram.items()))
    return payload, human, EXIT_OK if ok else EXIT_VERIFY


def cmd_verify_inc(a):
    chk = check_inc_prediction(a.p, _int_arg(a.ell), a.terms)
    payload = {"p": a.p, "terms": a.terms, "verdict": chk.verdict,
               "first_divergence": chk.first_divergence}
    human = chk.verdict if chk.passed else f"FAIL at {chk.first_divergence}"
    return payload, human, EXIT_OK if chk.passed else EXIT_VERIFY


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--json", action="store_true", help="emit a JSON payload")
    with_p = _Parser(add_help=False, parents=[common])
    with_p.add_argument("--p", type=int, required=True, help="the prime")

    parser = _Parser(prog="apderiv", description="Arithmetic partial derivative toolkit")
    parser.add_argument("--version", action="version", version=f"apderiv {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name, func, parents, help_text):
        sp = sub.add_parser(name, parents=parents, help=help_text)
        sp.set_defaults(func=func)
        return sp

    add("dp", cmd_dp, [with_p], "D_p(x)").add_argument("x")
    add("d", cmd_d, [common], "full arithmetic derivative D(x)").add_argument("x")
    sp = add("ord-seq", cmd_ord_seq, [with_p], "ord_p sequence of x")
    sp.add_argument("x")
    sp.add_argument("--terms", type=int, default=10)
    add("inc-profile", cmd_inc_profile, [with_p], "predicted inc_p structure of p^ell").add_argument("ell")
    add("period", cmd_period, [with_p], "eventual period of the ord_p sequence").add_argument("x")
    add("classify", cmd_classify, [with_p], "eventual behaviour of the D_p orbit").add_argument("x")
    add("reverse", cmd_reverse, [with_p], "ell realizing -1 runs i_0 .. i_N").add_argument("i", nargs="+")
    add("anti", cmd_anti, [with_p], "all integral anti-partial derivatives").add_argument("y")
    add("count-anti", cmd_count_anti, [with_p], "number of integral anti-partial derivatives").add_argument("y")
    add("count-anti-rational", cmd_count_anti_rational, [with_p],
        "number of rational anti-partial derivatives").add_argument("y")
    sp = add("construct", cmd_construct, [with_p], "integer whose D_p has exactly n anti-derivatives")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--k0", type=int)
    sp.add_argument("--m", type=int, help="use k0 = p + p^2 + ... + p^m")
    sp = add("verify-sweep", cmd_verify_sweep, [with_p], "brute-force check of anti-derivatives")
    sp.add_argument("--range", type=int, required=True)
    sp.add_argument("--jobs", type=int, default=1)
    sp.add_argument("--out", help="write the sweep as JSON lines to this file")
    sp = add("verify-inc", cmd_verify_inc, [with_p], "check the inc profile against the ord recursion")
    sp.add_argument("ell")
    sp.add_argument("--terms", type=int, default=20)
    return parser


def run(argv: Sequence[str] | None = None, out=None, err=None) -> int:
    out = sys.stdout if out is None else out
    err = sys.stderr if err is None else err
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if getattr(args, "p", None) is not None:
            check_prime(args.p)
        result = args.func(args)
    except UsageError as exc:
        print(f"apderiv: error: {exc}", file=err)
        return EXIT_INPUT
    except TooLarge as exc:
        print(f"apderiv: size guard: {exc}", file=err)
        return EXIT_SIZE
    except VerificationFailure as exc:
        print(f"apderiv: verification failed: {exc}", file=err)
        return EXIT_VERIFY
    except ApderivError as exc:
        print(f"apderiv: error: {exc}", file=err)
        return EXIT_INPUT
    payload, human, *rest = result
    code = rest[0] if rest else EXIT_OK
    if args.json:
        print(json.dumps(payload, sort_keys=True), file=out)
    else:
        print(human, file=out)
    return code


def main() -> None:
    if hasattr(sys, "set_int_max_str_digits"):
        sys.set_int_max_str_digits(0)
    sys.stdout.reconfigure(line_buffering=True)
    sys.exit(run())
