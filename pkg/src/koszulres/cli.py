"""Command-line front end.

Exit codes: 0 success, 1 a check failed, 2 the resultant is zero,
3 a hypothesis could not be certified, 64 usage or input error.
Results go to stdout (deterministic for a given input and seed); timing and
diagnostics go to stderr.
"""

from __future__ import annotations

import argparse
import json
import logging
import math
import sys
import time
from fractions import Fraction

from .arith import ZZ, is_prime
from .interp import HypothesisFailed, interpolation_slice, is_surjective, ist_degree_check, res_estimate_demo
from .modslice import RdegUndefined, VerificationFailed, hilbert_function, hilbert_polynomial, rdeg, rdim
from .multiplicity import HypothesisNotCertified, check_chardin, check_order_bound
from .problem import ProblemError, load_problem
from .resultant import HigherHomologyNonzero, LengthMismatch, StabilizationFailure, mresultant

EXIT_OK, EXIT_FAIL, EXIT_ZERO, EXIT_HYPOTHESIS, EXIT_USAGE = 0, 1, 2, 3, 64


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        sys.exit(EXIT_USAGE)


def _degree_arg(text: str) -> tuple[int, ...]:
    try:
        out = tuple(int(x) for x in text.replace("(", "").replace(")", "").split(",") if x.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"malformed multidegree {text!r}") from None
    if not out or min(out) < 0:
        raise argparse.ArgumentTypeError(f"malformed multidegree {text!r}")
    return out


def _prime_arg(text: str) -> int:
    try:
        p = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"{text!r} is not an integer") from None
    if not is_prime(p):
        raise argparse.ArgumentTypeError(f"{p} is not prime")
    return p


def _fmt(x) -> str:
    if isinstance(x, bool):
        return "yes" if x else "no"
    if isinstance(x, float) and math.isinf(x):
        return "inf"
    if isinstance(x, tuple):
        return "(" + ",".join(str(v) for v in x) + ")"
    if isinstance(x, list):
        return " ".join(_fmt(v) for v in x)
    return str(x)


def _jsonable(x):
    if isinstance(x, float) and math.isinf(x):
        return "inf"
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (int, str, bool)) or x is None:
        return x
    return str(x)


def _emit(rows: list[tuple[str, object]], as_json: bool, out=None):
    out = out or sys.stdout
    if as_json:
        out.write(json.dumps({k: _jsonable(v) for k, v in rows}, indent=2) + "\n")
        return
    width = max((len(k) for k, _ in rows), default=0)
    for k, v in rows:
        out.write(f"{k.ljust(width)}  {_fmt(v)}\n")


def _need_sequence(problem):
    if problem.sequence is None:
        raise ProblemError("this command needs a 'sequence' block")
    if problem.sequence.shape != problem.shape:
        raise ProblemError("sequence shape mismatch")
    return problem.sequence


def cmd_res(args) -> int:
    problem = load_problem(args.file)
    F = _need_sequence(problem)
    res = mresultant(problem.module, F, nu=args.nu_override)
    value = "ZERO" if res.vanishes else (abs(res.value) if isinstance(res.value, (int, Fraction)) else res.value)
    _emit(
        [
            ("resultant", value),
            ("convention", "defined up to sign; absolute value shown"),
            ("nu", res.nu),
            ("stabilized", res.stabilized),
            ("checked", res.checked_nus),
        ],
        args.json,
    )
    return EXIT_ZERO if res.vanishes else EXIT_OK


def cmd_ordp(args) -> int:
    problem = load_problem(args.file)
    F = _need_sequence(problem)
    if F.ring is not ZZ:
        raise ProblemError("ordp needs integer coefficients (ring: Z)")
    rep = check_chardin(F, problem.module, args.p)
    value = "ZERO" if rep.resultant.vanishes else abs(rep.resultant.value)
    _emit(
        [("p", rep.p), ("resultant", value), ("N", rep.N), ("ord_p", rep.ord_p), ("pass", rep.passed),
         ("hypothesis", "certified on window")],
        args.json,
    )
    return EXIT_OK if rep.passed else EXIT_FAIL


def cmd_ordt(args) -> int:
    problem = load_problem(args.file)
    F = _need_sequence(problem)
    claimed = args.claimed
    if claimed is None:
        claimed = problem.interp.conditions() if problem.interp is not None else 0
    rep = check_order_bound(problem.module, F, claimed, args.directions, seed=args.seed)
    rows = [("seed", args.seed), ("claimed", claimed), ("directions", args.directions)]
    for k, r in enumerate(rep.reports):
        rows.append((f"order[{k}]", r.order))
    rows += [
        ("min_order", min(rep.orders) if rep.orders else "none"),
        ("degenerate", rep.degenerate),
        ("pass", rep.passed),
    ]
    _emit(rows, args.json)
    return EXIT_OK if rep.passed else EXIT_FAIL


def cmd_hilbert(args) -> int:
    problem = load_problem(args.file)
    M = problem.module
    rows = []
    if args.at is not None:
        if len(args.at) != M.shape.q:
            raise ProblemError(f"--at needs {M.shape.q} components")
        rows.append(("hilbert_function", hilbert_function(M, args.at)))
    if args.poly or args.at is None:
        rows.append(("hilbert_polynomial", str(hilbert_polynomial(M))))
    rows.append(("rdim", rdim(M)))
    try:
        rows.append(("rdeg", rdeg(M)))
    except RdegUndefined:
        rows.append(("rdeg", "undefined"))
    _emit(rows, args.json)
    return EXIT_OK


def cmd_interp(args) -> int:
    problem = load_problem(args.file)
    spec = problem.interp
    if spec is None:
        raise ProblemError("this command needs an 'interp' block")
    degrees = problem.interp_degrees or [spec.d_ev()] * 3
    rows = [("points", len(spec.points)), ("T", spec.T), ("conditions", spec.conditions())]
    for d in dict.fromkeys(degrees):
        rows.append((f"surjective{_fmt(d)}", is_surjective(spec, d)))
        rows.append((f"kernel_dim{_fmt(d)}", len(interpolation_slice(spec, d))))
    deg = ist_degree_check(spec)
    rows.append(("degree_expected", deg.expected))
    rows.append(("degree_measured", [v for v in deg.measured.values()]))
    ok = deg.passed
    rows.append(("degree_pass", deg.passed))
    if args.demo:
        rep = res_estimate_demo(spec, degrees, trials=args.directions, samples=args.samples, seed=args.seed)
        rows.append(("seed", args.seed))
        rows.append(("claimed", rep.claimed))
        for k, s in enumerate(rep.samples):
            rows.append((f"sample[{k}].orders", s.report.orders))
            rows.append((f"sample[{k}].pass", s.report.passed))
        ok = ok and rep.passed
        rows.append(("demo_pass", rep.passed))
    _emit(rows, args.json)
    return EXIT_OK if ok else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("file", help="problem file (YAML or JSON)")
    common.add_argument("--json", action="store_true", help="machine-readable output")
    common.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")

    parser = _Parser(prog="koszulres", description="Exact multigraded resultants and multiplicity checks.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("res", parents=[common], help="resultant of the sequence on the module")
    p.add_argument("--nu-override", type=_degree_arg, default=None, help="start at this multidegree, e.g. 3,3")
    p.set_defaults(func=cmd_res)

    p = sub.add_parser("ordp", parents=[common], help="p-adic valuation against the zero count mod p")
    p.add_argument("--p", type=_prime_arg, required=True)
    p.set_defaults(func=cmd_ordp)

    p = sub.add_parser("ordt", parents=[common], help="t-adic orders along random directions")
    p.add_argument("--directions", type=int, default=5)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--claimed", type=int, default=None)
    p.set_defaults(func=cmd_ordt)

    p = sub.add_parser("hilbert", parents=[common], help="Hilbert function value or polynomial")
    p.add_argument("--at", type=_degree_arg, default=None)
    p.add_argument("--poly", action="store_true")
    p.set_defaults(func=cmd_hilbert)

    p = sub.add_parser("interp", parents=[common], help="interpolation slices and the order estimate")
    p.add_argument("--demo", action="store_true")
    p.add_argument("--samples", type=int, default=2)
    p.add_argument("--directions", type=int, default=3)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_interp)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, stream=sys.stderr)
    start = time.perf_counter()
    try:
        code = args.func(args)
    except ProblemError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (HigherHomologyNonzero, HypothesisNotCertified, HypothesisFailed, LengthMismatch,
            StabilizationFailure, VerificationFailed) as exc:
        print(f"hypothesis failure: {exc}", file=sys.stderr)
        return EXIT_HYPOTHESIS
    print(f"elapsed: {time.perf_counter() - start:.3f}s", file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
