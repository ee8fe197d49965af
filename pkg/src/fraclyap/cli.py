"""Command line front end.

Exit codes: 0 ok, 1 verification failure, 2 invalid arguments or domain,
3 low-confidence convergence, 4 I/O error, 5 empty result set.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from concurrent.futures import ProcessPoolExecutor

from fraclyap import verify
from fraclyap.domain import FracOrders, Interval
from fraclyap.errors import DomainError, FracLyapError
from fraclyap.greenkernel import DEFAULT_KERNEL_TOL, DIAGONAL_GUARD, green_eval
from fraclyap.spectral import eigen_lower_bound, lyapunov_bound, smallest_eigenvalue

EXIT_OK = 0
EXIT_VERIFY = 1
EXIT_USAGE = 2
EXIT_LOW_CONFIDENCE = 3
EXIT_IO = 4
EXIT_EMPTY = 5

TOL_ENV = "FRACLYAP_TOL"
CSV_HEADER = "alpha,beta,a,b,n,lambda_min,eigen_bound,ratio,refinement_gap,satisfied"


def fmt_exact(x) -> str:
    """17 significant digits; floats always keep a decimal point or exponent."""
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, int):
        return str(x)
    s = format(float(x), ".17g")
    if not any(c in s for c in ".eEn"):
        s += ".0"
    return s


def fmt_human(x: float) -> str:
    """7 significant digits, keeping a trailing ``.0`` on whole numbers."""
    s = format(float(x), ".7g")
    if not any(c in s for c in ".eEn"):
        s += ".0"
    return s


def dumps_report(fields: dict) -> str:
    """Canonical JSON: insertion-ordered keys, numbers via :func:`fmt_exact`."""
    parts = []
    for key, value in fields.items():
        if isinstance(value, str):
            text = json.dumps(value)
        else:
            text = fmt_exact(value)
        parts.append(f"{json.dumps(key)}: {text}")
    return "{" + ", ".join(parts) + "}"


def _env_tol() -> float:
    raw = os.environ.get(TOL_ENV)
    if raw is None:
        return DEFAULT_KERNEL_TOL
    try:
        tol = float(raw)
    except ValueError:
        raise DomainError(f"{TOL_ENV} must be a number, got {raw!r}") from None
    if not (1e-14 <= tol < 1.0):
        raise DomainError(f"{TOL_ENV} must lie in [1e-14, 1), got {raw!r}")
    return tol


def _problem_args(p: argparse.ArgumentParser, alpha=None, beta=None):
    p.add_argument("--alpha", type=float, required=alpha is None, default=alpha)
    p.add_argument("--beta", type=float, required=beta is None, default=beta)
    p.add_argument("--a", type=float, default=0.0)
    p.add_argument("--b", type=float, default=1.0)


def _problem(args):
    return FracOrders(args.alpha, args.beta), Interval(args.a, args.b)


def cmd_bound(args) -> int:
    orders, iv = _problem(args)
    print(f"lyapunov_bound: {fmt_human(lyapunov_bound(orders, iv))}")
    print(f"eigen_lower_bound: {fmt_human(eigen_lower_bound(orders, iv))}")
    return EXIT_OK


def _report_exit(report) -> int:
    if not report.bound_satisfied:
        return EXIT_VERIFY
    if report.low_confidence:
        return EXIT_LOW_CONFIDENCE
    return EXIT_OK


def cmd_eigen(args) -> int:
    orders, iv = _problem(args)
    report = smallest_eigenvalue(orders, iv, args.n, _env_tol())
    if args.json:
        print(dumps_report(report.to_dict()))
    else:
        for key, value in report.to_dict().items():
            shown = value if isinstance(value, (bool, int)) else fmt_human(value)
            print(f"{key}: {str(shown).lower() if isinstance(value, bool) else shown}")
    if report.low_confidence:
        print(f"warning: refinement gap {report.refinement_gap:.3g} exceeds 1e-4", file=sys.stderr)
    return _report_exit(report)


def _grid_values(lo: float, hi: float, step: float) -> list[float]:
    if not step > 0.0 or hi < lo:
        raise DomainError(f"bad grid {lo}:{hi}:{step}; need step > 0 and max >= min")
    count = int(math.floor((hi - lo) / step + 1e-9)) + 1
    return [round(lo + k * step, 12) for k in range(count)]


def sweep_row(alpha: float, beta: float, a: float, b: float, n: int, tol: float):
    report = smallest_eigenvalue(FracOrders(alpha, beta), Interval(a, b), n, tol)
    ratio = report.lambda_min / report.eigen_bound
    values = (
        report.orders.alpha, report.orders.beta, report.interval.a, report.interval.b, report.n,
        report.lambda_min, report.eigen_bound, ratio, report.refinement_gap, report.bound_satisfied,
    )
    return ",".join(fmt_exact(v) for v in values), report


def _sweep_job(job):
    line, report = sweep_row(*job)
    return line, report.bound_satisfied, report.low_confidence


def cmd_sweep(args) -> int:
    Interval(args.a, args.b)
    tol = _env_tol()
    jobs, skipped = [], 0
    for alpha in _grid_values(args.alpha_min, args.alpha_max, args.alpha_step):
        for beta in _grid_values(args.beta_min, args.beta_max, args.beta_step):
            try:
                FracOrders(alpha, beta)
            except DomainError:
                skipped += 1
                continue
            jobs.append((alpha, beta, args.a, args.b, args.n, tol))
    if not jobs:
        print(f"error: no admissible (alpha, beta) in the grid ({skipped} skipped)", file=sys.stderr)
        return EXIT_EMPTY

    workers = args.jobs or 1
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_sweep_job, jobs))
    else:
        results = [_sweep_job(job) for job in jobs]

    text = "\n".join([CSV_HEADER] + [line for line, _, _ in results] + [f"# skipped={skipped}"]) + "\n"
    if args.out and args.out != "-":
        try:
            with open(args.out, "w", newline="\n") as fh:
                fh.write(text)
        except OSError as exc:
            print(f"error: cannot write {args.out}: {exc}", file=sys.stderr)
            return EXIT_IO
    else:
        sys.stdout.write(text)
    if not all(ok for _, ok, _ in results):
        return EXIT_VERIFY
    if any(low for _, _, low in results):
        return EXIT_LOW_CONFIDENCE
    return EXIT_OK


def cmd_verify(args) -> int:
    orders, iv = _problem(args)
    tol = args.tol if args.tol is not None else _env_tol()
    results = verify.run_all(orders, iv, tol)
    for res in results:
        print(res.line())
    failed = [r for r in results if not r.passed]
    if failed:
        names = ", ".join(f"{r.name} ({r.value:.3e})" for r in failed)
        print(f"FAILED: {names}", file=sys.stderr)
        return EXIT_VERIFY
    print(f"all {len(results)} checks passed")
    return EXIT_OK


def cmd_green(args) -> int:
    orders, iv = _problem(args)
    for name in ("t", "r"):
        v = getattr(args, name)
        if not iv.contains(v):
            raise DomainError(f"{name}={v} lies outside [{iv.a}, {iv.b}]")
    value = green_eval(args.t, args.r, orders, iv, _env_tol())
    if args.json:
        print(dumps_report({"t": args.t, "r": args.r, "green": value}))
    else:
        print(f"G({fmt_human(args.t)}, {fmt_human(args.r)}) = {fmt_human(value)}")
        if abs(args.t - args.r) <= DIAGONAL_GUARD * iv.length:
            print("note: diagonal, closed form (r-a)^(alpha+beta-1)/((alpha+beta-1) Gamma(alpha) Gamma(beta))")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fraclyap",
        description="Lyapunov-type bounds and eigenvalues for -CD_{b-}^alpha D_{a+}^beta u + q u = 0, "
        "u(a) = D_{a+}^beta u(b) = 0.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("bound", help="print the Lyapunov and eigenvalue lower bounds")
    _problem_args(p)
    p.set_defaults(func=cmd_bound)

    p = sub.add_parser("eigen", help="smallest eigenvalue with q = 1 (Nystrom + power iteration)")
    _problem_args(p)
    p.add_argument("--n", type=int, default=64, help="base node count; 2n is also solved (default 64)")
    p.add_argument("--json", action="store_true", help="emit one JSON object")
    p.set_defaults(func=cmd_eigen)

    p = sub.add_parser("sweep", help="tabulate eigenvalue vs bound over an (alpha, beta) grid as CSV")
    for name in ("alpha", "beta"):
        p.add_argument(f"--{name}-min", type=float, default=0.55)
        p.add_argument(f"--{name}-max", type=float, default=1.0)
        p.add_argument(f"--{name}-step", type=float, default=0.05)
    p.add_argument("--a", type=float, default=0.0)
    p.add_argument("--b", type=float, default=1.0)
    p.add_argument("--n", type=int, default=64)
    p.add_argument("--out", default="-", help="output file (default stdout)")
    p.add_argument("--jobs", type=int, default=1, help="worker processes (default 1)")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("verify", help="run the Green function and identity checks")
    _problem_args(p, alpha=0.7, beta=0.8)
    p.add_argument("--tol", type=float, default=None, help=f"kernel quadrature tolerance (default ${TOL_ENV} or 1e-10)")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("green", help="evaluate G(t, r)")
    _problem_args(p)
    p.add_argument("--t", type=float, required=True)
    p.add_argument("--r", type=float, required=True)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_green)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except DomainError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except FracLyapError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VERIFY


if __name__ == "__main__":
    sys.exit(main())
