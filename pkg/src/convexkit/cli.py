"""Command-line harness: run solvers on problem files, fit observed rates
against theory, and execute the acceptance suite.

Exit codes: 0 success, 1 acceptance/rate failure, 2 usage error, 3 missing
oracle capability. Flags are long-form only; each of --iters/--step/--seed
falls back to the CONVEXKIT_ITERS/CONVEXKIT_STEP/CONVEXKIT_SEED environment
variable before its default.
"""

import argparse
import math
import os
import sys
import time

import numpy as np

from . import acceptance, gradient, nonsmooth, problems
from .core import (CapabilityError, ConvexkitError, InvalidInput, IterateTrace,
                   fit_rate, run_solver)


# --- problem spec files ------------------------------------------------------
#
# Textual key/value documents: one `key value...` pair per line, '#' comments.
# Matrices are inline row-major number lists. Fields by kind:
#   kind quadratic        dim, A (dim*dim), b (dim)
#   kind least-squares    rows, dim, X (rows*dim), Y (rows)
#   kind logistic         rows, dim, X (rows*dim), Y (rows; 0/1)
#   kind lasso            rows, dim, X (rows*dim), Y (rows), lam
#   kind svm              rows, dim, X (rows*dim), Y (rows; +-1), lam
#   kind worst-case-smooth     steps, beta, dim
#   kind worst-case-nonsmooth  steps, L, R

def _parse_fields(path):
    fields = {}
    with open(path) as fh:
        for line in fh:
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            key, _, rest = line.partition(" ")
            if not rest.strip():
                raise InvalidInput("problem file line %r has no value" % line)
            fields[key] = rest.split()
    return fields


def _numbers(fields, key, count=None):
    if key not in fields:
        raise InvalidInput("problem file is missing field %r" % key)
    try:
        vals = [float(tok) for tok in fields[key]]
    except ValueError:
        raise InvalidInput("field %r holds non-numeric data" % key)
    if count is not None and len(vals) != count:
        raise InvalidInput("field %r has %d numbers, expected %d"
                           % (key, len(vals), count))
    return np.array(vals)


def _scalar(fields, key):
    return float(_numbers(fields, key, 1)[0])


def _design(fields):
    rows = int(_scalar(fields, "rows"))
    dim = int(_scalar(fields, "dim"))
    X = _numbers(fields, "X", rows * dim).reshape(rows, dim)
    Y = _numbers(fields, "Y", rows)
    return X, Y


def parse_problem_file(path):
    """Read a problem spec file into a ProblemOracle."""
    fields = _parse_fields(path)
    if "kind" not in fields:
        raise InvalidInput("problem file is missing field 'kind'")
    kind = fields["kind"][0]
    if kind == "quadratic":
        dim = int(_scalar(fields, "dim"))
        A = _numbers(fields, "A", dim * dim).reshape(dim, dim)
        b = _numbers(fields, "b", dim)
        return problems.make_quadratic(A, b)
    if kind == "least-squares":
        return problems.make_least_squares(*_design(fields))
    if kind == "logistic":
        return problems.make_logistic(*_design(fields))
    if kind == "lasso":
        X, Y = _design(fields)
        return problems.make_lasso(X, Y, _scalar(fields, "lam"))
    if kind == "svm":
        X, Y = _design(fields)
        return problems.make_svm_hinge(X, Y, _scalar(fields, "lam"))
    if kind == "worst-case-smooth":
        return problems.make_worst_case_smooth(
            int(_scalar(fields, "steps")), _scalar(fields, "beta"),
            int(_scalar(fields, "dim")))
    if kind == "worst-case-nonsmooth":
        return problems.make_worst_case_nonsmooth(
            int(_scalar(fields, "steps")), _scalar(fields, "L"),
            _scalar(fields, "R"))
    raise InvalidInput("unknown problem kind %r" % kind)


def parse_lp_file(path):
    """Read an LP from one file with CSV blocks under `A:`, `b:`, `c:`, `x0:`.

    Returns (A, b, c, x0) with x0 = None when the section is absent.
    """
    sections = {}
    current = None
    with open(path) as fh:
        for line in fh:
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if line.endswith(":") and line[:-1] in ("A", "b", "c", "x0"):
                current = line[:-1]
                sections[current] = []
                continue
            if current is None:
                raise InvalidInput("LP file data before any section header")
            sections[current].append([float(t) for t in line.replace(",", " ").split()])
    for key in ("A", "b", "c"):
        if key not in sections or not sections[key]:
            raise InvalidInput("LP file is missing section %r" % key)
    A = np.array(sections["A"])
    b = np.concatenate([np.array(r) for r in sections["b"]])
    c = np.concatenate([np.array(r) for r in sections["c"]])
    if A.ndim != 2 or A.shape != (b.size, c.size):
        raise InvalidInput("LP sections have inconsistent shapes")
    x0 = None
    if sections.get("x0"):
        x0 = np.concatenate([np.array(r) for r in sections["x0"]])
        if x0.size != c.size:
            raise InvalidInput("x0 has the wrong length")
    return A, b, c, x0


def read_losses_csv(path):
    """Loss stream for online mirror descent: one CSV row per round."""
    rows = []
    with open(path) as fh:
        for line in fh:
            line = line.strip()
            if line:
                rows.append([float(t) for t in line.split(",")])
    if not rows or any(len(r) != len(rows[0]) for r in rows):
        raise InvalidInput("loss stream must be rectangular and non-empty")
    return np.array(rows)


def read_eot_csv(cost_path, mu_path, nu_path):
    """Entropic OT instance from a (cost matrix, mu, nu) CSV triplet."""
    from .altmin import EotInstance
    C = read_losses_csv(cost_path)
    mu = read_losses_csv(mu_path).ravel()
    nu = read_losses_csv(nu_path).ravel()
    return EotInstance(C, mu, nu)


# --- config precedence: flag > CONVEXKIT_* env var > default -----------------

def _setting(flag_value, env_name, default, cast):
    if flag_value is not None:
        return flag_value
    raw = os.environ.get("CONVEXKIT_" + env_name)
    if raw is not None:
        try:
            return cast(raw)
        except ValueError:
            raise InvalidInput("CONVEXKIT_%s=%r is not a valid value" % (env_name, raw))
    return default


# --- subcommands -------------------------------------------------------------

def cmd_run(args):
    problem = parse_problem_file(args.problem)
    iters = _setting(args.iters, "ITERS", 100, int)
    seed = _setting(args.seed, "SEED", 0, int)
    step = _setting(args.step, "STEP", None, float)
    algo = {"name": args.algo}
    if step is not None:
        algo["step"] = step
    started = time.monotonic()
    trace = run_solver(problem, algo, iters, seed=seed)
    elapsed = time.monotonic() - started
    csv_text = trace.to_csv()
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(csv_text)
    else:
        sys.stdout.write(csv_text)
    gap = trace.final_gap()
    print("final value %.17g%s" % (trace.final_value(),
                                   "" if gap is None else " gap %.17g" % gap))
    print("wall time %.3fs" % elapsed, file=sys.stderr)
    return 0


RATE_SUITES = {
    "gd-vs-agd": "GD and AGD on the chain quadratic; expected exponents -1 and -2",
    "subgradient": "projected subgradient on the resisting max instance; expected -0.5",
}


def _rate_rows(suite):
    if suite == "gd-vs-agd":
        w = problems.make_worst_case_smooth(1024, 1.0, 65)
        x0 = np.zeros(65)
        rows = []
        for name, trace, theory, slack in (
                ("gd", gradient.run_gd(w, 1.0, x0, 1024), -1.0, 0.5),
                ("agd", gradient.run_agd(w, x0, 1024), -2.0, 0.6)):
            exponent, r2, kind = fit_rate(trace, skip=65)
            rows.append((name, exponent, r2, theory,
                         kind == "polynomial" and exponent <= theory + slack))
        return rows
    if suite == "subgradient":
        # gap at the budget across N, each run with its own tuned step
        trace = IterateTrace(0.0)
        for N in np.unique(np.geomspace(16, 512, 12).astype(int)):
            N = int(N)
            w = problems.make_worst_case_nonsmooth(N, 2.0, 1.0)
            R = w.extra["R"]
            proj = lambda z: nonsmooth.project_ball(z, np.zeros(w.dim), R)
            run = nonsmooth.run_psd(w, proj, R / math.sqrt(N), np.zeros(w.dim), N)
            trace.add(N, run.gaps()[-1])
        exponent, r2, kind = fit_rate(trace)
        return [("psd", exponent, r2, -0.5,
                 kind == "polynomial" and exponent <= -0.25)]
    raise InvalidInput("unknown suite %r (have: %s)"
                       % (suite, ", ".join(sorted(RATE_SUITES))))


def cmd_rates(args):
    if not args.suite:
        for name in sorted(RATE_SUITES):
            print("%-12s %s" % (name, RATE_SUITES[name]))
        return 0
    rows = _rate_rows(args.suite)
    lines = ["algorithm,fitted_exponent,r2,theory_exponent,passed"]
    for name, exponent, r2, theory, ok in rows:
        lines.append("%s,%s,%s,%s,%s" % (name, format(exponent, ".17g"),
                                         format(r2, ".17g"),
                                         format(theory, ".17g"),
                                         "pass" if ok else "fail"))
    csv_text = "\n".join(lines) + "\n"
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(csv_text)
    print("%-10s %10s %8s %8s  %s" % ("algorithm", "fitted", "r2", "theory", "status"))
    for name, exponent, r2, theory, ok in rows:
        print("%-10s %10.3f %8.3f %8.1f  %s"
              % (name, exponent, r2, theory, "pass" if ok else "FAIL"))
    if not args.out:
        sys.stdout.write(csv_text)
    return 0 if all(row[4] for row in rows) else 1


def cmd_verify(args):
    ids = acceptance.criterion_ids()
    if args.only:
        ids = [cid for cid in ids if args.only in cid]
        if not ids:
            print("no criterion matches %r" % args.only, file=sys.stderr)
            return 2
    if args.list:
        for cid in sorted(ids):
            print(cid)
        return 0
    failures = 0
    for cid in sorted(ids):
        try:
            acceptance.run_criterion(cid)
            print("PASS %s" % cid)
        except AssertionError as exc:
            failures += 1
            print("FAIL %s: %s" % (cid, exc))
        except ConvexkitError as exc:
            failures += 1
            print("FAIL %s: %s: %s" % (cid, type(exc).__name__, exc))
    return 1 if failures else 0


def build_parser():
    parser = argparse.ArgumentParser(
        prog="convexkit",
        description="Run convex-optimization solvers, fit rates, verify bounds.")
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="run one solver on a problem file")
    p_run.add_argument("--problem", required=True, help="problem spec file")
    p_run.add_argument("--algo", required=True, help="solver name (e.g. gd, agd, psd)")
    p_run.add_argument("--iters", type=int, default=None)
    p_run.add_argument("--step", type=float, default=None)
    p_run.add_argument("--seed", type=int, default=None)
    p_run.add_argument("--out", default=None, help="trace CSV path (default stdout)")
    p_run.set_defaults(func=cmd_run)

    p_rates = sub.add_parser("rates", help="fit observed rates against theory")
    p_rates.add_argument("--suite", default=None,
                         help="benchmark suite; omit to list suites")
    p_rates.add_argument("--out", default=None, help="CSV output path")
    p_rates.set_defaults(func=cmd_rates)

    p_verify = sub.add_parser("verify", help="run the acceptance suite")
    p_verify.add_argument("--only", default=None,
                          help="run only criteria whose id contains this string")
    p_verify.add_argument("--list", action="store_true",
                          help="print criterion ids and exit")
    p_verify.set_defaults(func=cmd_verify)

    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except CapabilityError as exc:
        print("capability error: %s" % exc, file=sys.stderr)
        return 3
    except (InvalidInput, OSError) as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 2
    except ConvexkitError as exc:
        print("error: %s: %s" % (type(exc).__name__, exc), file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
