"""Shared numeric types: oracles, traces, step schedules, rate fitting, solver dispatch."""

import io
import math

import numpy as np


class ConvexkitError(Exception):
    pass


class NumericalError(ConvexkitError):
    pass


class InvalidProblem(ConvexkitError):
    pass


class InvalidInput(ConvexkitError):
    pass


class DivergenceError(ConvexkitError):
    pass


class CapabilityError(ConvexkitError):
    pass


class InsufficientData(ConvexkitError):
    pass


class NotPositiveDefinite(ConvexkitError):
    pass


class InvalidSeparator(ConvexkitError):
    pass


class NoFeasiblePoint(ConvexkitError):
    pass


class InfeasibleOrBudget(ConvexkitError):
    pass


class InnerSolveFailed(ConvexkitError):
    pass


class DomainError(ConvexkitError):
    pass


class SingularHessian(ConvexkitError):
    pass


class CenteringFailed(ConvexkitError):
    pass


class PathLost(ConvexkitError):
    pass


class ReductionStalled(ConvexkitError):
    pass


DIVERGENCE_FACTOR = 1e12


def as_vector(x):
    """Validate and return a finite 1-D float array."""
    v = np.asarray(x, dtype=float)
    if v.ndim == 0:
        v = v.reshape(1)
    if v.ndim != 1 or v.size < 1:
        raise InvalidInput("expected a vector of dimension >= 1")
    if not np.all(np.isfinite(v)):
        raise NumericalError("vector has non-finite entries")
    return v


class ProblemOracle:
    """Bundle of value/subgradient oracles, optional capabilities, and declared constants.

    Capabilities (all optional): prox(y, h), loo(p), separate(x),
    block_argmin(i, x), stochastic_gradient(x, rng), component_gradient(i, x).
    Constants: alpha (strong convexity, >= 0), beta (smoothness, may be inf),
    L (Lipschitz, may be inf), f_star / x_star when known, noise constants
    sigma2d, c0, c1 for stochastic oracles.
    """

    def __init__(self, dim, value, subgradient=None, *, prox=None, loo=None,
                 separate=None, block_argmin=None, stochastic_gradient=None,
                 component_gradient=None, n_components=None, n_blocks=None,
                 alpha=0.0, beta=math.inf, L=math.inf, f_star=None, x_star=None,
                 sigma2d=None, c0=None, c1=None, diameter=None, name="problem",
                 extra=None):
        if dim < 1:
            raise InvalidProblem("dim must be >= 1")
        if math.isfinite(alpha) and math.isfinite(beta) and alpha > beta + 1e-12:
            raise InvalidProblem("need alpha <= beta")
        self.dim = int(dim)
        self.value = value
        self.subgradient = subgradient
        self.prox = prox
        self.loo = loo
        self.separate = separate
        self.block_argmin = block_argmin
        self.stochastic_gradient = stochastic_gradient
        self.component_gradient = component_gradient
        self.n_components = n_components
        self.n_blocks = n_blocks
        self.alpha = float(alpha)
        self.beta = float(beta)
        self.L = float(L)
        self.f_star = f_star
        self.x_star = None if x_star is None else np.asarray(x_star, dtype=float)
        self.sigma2d = sigma2d
        self.c0 = c0
        self.c1 = c1
        self.diameter = diameter
        self.name = name
        self.extra = dict(extra) if extra else {}

    # the gradient, where f is differentiable
    def gradient(self, x):
        return self.subgradient(x)

    def kappa(self):
        if self.alpha > 0 and math.isfinite(self.beta):
            return self.beta / self.alpha
        return math.inf

    def scale_at(self, x0):
        return 1.0 + abs(float(self.value(np.asarray(x0, dtype=float))))

    def require(self, capability):
        if getattr(self, capability, None) is None:
            raise CapabilityError("problem %r lacks the %s oracle" % (self.name, capability))
        return getattr(self, capability)


class IterateTrace:
    """Per-iteration records plus the final point.

    Gap is recorded iff the problem declares f_star.
    """

    def __init__(self, f_star=None):
        self.f_star = f_star
        self.records = []
        self.final_point = None

    def add(self, it, value, grad_norm=None, time_s=0.0, **custom):
        if self.records and it <= self.records[-1]["iter"]:
            raise InvalidInput("trace iterations must be strictly increasing")
        gap = None if self.f_star is None else value - self.f_star
        self.records.append({"iter": int(it), "value": float(value), "gap": gap,
                             "grad_norm": None if grad_norm is None else float(grad_norm),
                             "time_s": float(time_s), "custom": custom})

    def __len__(self):
        return len(self.records)

    def iters(self):
        return np.array([r["iter"] for r in self.records])

    def values(self):
        return np.array([r["value"] for r in self.records])

    def gaps(self):
        if self.f_star is None:
            return None
        return np.array([r["gap"] for r in self.records])

    def grad_norms(self):
        return np.array([math.nan if r["grad_norm"] is None else r["grad_norm"]
                         for r in self.records])

    def custom(self, key):
        return np.array([r["custom"].get(key, math.nan) for r in self.records])

    def final_value(self):
        return self.records[-1]["value"]

    def final_gap(self):
        return self.records[-1]["gap"]

    def to_csv(self, path=None):
        def fmt(v):
            return "" if v is None else format(v, ".17g")

        buf = io.StringIO()
        buf.write("iter,value,gap,grad_norm,time_s\n")
        for r in self.records:
            buf.write("%d,%s,%s,%s,%s\n" % (r["iter"], fmt(r["value"]), fmt(r["gap"]),
                                            fmt(r["grad_norm"]), fmt(r["time_s"])))
        text = buf.getvalue()
        if path is not None:
            with open(path, "w") as fh:
                fh.write(text)
        return text


class StepSchedule:
    """Step-size schedules: constant, polynomial n^-gamma, 2/(alpha(n+1)), or custom."""

    def __init__(self, variant, param):
        self.variant = variant
        self.param = param

    @classmethod
    def constant(cls, h):
        if h <= 0:
            raise InvalidInput("step must be positive")
        return cls("constant", float(h))

    @classmethod
    def polynomial(cls, gamma):
        return cls("polynomial", float(gamma))

    @classmethod
    def harmonic_strong(cls, alpha):
        if alpha <= 0:
            raise InvalidInput("alpha must be positive")
        return cls("harmonic_strong", float(alpha))

    @classmethod
    def custom(cls, steps):
        steps = [float(h) for h in steps]
        if any(h <= 0 for h in steps):
            raise InvalidInput("custom steps must be positive")
        return cls("custom", steps)

    def __call__(self, n):
        """Step size h_n for iteration n >= 1 (custom schedules index from n=1)."""
        if self.variant == "constant":
            return self.param
        if self.variant == "polynomial":
            return float(n) ** (-self.param)
        if self.variant == "harmonic_strong":
            return 2.0 / (self.param * (n + 1))
        return self.param[n - 1]


def check_divergence(value, x, scale):
    if not np.all(np.isfinite(x)) or not math.isfinite(value) or abs(value) > DIVERGENCE_FACTOR * scale:
        raise DivergenceError("iterate diverged (value %r)" % (value,))


def finite_diff_gradient(f, x, h=1e-6):
    """Central-difference gradient of a value oracle."""
    if h <= 0:
        raise InvalidInput("h must be positive")
    x = as_vector(x)
    g = np.zeros_like(x)
    for i in range(x.size):
        e = np.zeros_like(x)
        e[i] = h
        fp, fm = f(x + e), f(x - e)
        if not (math.isfinite(fp) and math.isfinite(fm)):
            raise NumericalError("non-finite evaluation in finite differences")
        g[i] = (fp - fm) / (2 * h)
    return g


def make_rng(seed):
    """Counter-based generator so split streams are reproducible."""
    return np.random.Generator(np.random.Philox(seed))


def fit_rate(trace, skip=0):
    """Least-squares fit of the gap sequence: power law C*n^e vs geometric C*rho^n.

    Returns (exponent, r2, kind) where kind is "polynomial" or "exponential";
    exponent is the power e or log(rho) respectively.
    """
    if trace.f_star is None:
        raise InsufficientData("no gap column (f_star unknown)")
    pts = [(r["iter"], r["gap"]) for r in trace.records
           if r["iter"] >= max(1, skip) and r["gap"] is not None and r["gap"] > 0]
    if len(pts) < 10:
        raise InsufficientData("need >= 10 records with positive gap")
    n = np.array([p[0] for p in pts], dtype=float)
    lg = np.log([p[1] for p in pts])

    def lsq(xs):
        A = np.stack([xs, np.ones_like(xs)], axis=1)
        coef, *_ = np.linalg.lstsq(A, lg, rcond=None)
        resid = lg - A @ coef
        tot = lg - lg.mean()
        denom = float(tot @ tot)
        r2 = 1.0 if denom == 0 else 1.0 - float(resid @ resid) / denom
        return coef[0], r2

    e_poly, r2_poly = lsq(np.log(n))
    e_geo, r2_geo = lsq(n)
    if r2_poly >= r2_geo:
        return float(e_poly), float(r2_poly), "polynomial"
    return float(e_geo), float(r2_geo), "exponential"


# --- uniform solver dispatch -------------------------------------------------

def _solver_registry():
    # imported lazily so core stays at the bottom of the dependency order
    from . import gradient, krylov, nonsmooth, proximal, frankwolfe, mirror

    def needs(*caps):
        return caps

    def run_gd(problem, x0, N, seed, p):
        h = p.get("step") or (1.0 / problem.beta if math.isfinite(problem.beta) else 1.0)
        return gradient.run_gd(problem, h, x0, N)

    def run_agd(problem, x0, N, seed, p):
        return gradient.run_agd(problem, x0, N)

    def run_psd(problem, x0, N, seed, p):
        R = p.get("radius", max(1.0, float(np.linalg.norm(x0)) * 2))
        h = p.get("step", R / math.sqrt(max(N, 1)))
        proj = lambda z: nonsmooth.project_ball(z, np.zeros(problem.dim), R)
        return nonsmooth.run_psd(problem, proj, h, x0, N)

    def run_fw(problem, x0, N, seed, p):
        problem.require("loo")
        tr, _ = frankwolfe.run_fw(problem, problem.loo, x0, N)
        return tr

    def run_pgd(problem, x0, N, seed, p):
        f = problem.extra.get("smooth") or problem.require("smooth")
        g = problem.extra.get("reg")
        h = p.get("step", 1.0 / f.beta)
        return proximal.run_pgd(f, g, h, x0, N)

    def run_apgd(problem, x0, N, seed, p):
        f = problem.extra.get("smooth") or problem.require("smooth")
        g = problem.extra.get("reg")
        return proximal.run_apgd(f, g, x0, N)

    def run_ppm(problem, x0, N, seed, p):
        problem.require("prox")
        h = p.get("step", 1.0)
        return proximal.run_ppm(problem, h, x0, N)

    def run_md(problem, x0, N, seed, p):
        geom = mirror.entropic_geometry(problem.dim)
        h = p.get("step", math.sqrt(2 * math.log(problem.dim) / max(N, 1)) /
                 (problem.L if math.isfinite(problem.L) else 1.0))
        if x0 is None or not np.all(np.asarray(x0) > 0):
            x0 = np.full(problem.dim, 1.0 / problem.dim)
        return mirror.run_mpgd(problem, None, geom, h, x0, N, constraint="simplex")

    def run_sgd(problem, x0, N, seed, p):
        from . import stochastic
        problem.require("stochastic_gradient")
        h = p.get("step", 1.0 / (2 * problem.beta) if math.isfinite(problem.beta) else 0.1)
        return stochastic.run_sgd(problem, h, x0, N, seed)

    def run_cg(problem, x0, N, seed, p):
        A = problem.extra.get("A")
        b = problem.extra.get("b")
        if A is None or b is None:
            raise CapabilityError("problem %r lacks the quadratic (A,b) data needed by cg" % problem.name)
        tr, _ = krylov.cg_solve(A, b, x0, N, tol=p.get("tol", 0.0), f_star=problem.f_star)
        while len(tr) < N + 1:  # converged early; pad to the budget+1 contract
            last = tr.records[-1]
            tr.add(last["iter"] + 1, last["value"], grad_norm=last["grad_norm"])
        return tr

    return {
        "gd": (needs("subgradient"), run_gd),
        "agd": (needs("subgradient"), run_agd),
        "psd": (needs("subgradient"), run_psd),
        "fw": (needs("loo"), run_fw),
        "ista": (needs(), run_pgd),
        "pgd": (needs(), run_pgd),
        "fista": (needs(), run_apgd),
        "apgd": (needs(), run_apgd),
        "ppm": (needs("prox"), run_ppm),
        "md": (needs("subgradient"), run_md),
        "sgd": (needs("stochastic_gradient"), run_sgd),
        "cg": (needs(), run_cg),
    }


SOLVERS = None


def solver_names():
    global SOLVERS
    if SOLVERS is None:
        SOLVERS = _solver_registry()
    return sorted(SOLVERS)


def run_solver(problem, algo, budget, seed=0):
    """Dispatch a named algorithm; returns a trace with budget+1 records."""
    global SOLVERS
    if SOLVERS is None:
        SOLVERS = _solver_registry()
    if isinstance(algo, str):
        algo = {"name": algo}
    name = algo.get("name")
    if name not in SOLVERS:
        raise InvalidInput("unknown algorithm %r (have: %s)" % (name, ", ".join(sorted(SOLVERS))))
    caps, runner = SOLVERS[name]
    for cap in caps:
        problem.require(cap)
    x0 = algo.get("x0")
    x0 = np.zeros(problem.dim) if x0 is None else as_vector(x0)
    trace = runner(problem, x0, int(budget), seed, algo)
    if len(trace) != budget + 1:
        raise NumericalError("solver %s produced %d records, expected %d"
                             % (name, len(trace), budget + 1))
    return trace
