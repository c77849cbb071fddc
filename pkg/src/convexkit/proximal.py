"""Proximal operators, PPM, ISTA/FISTA, Moreau envelope, numeric 1-D conjugation."""

import math

import numpy as np

from .core import (InnerSolveFailed, InvalidInput, IterateTrace, as_vector)
from .gradient import agd_lambda_sequence


class ProxTerm:
    """A prox-friendly term: value oracle, prox(y, h), strong convexity alpha."""

    def __init__(self, value, prox, alpha=0.0):
        self.value = value
        self.prox = prox
        self.alpha = float(alpha)


def prox_l1(y, lam):
    """Soft thresholding: (|y| - lam)_+ sign(y) componentwise."""
    if lam < 0:
        raise InvalidInput("lam must be >= 0")
    y = np.asarray(y, dtype=float)
    return np.sign(y) * np.maximum(np.abs(y) - lam, 0.0)


def _agd_strong(value, grad, x0, alpha, beta, tol, max_iter):
    """Constant-momentum AGD for an alpha-strongly convex beta-smooth function."""
    kappa = beta / alpha
    theta = (math.sqrt(kappa) - 1.0) / (math.sqrt(kappa) + 1.0)
    h = 1.0 / beta
    x = x0.copy()
    x_prev = x.copy()
    for _ in range(max_iter):
        y = x + theta * (x - x_prev)
        g = grad(y)
        x_prev = x
        x = y - h * g
        if np.linalg.norm(grad(x)) <= tol:
            return x
    raise InnerSolveFailed("inner AGD did not reach tolerance %g" % tol)


def prox_generic(problem, y, h, inner_tol=None):
    """argmin of f(x) + ||y - x||^2 / (2h) by an inner accelerated solve.

    The inner objective is (alpha + 1/h)-strongly convex. Smooth f uses AGD;
    non-smooth 1-D f falls back to bracketed ternary search.
    """
    if h <= 0:
        raise InvalidInput("h must be positive")
    y = as_vector(y)
    if inner_tol is None:
        inner_tol = 1e-10 * problem.scale_at(y)
    if math.isfinite(problem.beta):
        alpha = problem.alpha + 1.0 / h
        beta = problem.beta + 1.0 / h

        def val(x):
            d = x - y
            return problem.value(x) + 0.5 * float(d @ d) / h

        def grad(x):
            return problem.subgradient(x) + (x - y) / h

        budget = 100 * int(math.ceil(math.sqrt(1.0 + problem.beta * h))) + 100
        return _agd_strong(val, grad, y.copy(), alpha, beta, inner_tol, budget)
    if y.size != 1:
        raise InnerSolveFailed("non-smooth prox supported in 1-D only")
    # bracketed ternary search; the prox point is within h*L of y, expand until covered
    def val1(t):
        return problem.value(np.array([t])) + (t - y[0]) ** 2 / (2.0 * h)

    lo, hi = y[0] - 1.0, y[0] + 1.0
    while val1(lo) < val1(lo + 1e-9) or val1(hi) < val1(hi - 1e-9):
        lo, hi = y[0] - 2 * (y[0] - lo + 1), y[0] + 2 * (hi - y[0] + 1)
        if hi - lo > 1e12:
            raise InnerSolveFailed("could not bracket the prox point")
    for _ in range(200):
        m1 = lo + (hi - lo) / 3.0
        m2 = hi - (hi - lo) / 3.0
        if val1(m1) <= val1(m2):
            hi = m2
        else:
            lo = m1
    return np.array([(lo + hi) / 2.0])


def _prox_of(problem):
    if problem.prox is not None:
        return problem.prox
    return lambda y, h: prox_generic(problem, y, h)


def run_ppm(problem, h, x0, N):
    """Proximal point method x_{n+1} = prox_{hf}(x_n)."""
    prox = _prox_of(problem)
    x = as_vector(x0).copy()
    trace = IterateTrace(problem.f_star)
    for n in range(N + 1):
        gn = None
        if problem.subgradient is not None:
            gn = float(np.linalg.norm(problem.subgradient(x)))
        trace.add(n, problem.value(x), grad_norm=gn)
        if n < N:
            x = prox(x, h)
    trace.final_point = x
    return trace


def run_pgd(f, g, h, x0, N, f_star=None):
    """Proximal gradient x_+ = prox_{hg}(x - h grad f(x)); ISTA when g is l1.

    The trace's value column is F = f + g. g=None degrades to plain GD.
    """
    if h <= 0:
        raise InvalidInput("step must be positive")
    x = as_vector(x0).copy()
    trace = IterateTrace(f_star)

    def F(z):
        return f.value(z) + (g.value(z) if g is not None else 0.0)

    for n in range(N + 1):
        grad = f.subgradient(x)
        trace.add(n, F(x), grad_norm=float(np.linalg.norm(grad)))
        if n < N:
            z = x - h * grad
            x = g.prox(z, h) if g is not None else z
    trace.final_point = x
    return trace


def run_apgd(f, g, x0, N, f_star=None):
    """FISTA: proximal gradient with the AGD momentum schedule, h = 1/beta_f."""
    if not math.isfinite(f.beta):
        raise InvalidInput("FISTA needs a finite smoothness constant")
    h = 1.0 / f.beta
    x = as_vector(x0).copy()
    x_prev = x.copy()
    lam = agd_lambda_sequence(N)
    trace = IterateTrace(f_star)

    def F(z):
        return f.value(z) + (g.value(z) if g is not None else 0.0)

    def step(z):
        w = z - h * f.subgradient(z)
        return g.prox(w, h) if g is not None else w

    for n in range(N + 1):
        trace.add(n, F(x))
        if n < N:
            theta = (lam[n] - 1.0) / lam[n + 1]
            y = x + theta * (x - x_prev)
            x_prev = x
            x = step(y)
    trace.final_point = x
    return trace


def moreau_envelope(problem, h, y, inner_tol=None):
    """(Q_h f)(y) = min_x f(x) + ||y - x||^2 / (2h)."""
    y = as_vector(y)
    xh = _prox_of(problem)(y, h) if problem.prox is not None else prox_generic(problem, y, h, inner_tol)
    d = xh - y
    return problem.value(xh) + 0.5 * float(d @ d) / h


def ppm_lyapunov_check(problem, h, x0, N, tol=1e-8):
    """Check that n^2 h^2 ||grad f||^2 + 2nh (f - f*) + ||x - x*||^2 never increases
    along PPM, and the implied gradient-norm and gap bounds at iterate N."""
    if problem.f_star is None or problem.x_star is None:
        raise InvalidInput("needs declared f* and x*")
    prox = _prox_of(problem)
    x = as_vector(x0).copy()
    R = float(np.linalg.norm(x - problem.x_star))
    scale = problem.scale_at(x)
    lyap_prev = None
    ok = True
    diag = []
    for n in range(N + 1):
        g = problem.subgradient(x)
        lyap = (n * n * h * h * float(g @ g)
                + 2 * n * h * (problem.value(x) - problem.f_star)
                + float(np.linalg.norm(x - problem.x_star) ** 2))
        if lyap_prev is not None and lyap > lyap_prev + tol * scale:
            ok = False
            diag.append((n, lyap_prev, lyap))
        lyap_prev = lyap
        if n < N:
            x = prox(x, h)
    if N > 0:
        g = problem.subgradient(x)
        if float(np.linalg.norm(g)) > R / (N * h) + tol * scale:
            ok = False
            diag.append(("grad_bound", float(np.linalg.norm(g)), R / (N * h)))
        gap = problem.value(x) - problem.f_star
        if gap > R * R / (4.0 * N * h) + tol * scale:
            ok = False
            diag.append(("gap_bound", gap, R * R / (4.0 * N * h)))
    return ok, diag


def numeric_conjugate(x_grid, f_vals, y_grid):
    """f*(y) = max over the sample grid of x*y - f(x)."""
    x_grid = np.asarray(x_grid, dtype=float)
    f_vals = np.asarray(f_vals, dtype=float)
    y_grid = np.asarray(y_grid, dtype=float)
    if x_grid.size == 0 or y_grid.size == 0:
        raise InvalidInput("grids must be non-empty")
    if x_grid.size != f_vals.size:
        raise InvalidInput("need one sample per grid point")
    # outer product is fine at default grid sizes (2048 x 2048 doubles)
    return np.max(np.outer(y_grid, x_grid) - f_vals[None, :], axis=1)


def conjugate_grid(lo, hi, n=2048):
    return np.linspace(lo, hi, n)
