"""Stochastic gradient methods: SGD/SMPGD, Polyak-Ruppert averaging with an
empirical CLT check, and SVRG."""

import math

import numpy as np

from .core import (DivergenceError, InvalidInput, IterateTrace, as_vector,
                   check_divergence, make_rng)


def run_sgd(problem, h, x0, N, seed=0):
    """Plain SGD with a constant step; the trace records the exact objective."""
    grad = problem.require("stochastic_gradient")
    rng = make_rng(seed)
    x = as_vector(x0).copy()
    scale = problem.scale_at(x)
    trace = IterateTrace(problem.f_star)
    for n in range(N + 1):
        v = problem.value(x)
        check_divergence(v, x, scale)
        trace.add(n, v)
        if n < N:
            x = x - h * grad(x, rng)
    trace.final_point = x
    return trace


def smpgd_lambda(alpha_f, alpha_g, h):
    return (1.0 - alpha_f * h) / (1.0 + alpha_g * h)


def run_smpgd(f, g, geometry, h, x0, N, seed=0, averaging="geometric"):
    """Stochastic mirror proximal gradient descent with the proof's weighting.

    The returned trace's final_point is the lambda_h-geometrically weighted
    average of the iterates (weights lambda_h^(N-n)); averaging="uniform" is
    available for the alpha = 0 case.
    """
    grad = f.require("stochastic_gradient")
    rng = make_rng(seed)
    x = as_vector(x0).copy()
    scale = f.scale_at(x)
    lam = smpgd_lambda(f.alpha, 0.0 if g is None else g.alpha, h)
    if averaging == "uniform":
        lam = 1.0
    avg = x.copy()
    W = 1.0
    trace = IterateTrace(f.f_star)

    def total(z):
        return f.value(z) + (g.value(z) if g is not None else 0.0)

    for n in range(N + 1):
        v = total(x)
        check_divergence(v, x, scale)
        trace.add(n, v, avg_value=total(avg))
        if n < N:
            w = geometry.grad_star(geometry.grad(x) - h * grad(x, rng))
            if g is not None:
                w = g.prox(w, h)
            x = w
            # running lambda-weighted average: older weights decay by lambda
            W = lam * W + 1.0
            avg = avg + (x - avg) / W
    trace.final_point = avg
    trace.last_iterate = x
    return trace


def run_sgd_pl(problem, h, x0, N, seeds):
    """Mean final gap of SGD over the given seeds (PL noise-floor check)."""
    if problem.f_star is None:
        raise InvalidInput("needs a declared f*")
    gaps = []
    for s in seeds:
        tr = run_sgd(problem, h, x0, N, seed=s)
        gaps.append(tr.final_gap())
    return float(np.mean(gaps))


def run_asgd(problem, gamma, x0, n, seed=0):
    """SGD with steps h_k = k^-gamma plus Polyak-Ruppert (uniform) averaging
    of iterates 0..n-1. Returns (theta_bar, trace of squared distances)."""
    if not 0.5 < gamma < 1.0:
        raise InvalidInput("gamma must lie in (1/2, 1)")
    grad = problem.require("stochastic_gradient")
    rng = make_rng(seed)
    x = as_vector(x0).copy()
    total = np.zeros_like(x)
    trace = IterateTrace(None)
    for k in range(n):
        total += x
        if problem.x_star is not None:
            trace.add(k, float(np.linalg.norm(x - problem.x_star) ** 2))
        else:
            trace.add(k, 0.0)
        x = x - (k + 1.0) ** (-gamma) * grad(x, rng)
        if not np.all(np.isfinite(x)):
            raise DivergenceError("ASGD iterate diverged")
    theta_bar = total / n
    trace.final_point = theta_bar
    return theta_bar, trace


def clt_check(A, theta_star, gamma, n, trials, seed=0, noise_scale=1.0):
    """Empirical CLT for averaged SGD on Gaussian mean estimation.

    theta_{k+1} = theta_k - h_{k+1} A (theta_k - X_{k+1}) with samples
    X ~ N(theta*, A^-1) and h_k = k^-gamma, run over many trials
    (vectorized). The gradient noise A (theta* - X) then has covariance A,
    so the averaged iterate matches the sample mean's efficiency. Returns
    (empirical covariance of sqrt(n)(theta_bar - theta*), target A^-1,
    relative Frobenius error).
    """
    A = np.asarray(A, dtype=float)
    theta_star = as_vector(theta_star)
    d = theta_star.size
    rng = make_rng(seed)
    C = np.linalg.cholesky(np.linalg.inv(A)) * noise_scale
    theta = np.zeros((trials, d))
    total = np.zeros((trials, d))
    for k in range(n):
        total += theta
        X = theta_star[None, :] + rng.standard_normal((trials, d)) @ C.T
        h = (k + 1.0) ** (-gamma)
        theta = theta - h * (theta - X) @ A.T
    theta_bar = total / n
    err = math.sqrt(n) * (theta_bar - theta_star[None, :])
    cov = err.T @ err / trials
    target = np.linalg.inv(A) * noise_scale ** 2
    rel = float(np.linalg.norm(cov - target) / np.linalg.norm(target))
    return cov, target, rel


def svrg_estimator(problem, i, x, anchor, anchor_grad):
    """SVRG gradient estimator: grad f_i(x) - grad f_i(anchor) + grad f(anchor)."""
    cg = problem.require("component_gradient")
    return cg(i, x) - cg(i, anchor) + anchor_grad


def svrg_epoch_length(problem, g, h):
    """Constant epoch length for the strongly convex regime: lambda_h^N <= 1/2."""
    lam = smpgd_lambda(problem.alpha, 0.0 if g is None else g.alpha, h)
    if lam >= 1.0:
        raise InvalidInput("needs a strongly convex problem")
    return int(math.ceil(math.log(2.0) / -math.log(lam)))


def run_svrg(problem, g=None, h=None, x0=None, epochs=20, epoch_plan="constant",
             seed=0, target_gap=None):
    """SVRG over a finite-sum problem; returns (trace, gradient evaluation count).

    One epoch: compute the anchor's full gradient (n_components evaluations),
    run N_t inner steps with the variance-reduced estimator (counted as one
    fresh component evaluation each; the anchor's component gradients are
    treated as cached from the full-gradient pass), then move the anchor to
    the lambda_h-weighted average of the epoch's iterates. epoch_plan is
    "constant" (N_t from the strongly convex tuning) or "doubling".
    """
    cg = problem.require("component_gradient")
    n_comp = problem.n_components
    if h is None:
        h = 1.0 / (8.0 * problem.extra.get("beta_component", problem.beta))
    lam = smpgd_lambda(problem.alpha, 0.0 if g is None else g.alpha, h)
    rng = make_rng(seed)
    anchor = (np.zeros(problem.dim) if x0 is None else as_vector(x0)).copy()
    scale = problem.scale_at(anchor)
    trace = IterateTrace(problem.f_star)

    def total(z):
        return problem.value(z) + (g.value(z) if g is not None else 0.0)

    if epoch_plan == "constant":
        N_t = svrg_epoch_length(problem, g, h)
    else:
        N_t = 2
    evals = 0
    trace.add(0, total(anchor))
    for t in range(1, epochs + 1):
        full = problem.subgradient(anchor)
        evals += n_comp
        x = anchor.copy()
        avg = x.copy()
        W = 1.0
        for _ in range(N_t):
            i = int(rng.integers(n_comp))
            v = cg(i, x) - cg(i, anchor) + full
            evals += 1
            x = x - h * v
            if g is not None:
                x = g.prox(x, h)
            check_divergence(total(x), x, scale)
            W = lam * W + 1.0
            avg = avg + (x - avg) / W
        anchor = avg
        trace.add(t, total(anchor), evals=float(evals))
        if epoch_plan == "doubling":
            N_t *= 2
        if target_gap is not None and problem.f_star is not None:
            if total(anchor) - problem.f_star <= target_gap:
                break
    trace.final_point = anchor
    return trace, evals
