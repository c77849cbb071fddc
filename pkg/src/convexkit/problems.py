"""Problem zoo: statistical objectives, worst-case constructions, resisting oracles."""

import math
from itertools import combinations

import numpy as np

from .core import (InvalidProblem, ProblemOracle, as_vector, make_rng)


def _logsumexp(z):
    m = np.max(z)
    return m + math.log(np.sum(np.exp(z - m)))


def make_quadratic(A, b, name="quadratic"):
    """f(x) = 1/2 <x, Ax> - <b, x> with A symmetric PSD."""
    A = np.asarray(A, dtype=float)
    b = as_vector(b)
    if A.shape != (b.size, b.size):
        raise InvalidProblem("A must be square and match b")
    if np.max(np.abs(A - A.T)) > 1e-12 * (1 + np.max(np.abs(A))):
        raise InvalidProblem("A must be symmetric")
    evals = np.linalg.eigvalsh(A)
    if evals[0] < -1e-10 * max(1.0, evals[-1]):
        raise InvalidProblem("A must be PSD")
    alpha = max(evals[0], 0.0)
    beta = float(evals[-1])
    f_star = x_star = None
    if evals[0] > 1e-12 * max(1.0, evals[-1]):
        x_star = np.linalg.solve(A, b)
        f_star = -0.5 * float(b @ x_star)

    def value(x):
        return 0.5 * float(x @ (A @ x)) - float(b @ x)

    def grad(x):
        return A @ x - b

    def prox(y, h):
        # argmin of f + ||.-y||^2/(2h) solves (I + hA)x = y + hb
        return np.linalg.solve(np.eye(b.size) + h * A, y + h * b)

    return ProblemOracle(b.size, value, grad, prox=prox, alpha=alpha, beta=beta,
                         f_star=f_star, x_star=x_star, name=name,
                         extra={"A": A, "b": b})


def make_logistic(X, Y, name="logistic"):
    """Average logistic negative log-likelihood over rows of X with 0/1 labels."""
    X = np.asarray(X, dtype=float)
    Y = np.asarray(Y, dtype=float)
    if X.ndim != 2 or Y.shape != (X.shape[0],):
        raise InvalidProblem("X must be n x d with one label per row")
    if not np.all((Y == 0) | (Y == 1)):
        raise InvalidProblem("labels must be 0/1")
    n = X.shape[0]
    beta = float(np.linalg.eigvalsh(X.T @ X / (4.0 * n))[-1])

    def value(theta):
        z = X @ theta
        return float(np.mean(np.logaddexp(0.0, z) - Y * z))

    def grad(theta):
        z = X @ theta
        s = 1.0 / (1.0 + np.exp(-z))
        return X.T @ (s - Y) / n

    return ProblemOracle(X.shape[1], value, grad, beta=beta, name=name,
                         extra={"X": X, "Y": Y})


def make_least_squares(X, Y, name="least-squares"):
    """f(theta) = (1/2n) ||Y - X theta||^2."""
    X = np.asarray(X, dtype=float)
    Y = as_vector(Y)
    if X.ndim != 2 or Y.size != X.shape[0]:
        raise InvalidProblem("X must be n x d with one response per row")
    n = X.shape[0]
    H = X.T @ X / n
    evals = np.linalg.eigvalsh(H)

    def value(theta):
        r = X @ theta - Y
        return 0.5 * float(r @ r) / n

    def grad(theta):
        return X.T @ (X @ theta - Y) / n

    x_star = f_star = None
    if evals[0] > 1e-12 * max(1.0, evals[-1]):
        x_star = np.linalg.solve(H, X.T @ Y / n)
        f_star = value(x_star)
    return ProblemOracle(X.shape[1], value, grad, alpha=max(evals[0], 0.0),
                         beta=float(evals[-1]), f_star=f_star, x_star=x_star,
                         name=name, extra={"X": X, "Y": Y})


def make_lasso(X, Y, lam, name="lasso"):
    """Least squares plus lam*||theta||_1; composite with a prox-friendly part."""
    from .proximal import ProxTerm, prox_l1

    if lam < 0:
        raise InvalidProblem("lam must be >= 0")
    f = make_least_squares(X, Y, name=name + "-smooth")
    g = ProxTerm(value=lambda x: lam * float(np.sum(np.abs(x))),
                 prox=lambda y, h: prox_l1(y, lam * h), alpha=0.0)

    def value(x):
        return f.value(x) + g.value(x)

    def subgrad(x):
        return f.subgradient(x) + lam * np.sign(x)

    return ProblemOracle(f.dim, value, subgrad, alpha=f.alpha, beta=f.beta,
                         name=name, extra={"smooth": f, "reg": g, "lam": lam})


def make_softmax_smoothed(a_rows, b, lam, beta_smooth, name="softmax"):
    """Softmax smoothing of max_i (<a_i, x> - b_i) plus a quadratic regularizer.

    The unsmoothed max objective is kept around (extra["unsmoothed_value"]) for
    the sandwich inequality f <= f_beta <= f + log(m)/beta.
    """
    A = np.asarray(a_rows, dtype=float)
    b = as_vector(b)
    if A.ndim != 2 or A.shape[0] != b.size or A.shape[0] == 0:
        raise InvalidProblem("need m >= 1 rows with one offset each")
    if beta_smooth <= 0 or lam < 0:
        raise InvalidProblem("need beta_smooth > 0, lam >= 0")
    m = A.shape[0]
    smooth_const = beta_smooth * float(np.linalg.eigvalsh(A.T @ A)[-1]) + lam

    def value(x):
        return _logsumexp(beta_smooth * (A @ x - b)) / beta_smooth + 0.5 * lam * float(x @ x)

    def grad(x):
        z = beta_smooth * (A @ x - b)
        w = np.exp(z - np.max(z))
        w /= np.sum(w)
        return A.T @ w + lam * x

    def unsmoothed(x):
        return float(np.max(A @ x - b)) + 0.5 * lam * float(x @ x)

    return ProblemOracle(A.shape[1], value, grad, alpha=lam, beta=smooth_const,
                         name=name, extra={"unsmoothed_value": unsmoothed, "m": m})


def make_worst_case_smooth(N, beta, d, name="worst-case-smooth"):
    """Chain quadratic that resists every gradient-span method for N steps.

    f(x) = (beta/4) * (1/2 (x_1^2 + sum (x_k - x_{k+1})^2 + x_d^2) - x_1), with
    minimizer x*_k = 1 - k/(d+1). Gradients queried from the origin only reach
    one new coordinate per step, which caps the achievable gap for N < d.
    """
    if d < 1:
        raise InvalidProblem("d must be >= 1")
    if beta <= 0:
        raise InvalidProblem("beta must be > 0")
    A = (2 * np.eye(d) - np.eye(d, k=1) - np.eye(d, k=-1)) * (beta / 4.0)
    b = np.zeros(d)
    b[0] = beta / 4.0
    x_star = 1.0 - np.arange(1, d + 1) / (d + 1.0)
    f_star = -(beta / 8.0) * (1.0 - 1.0 / (d + 1.0))

    def value(x):
        return 0.5 * float(x @ (A @ x)) - float(b @ x)

    def grad(x):
        return A @ x - b

    return ProblemOracle(d, value, grad, alpha=0.0, beta=float(beta),
                         f_star=f_star, x_star=x_star, name=name,
                         extra={"A": A, "b": b, "N": N})


def make_worst_case_nonsmooth(N, L, R, name="worst-case-nonsmooth"):
    """gamma*max_i x_i + (alpha/2)||x||^2 in dimension N+1; resists subgradient span methods.

    The subgradient oracle breaks argmax ties toward the smallest index, which
    is what keeps span iterates out of the last coordinate.
    """
    if L <= 0 or R <= 0:
        raise InvalidProblem("need L, R > 0")
    d = N + 1
    gamma = L / 4.0
    alpha = gamma / (R * math.sqrt(d))
    f_star = -gamma * gamma / (2 * alpha * d)
    x_star = np.full(d, -gamma / (alpha * d))

    def value(x):
        return gamma * float(np.max(x)) + 0.5 * alpha * float(x @ x)

    def subgrad(x):
        i = int(np.argmax(x))  # np.argmax already returns the smallest maximizer
        e = np.zeros(d)
        e[i] = gamma
        return alpha * x + e

    return ProblemOracle(d, value, subgrad, alpha=alpha, L=float(L),
                         f_star=f_star, x_star=x_star, name=name,
                         extra={"gamma": gamma, "R": R})


class ResistingFeasibilityOracle:
    """Adversarial separation oracle: no query is ever declared feasible.

    Maintains a box, initially [-R, R]^d; query n bisects coordinate n mod d at
    the current box midpoint and answers with the separator +-e_coord pointing
    away from the queried point. The surviving box always contains a ball of
    radius ball_radius(), so no solver can certify an eps-ball faster than the
    box shrinks.
    """

    def __init__(self, R, d):
        if R <= 0 or d < 1:
            raise InvalidProblem("need R > 0, d >= 1")
        self.R = float(R)
        self.d = int(d)
        self.lo = np.full(d, -float(R))
        self.hi = np.full(d, float(R))
        self.n = 0

    def query(self, x):
        x = as_vector(x)
        coord = self.n % self.d
        mid = 0.5 * (self.lo[coord] + self.hi[coord])
        sep = np.zeros(self.d)
        if x[coord] <= mid:
            sep[coord] = -1.0  # feasible set kept on the right half
            self.lo[coord] = mid
        else:
            sep[coord] = 1.0
            self.hi[coord] = mid
        self.n += 1
        return sep

    # duck-types the ProblemOracle separation capability (never feasible)
    separate = query

    def ball_radius(self):
        return (self.R / 2.0) * 0.5 ** (self.n / self.d)

    def box_volume(self):
        return float(np.prod(self.hi - self.lo))


def resisting_feasibility_oracle(R, d):
    return ResistingFeasibilityOracle(R, d)


def make_finite_sum(components, g=None, name="finite-sum"):
    """Average of smooth component oracles, with sampling and per-component gradients."""
    if not components:
        raise InvalidProblem("need at least one component")
    dim = components[0].dim
    if any(c.dim != dim for c in components):
        raise InvalidProblem("components must share a dimension")
    n = len(components)
    alpha = float(np.mean([c.alpha for c in components]))
    beta = float(np.mean([c.beta for c in components]))
    beta_comp = float(max(c.beta for c in components))

    def value(x):
        return sum(c.value(x) for c in components) / n

    def grad(x):
        return sum(c.subgradient(x) for c in components) / n

    def component_gradient(i, x):
        return components[i].subgradient(x)

    def stochastic_gradient(x, rng):
        return components[int(rng.integers(n))].subgradient(x)

    oracle = ProblemOracle(dim, value, grad, alpha=alpha, beta=beta,
                           component_gradient=component_gradient,
                           stochastic_gradient=stochastic_gradient,
                           n_components=n, name=name,
                           extra={"components": components, "beta_component": beta_comp,
                                  "reg": g})
    return oracle


def finite_sum_c0(problem, x_star):
    """(1/n) sum ||grad f_i(x*)||^2, the gradient noise level at the optimum."""
    comps = problem.extra["components"]
    return sum(float(np.linalg.norm(c.subgradient(x_star)) ** 2) for c in comps) / len(comps)


def make_svm_hinge(X, Y, lam, ball_radius=None, name="svm-hinge"):
    """Soft-margin SVM: mean hinge loss plus (lam/2)||theta||^2 with labels in {-1, 1}."""
    X = np.asarray(X, dtype=float)
    Y = np.asarray(Y, dtype=float)
    if X.ndim != 2 or Y.shape != (X.shape[0],) or not np.all(np.abs(Y) == 1):
        raise InvalidProblem("need n x d data with labels in {-1, +1}")
    if lam < 0:
        raise InvalidProblem("lam must be >= 0")
    n = X.shape[0]
    row_norm = float(np.max(np.linalg.norm(X, axis=1)))
    if ball_radius is None:
        # any minimizer satisfies ||theta*|| <= max_i ||X_i|| / lam (gradient balance)
        ball_radius = row_norm / lam if lam > 0 else 10.0
    L = row_norm + lam * ball_radius

    def value(theta):
        return float(np.mean(np.maximum(0.0, 1.0 - Y * (X @ theta)))) + 0.5 * lam * float(theta @ theta)

    def subgrad(theta):
        margin = Y * (X @ theta)
        active = margin < 1.0  # at the kink 0 is a valid subgradient
        return -(X.T @ (Y * active)) / n + lam * theta

    return ProblemOracle(X.shape[1], value, subgrad, alpha=lam, L=L, name=name,
                         extra={"ball_radius": ball_radius, "X": X, "Y": Y})


def make_experts_instance(T, d, seed=0):
    """Adversarial-looking loss stream for the experts problem, entries in [-1, 1]."""
    rng = make_rng(seed)
    losses = rng.uniform(-1.0, 1.0, size=(T, d))
    # make one expert clearly best so the regret comparison is non-degenerate
    losses[:, 0] -= 0.2
    return np.clip(losses, -1.0, 1.0)


class LpInstance:
    """Polytope {x : Ax <= b} with objective <c, x> and a known interior point."""

    def __init__(self, A, b, c, x_interior):
        self.A = np.asarray(A, dtype=float)
        self.b = as_vector(b)
        self.c = as_vector(c)
        self.x_interior = as_vector(x_interior)

    @property
    def m(self):
        return self.A.shape[0]

    @property
    def d(self):
        return self.A.shape[1]


def make_random_lp(m, d, seed=0):
    """Random bounded LP: unit-sphere constraint rows (including the +-e_i box
    rows, which guarantee boundedness), b = A x_int + positive slacks."""
    if m < 2 * d:
        raise InvalidProblem("need m >= 2d so the box rows fit")
    rng = make_rng(seed)
    rows = [np.eye(d)[i] * s for i in range(d) for s in (1.0, -1.0)]
    while len(rows) < m:
        v = rng.normal(size=d)
        rows.append(v / np.linalg.norm(v))
    A = np.stack(rows)
    x_int = np.zeros(d)
    b = A @ x_int + rng.uniform(0.5, 1.5, size=m)
    c = rng.normal(size=d)
    c /= np.linalg.norm(c)
    return LpInstance(A, b, c, x_int)


def lp_vertex_optimum(lp, tol=1e-9):
    """Brute-force LP optimum by enumerating basic feasible points."""
    A, b, c = lp.A, lp.b, lp.c
    best_val, best_x = math.inf, None
    for idx in combinations(range(lp.m), lp.d):
        sub = A[list(idx)]
        try:
            v = np.linalg.solve(sub, b[list(idx)])
        except np.linalg.LinAlgError:
            continue
        if np.all(A @ v <= b + tol):
            val = float(c @ v)
            if val < best_val:
                best_val, best_x = val, v
    if best_x is None:
        raise InvalidProblem("no feasible vertex found")
    return best_x, best_val
