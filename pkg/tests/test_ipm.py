import math

import numpy as np
import pytest

from convexkit import ipm, problems
from convexkit.core import (CenteringFailed, DomainError, InvalidInput,
                            SingularHessian, finite_diff_gradient, make_rng)


def _box_barrier():
    # [-1, 1]^2 as a polytope
    A = np.array([[1.0, 0.0], [-1.0, 0.0], [0.0, 1.0], [0.0, -1.0]])
    b = np.ones(4)
    return ipm.log_barrier_polytope(A, b)


def test_log_barrier_oracles():
    barrier = _box_barrier()
    x = np.array([0.3, -0.2])
    assert barrier.nu == 4.0
    assert np.allclose(barrier.gradient(x),
                       finite_diff_gradient(barrier.value, x), atol=1e-6)
    H = barrier.hessian(x)
    assert np.allclose(H, H.T)
    assert np.all(np.linalg.eigvalsh(H) > 0)
    assert barrier.in_domain(x)
    assert not barrier.in_domain(np.array([1.5, 0.0]))
    with pytest.raises(DomainError):
        barrier.value(np.array([2.0, 0.0]))


def test_log_barrier_norm_bound_sqrt_nu():
    barrier = _box_barrier()
    rng = make_rng(0)
    for _ in range(50):
        x = rng.uniform(-0.95, 0.95, size=2)
        g = barrier.gradient(x)
        assert barrier.dual_norm(x, g) <= math.sqrt(barrier.nu) + 1e-9


def test_logdet_barrier_oracles():
    ld = ipm.logdet_barrier(2)
    X = np.array([[2.0, 0.3], [0.3, 1.0]])
    x = X.ravel()
    assert ld.nu == 2.0
    assert abs(ld.value(x) + math.log(np.linalg.det(X))) < 1e-12
    assert np.allclose(ld.gradient(x), -np.linalg.inv(X).ravel())
    # the dual norm of the gradient is exactly sqrt(d) for log-det
    assert abs(ld.dual_norm(x, ld.gradient(x)) - math.sqrt(2.0)) < 1e-9
    assert not ld.in_domain(np.array([[1.0, 2.0], [2.0, 1.0]]).ravel())
    with pytest.raises(InvalidInput):
        ipm.logdet_barrier(21)


def test_newton_exact_on_quadratic_barrier_free():
    # f_t with t = 0 on the box barrier is minimized at the center
    barrier = _box_barrier()
    f = ipm.ShiftedBarrier(barrier, np.zeros(2), 0.0)
    x = ipm.damped_newton(f, np.array([0.4, 0.4]))
    assert np.linalg.norm(x) < 1e-8
    assert ipm.newton_decrement(f, x) <= 1e-10


def test_newton_step_decrement():
    barrier = _box_barrier()
    f = ipm.ShiftedBarrier(barrier, np.array([0.3, 0.1]), 1.0)
    x0 = np.zeros(2)
    lam0 = ipm.newton_decrement(f, x0)
    x1, lam_reported = ipm.newton_step(f, x0)
    assert lam_reported == pytest.approx(lam0)
    if lam0 < 0.25:
        assert ipm.newton_decrement(f, x1) <= (lam0 / (1 - lam0)) ** 2 + 1e-12


def test_singular_hessian_detected():
    bad = ipm.Barrier(2, lambda x: 0.0, lambda x: np.ones(2),
                      lambda x: np.zeros((2, 2)), 1.0, lambda x: True)
    with pytest.raises(SingularHessian):
        ipm.newton_decrement(ipm.ShiftedBarrier(bad, np.zeros(2), 1.0), np.zeros(2))


def test_damped_newton_budget():
    barrier = _box_barrier()
    f = ipm.ShiftedBarrier(barrier, np.zeros(2), 0.0)
    with pytest.raises(CenteringFailed):
        ipm.damped_newton(f, np.array([0.9, 0.9]), target=0.0, max_iter=5)


def test_path_follow_requires_centering():
    barrier = _box_barrier()
    with pytest.raises(InvalidInput):
        ipm.path_follow(np.array([1.0, 0.0]), barrier, np.array([0.9, 0.9]),
                        10.0, 1e-3)


def test_path_state_certificate():
    state = ipm.PathState(10.0, np.zeros(2), 0.1)
    nu = 4.0
    expect = (nu + (0.1 + math.sqrt(nu)) * 0.1 / 0.9) / 10.0
    assert state.certified_bound(nu) == pytest.approx(expect)


def test_solve_lp_1d_interval():
    # minimize x over [0, 1]
    A = np.array([[1.0], [-1.0]])
    b = np.array([1.0, 0.0])
    x, val, iters = ipm.solve_lp(A, b, np.array([1.0]), np.array([0.5]), 1e-6)
    assert abs(val) <= 1e-6
    assert iters > 0


def test_solve_lp_matches_vertex_enumeration():
    lp = problems.make_random_lp(8, 2, seed=3)
    _, v_star = problems.lp_vertex_optimum(lp)
    _, val, _ = ipm.solve_lp(lp.A, lp.b, lp.c, lp.x_interior, 1e-7)
    assert abs(val - v_star) <= 1e-6


def test_path_follow_invariant_and_certificate():
    lp = problems.make_random_lp(10, 3, seed=4)
    barrier = ipm.log_barrier_polytope(lp.A, lp.b)
    t0, x0, _ = ipm.preliminary_stage(barrier, lp.x_interior, lp.c)
    x, states = ipm.path_follow(lp.c, barrier, x0, t0, 1e-5)
    assert all(s.lam <= 0.25 + 1e-12 for s in states)
    assert states[-1].certified_bound(barrier.nu) <= 1e-5
    _, v_star = problems.lp_vertex_optimum(lp)
    assert float(lp.c @ x) - v_star <= 1e-5 + 1e-9


def test_preliminary_stage_centers():
    lp = problems.make_random_lp(12, 3, seed=5)
    barrier = ipm.log_barrier_polytope(lp.A, lp.b)
    # start near a face
    x_start = lp.x_interior * 0.1 + 0.9 * lp.x_interior
    t0, x0, iters = ipm.preliminary_stage(barrier, x_start, lp.c)
    assert t0 > 0 and iters >= 1
    f_t0 = ipm.ShiftedBarrier(barrier, lp.c, t0)
    assert ipm.newton_decrement(f_t0, x0) <= 0.25 + 1e-12
