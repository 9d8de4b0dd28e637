"""End-to-end smoke checks of the python bindings.

Training budgets are deliberately tiny; these tests assert wiring and
determinism, not accuracy.
"""

import math

import pytest

import frontnet as fn


def test_problem_construction_and_closed_forms():
    rot = fn.Problem.make("rotation", 2)
    assert rot.dim == 2 and rot.control_dim == 1
    assert rot.horizon == pytest.approx(0.4)
    assert rot.phi([1.0, 0.0]) == pytest.approx(-0.5)
    assert rot.g([0.0, 1.0]) == pytest.approx(0.25)
    # Pure rotation field at (1, 0) with full speed.
    fx = rot.f([1.0, 0.0], [1.0])
    assert fx[0] == pytest.approx(0.0)
    assert fx[1] == pytest.approx(2.0 * math.pi)

    eik = fn.Problem.make("eikonal", 3)
    assert not eik.has_obstacle
    # Closed form: distance to the nearer sphere shrunk by the remaining time.
    assert eik.oracle(1.0, [0.0, 0.0, 0.0]) == pytest.approx(0.5)
    assert eik.oracle(0.0, [0.0, 0.0, 0.0]) == pytest.approx(-0.5)


def test_unknown_problem_rejected():
    with pytest.raises(ValueError):
        fn.Problem.make("no-such-benchmark", 2)


def test_train_evaluate_tiny_run():
    prob = fn.Problem.make("rotation", 2)
    pol = fn.train(
        prob,
        scheme="L",
        N=2,
        p=2,
        M=64,
        sg_iters=30,
        control_hidden=[16, 16],
        value_hidden=[16, 16],
        seed=7,
    )
    assert pol.N == 2 and pol.scheme == "L"
    v = pol.value(prob, 0, [1.2, 0.3])
    assert math.isfinite(v)
    a = pol.control(0, [1.2, 0.3])
    assert len(a) == 1 and -1.0 <= a[0] <= 1.0

    stats, covered, total = fn.evaluate(pol, prob, resolution=41)
    assert covered == total == 41 * 41
    assert math.isfinite(stats.global_l1)
    # An untuned policy is still a rollout of true trajectories, so its value
    # estimate can never undershoot the exact one by much more than the
    # integrator error.
    assert stats.global_linf < 5.0


def test_training_is_deterministic():
    prob = fn.Problem.make("rotation", 2)
    kw = dict(scheme="SL", N=2, p=2, M=32, sg_iters=20,
              control_hidden=[8], value_hidden=[8], seed=11)
    a = fn.train(prob, **kw)
    b = fn.train(prob, **kw)
    x = [0.7, -0.4]
    assert a.value(prob, 0, x) == b.value(prob, 0, x)
    assert a.control(1, x) == b.control(1, x)


def test_oracle_masking_and_contours():
    prob = fn.Problem.make("eikadv-large", 2)
    res = 41
    field = fn.oracle_field(prob, 0.0, res)
    finite = [v for v in field if math.isfinite(v)]
    # The wall benchmark oracle is defined on the whole window.
    assert len(finite) == res * res

    # Contours of a plain cone: one closed loop around the origin.
    rmax = 2.0
    circle = []
    for i in range(res):
        for j in range(res):
            a = -rmax + 2 * rmax * i / (res - 1)
            b = -rmax + 2 * rmax * j / (res - 1)
            circle.append(math.hypot(a, b) - 1.0)
    polys = fn.zero_contours(circle, res, rmax)
    assert len(polys) == 1
    poly = polys[0]
    assert poly[0] == poly[-1]  # closed
    for a, b in poly:
        assert math.hypot(a, b) == pytest.approx(1.0, abs=0.1)


def test_compute_errors_band_semantics():
    ref = [-0.2, -0.05, 0.0, 0.05, 0.2]
    comp = [0.0, 0.0, 0.0, 0.0, 0.0]
    stats = fn.compute_errors(comp, ref, eta=0.1)
    assert stats.local_count == 3
    assert stats.global_linf == pytest.approx(0.2)
    assert stats.local_linf == pytest.approx(0.05)
    assert stats.global_l1 == pytest.approx((0.2 + 0.05 + 0.05 + 0.2) / 5)
