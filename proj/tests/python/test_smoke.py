import math

import pytest

import obslab


def test_free_decay_of_first_mode():
    domain = obslab.SpectralDomain.interval(math.pi, 4, 64)
    params = obslab.PhysicalParams(1.0, 1.0)
    z = obslab.SpectralState.single_mode(4, 0, 1.0, 0.0)
    w = obslab.evolve(z, domain, params, math.pi)
    v = w.to_vector()
    assert v[0] == pytest.approx(-math.exp(-math.pi), abs=1e-15)
    assert w.norm() == pytest.approx(math.exp(-math.pi), rel=1e-14)


def test_invalid_params_raise():
    with pytest.raises(ValueError):
        obslab.PhysicalParams(0.0, 1.0)


def test_weyl_ratio_interval():
    domain = obslab.SpectralDomain.interval(math.pi, 128, 256)
    assert obslab.weyl_ratio(domain, 100.0) == pytest.approx(1.0)


def test_sweeps_have_no_violations():
    assert obslab.remez_sweep(200, 7)["violations"] == 0
    assert obslab.sine_bound_sweep(200, 7)["violations"] == 0


def test_three_vanishing_times():
    domain = obslab.SpectralDomain.interval(math.pi, 32, 512)
    r = obslab.pointwise_failure_demo_multi(domain, obslab.PhysicalParams(1.0, 1.0), 3, 1.0)
    assert r["mode"] == 5
    for i, t in enumerate(r["times"]):
        assert t == pytest.approx((i + 1) * math.pi / 18, abs=1e-12)
    assert max(r["first_traces"]) <= 1e-10
    assert min(r["full_traces"]) > 0.0


def test_null_control_certificate():
    domain = obslab.SpectralDomain.interval(math.pi, 4, 64)
    v0 = obslab.SpectralState.single_mode(4, 0, 1.0, 0.0)
    r = obslab.synthesize_null_control(domain, obslab.PhysicalParams(1.0, 1.0), v0, 1.0, 32)
    assert r["terminal_norm"] <= 1e-2 * r["initial_norm"]
    assert r["control_sup"] <= r["control_bound"] * (1 + 1e-6)


def test_execute_is_deterministic():
    overrides = [("interp.batch", "4"), ("interp.triples", "10")]
    a = obslab.execute("interp", overrides)
    b = obslab.execute("interp", overrides)
    assert a[0] == 0
    assert a == b


def test_execute_rejects_bad_config():
    with pytest.raises(ValueError, match="control.nu1"):
        obslab.execute("time-optimal", [("control.nu1", "1.0")])
