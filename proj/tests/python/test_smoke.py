import math

import pytest

import diamond_relay as dr


def test_partition_matches_published_level():
    p = dr.build_partition(6, 16)
    assert p.n_states == 16
    assert len(p.boundaries) == 15
    assert abs(p.rate(14) - 1.535) < 0.005
    assert all(a < b for a, b in zip(p.state_rate, p.state_rate[1:]))
    with pytest.raises(IndexError):
        p.rate(17)
    with pytest.raises(ValueError):
        dr.build_partition(6, 1)


def test_capacities():
    # results carry 6 significant digits
    assert dr.srp_capacity(2, 1, 1, 2)["rate"] == pytest.approx(4 / 3, rel=1e-5)
    assert dr.afp_capacity(1, 1, 1, 1)["rate"] == pytest.approx(0.25)
    assert dr.afp_capacity(1, 1, 1, 1, coherent=True)["rate"] == pytest.approx(0.25)
    rate, subset = dr.hybrid_rate(1, 1, 1, 1)
    assert rate == pytest.approx(0.5)
    assert subset == "a"


def test_analyze_stable_and_unstable():
    ok = dr.analyze((16, 15, 3, 2))
    assert ok["stable"] and ok["criterion2"]
    assert ok["w_bar_blocks"] == pytest.approx(ok["w_bar_seconds"] * 1000, rel=1e-4)
    bad = dr.analyze((15, 15, 2, 2))
    assert not bad["stable"]
    assert bad["w_bar_seconds"] is None


def test_marshall():
    assert dr.marshall_wait(0.9, 1 / 0.81, 1.0, 0.9) == pytest.approx(10.05, rel=1e-3)
    assert math.isinf(dr.marshall_wait(1.0, 1.0, 1.0, 1.0))


def test_plan():
    out = dr.plan(6, 16, delay_req_blocks=20000)
    keys = {(e["U"], e["u"], e["D"], e["d"]) for e in out["gamma"]}
    assert (16, 15, 3, 2) in keys
    assert (15, 15, 2, 2) not in keys
    assert out["selected"] is not None
    assert dr.plan(6, 16, delay_req_blocks=0)["gamma"] == []


def test_simulate_is_reproducible():
    a = dr.simulate(blocks=20000, strategy="buffered", thresholds=(16, 15, 3, 2), seed=4, replications=2)
    b = dr.simulate(blocks=20000, strategy="buffered", thresholds=(16, 15, 3, 2), seed=4, replications=2)
    assert a == b
    assert a["mean_delay_blocks"] is not None
    h = dr.simulate(blocks=20000, strategy="hybrid", seed=4, replications=2)
    assert h["mean_delay_blocks"] is None
    with pytest.raises(ValueError):
        dr.simulate(blocks=1000, strategy="buffered")
