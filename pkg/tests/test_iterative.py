import numpy as np
import pytest

from eigenalign import closed_form, iterative
from eigenalign.channel import InterferenceNetwork, NetworkDims, generate
from eigenalign.errors import ConfigMismatch
from eigenalign.iterative import IterativeConfig, iterate, warm_start_check


def zero_cross_network(k, n, seed=0):
    rng = np.random.Generator(np.random.PCG64(seed))
    h = np.zeros((k, k, n, n), dtype=complex)
    for i in range(k):
        h[i, i] = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    return InterferenceNetwork(NetworkDims(k, n, n), h)


class TestConfig:
    def test_validation(self):
        with pytest.raises(ValueError):
            IterativeConfig(d=(0, 1))
        with pytest.raises(ValueError):
            IterativeConfig(d=(1, 1), max_iters=0)
        with pytest.raises(ValueError):
            IterativeConfig(d=(1, 1), leakage_tol=0.0)

    def test_mismatch_against_network(self):
        net = generate(NetworkDims(3, 2, 2), 0)
        with pytest.raises(ConfigMismatch):
            iterate(net, IterativeConfig(d=(1, 1)))
        with pytest.raises(ConfigMismatch):
            iterate(net, IterativeConfig(d=(3, 1, 1)))

    def test_warm_start_shape_mismatch(self):
        net = generate(NetworkDims(3, 2, 2), 0)
        cfg = IterativeConfig(d=(1, 1, 1))
        bad = [np.zeros((2, 2), dtype=complex)] * 3
        with pytest.raises(ConfigMismatch):
            iterate(net, cfg, init_precoders=bad)


class TestIterate:
    def test_no_interference_zero_at_start(self):
        net = zero_cross_network(2, 2)
        trace = iterate(net, IterativeConfig(d=(1, 1), seed=0))
        assert trace.leakage[0] == 0.0
        assert trace.converged
        assert trace.iterations == 0

    def test_feasible_three_user(self):
        net = generate(NetworkDims(3, 2, 2), 42)
        trace = iterate(net, IterativeConfig(d=(1, 1, 1), max_iters=5000,
                                             leakage_tol=1e-6, seed=42))
        assert trace.converged
        assert trace.leakage[-1] < 1e-6
        assert trace.iterations <= 5000

    def test_infeasible_four_user_majority(self):
        stuck = 0
        for seed in range(20):
            net = generate(NetworkDims(4, 2, 2), seed)
            trace = iterate(net, IterativeConfig(d=(1,) * 4, max_iters=5000,
                                                 leakage_tol=1e-6, seed=seed))
            if trace.leakage[-1] > 1e-3:
                stuck += 1
        assert stuck > 10

    @pytest.mark.parametrize("k,n,seed", [(3, 2, 0), (4, 2, 1), (4, 3, 2)])
    def test_monotone_trace(self, k, n, seed):
        net = generate(NetworkDims(k, n, n), seed)
        trace = iterate(net, IterativeConfig(d=(1,) * k, max_iters=800,
                                             leakage_tol=1e-9, seed=seed))
        assert np.all(np.diff(trace.leakage) <= 1e-12)

    def test_truncated_unitary_outputs(self):
        net = generate(NetworkDims(3, 4, 4), 5)
        trace = iterate(net, IterativeConfig(d=(2, 1, 2), max_iters=50,
                                             leakage_tol=1e-9, seed=5))
        for mats, d in ((trace.precoders, (2, 1, 2)),
                        (trace.combiners, (2, 1, 2))):
            for m, di in zip(mats, d):
                gram = m.conj().T @ m
                assert np.abs(gram - np.eye(di)).max() < 1e-10

    def test_deterministic(self):
        net = generate(NetworkDims(3, 2, 2), 8)
        cfg = IterativeConfig(d=(1, 1, 1), max_iters=200, seed=8)
        a = iterate(net, cfg)
        b = iterate(net, cfg)
        assert np.array_equal(a.leakage, b.leakage)
        for x, y in zip(a.precoders, b.precoders):
            assert np.array_equal(x, y)

    def test_multistream_monotone(self):
        # d = 2 per user on a 3-user 4x4 network (a feasible multi-stream
        # setting); uniform streams keep the alternation monotone
        net = generate(NetworkDims(3, 4, 4), 4)
        trace = iterate(net, IterativeConfig(d=(2, 2, 2), max_iters=400,
                                             leakage_tol=1e-8, seed=4))
        assert np.all(np.diff(trace.leakage) <= 1e-12)


class TestWarmStart:
    def test_closed_form_is_fixed_point(self):
        net = generate(NetworkDims(3, 2, 2), 42)
        sol = closed_form.solve_eigen_method(net)
        cfg = IterativeConfig(d=(1, 1, 1), seed=42)
        report = warm_start_check(net, cfg, sol)
        assert report.initial_leakage < 1e-12
        assert report.max_leakage < 1e-10
        assert report.passed

    def test_initial_value_against_direct_functional(self):
        # upper-bound oracle: leakage of the closed-form combiners
        # themselves; the optimal combiners can only do better
        net = generate(NetworkDims(3, 2, 2), 6)
        sol = closed_form.solve_eigen_method(net)
        cross = sum(np.linalg.norm(net.h[i, j]) ** 2
                    for i, j in net.cross_pairs())
        direct = sum(abs(sol.combiners[i].conj() @ net.h[i, j]
                         @ sol.precoders[j]) ** 2
                     for i, j in net.cross_pairs())
        cfg = IterativeConfig(d=(1, 1, 1), seed=6)
        report = warm_start_check(net, cfg, sol)
        assert report.initial_leakage <= direct / cross + 1e-15
        assert report.initial_leakage < 1e-12

    def test_larger_network_fixed_point(self):
        net = generate(NetworkDims(4, 3, 3), 7)
        sol = closed_form.solve_eigen_method(net)
        report = warm_start_check(net, IterativeConfig(d=(1,) * 4, seed=7), sol)
        assert report.initial_leakage < 1e-12
        assert report.max_leakage < 1e-10

    def test_random_precoders_leak(self):
        net = generate(NetworkDims(3, 2, 2), 15)
        cfg = IterativeConfig(d=(1, 1, 1), max_iters=1, leakage_tol=1e-30,
                              seed=15)
        trace = iterate(net, cfg)
        assert trace.leakage[0] > 1e-3

    def test_multistream_config_rejected(self):
        net = generate(NetworkDims(3, 4, 4), 0)
        sol = closed_form.solve_eigen_method(generate(NetworkDims(3, 2, 2), 0))
        with pytest.raises(ConfigMismatch):
            warm_start_check(net, IterativeConfig(d=(2, 2, 2)), sol)


class TestTraceTable:
    def test_format(self):
        net = zero_cross_network(2, 2)
        trace = iterate(net, IterativeConfig(d=(1, 1), seed=0))
        text = iterative.trace_table(trace)
        lines = text.strip().splitlines()
        assert lines[0] == "iteration leakage"
        assert lines[1].startswith("0 ")
