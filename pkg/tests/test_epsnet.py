import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from denseforest.epsnet import (Net, d2_aligned_net, hw_net,
                                sample_aligned_box, sample_rotated_box,
                                slab_lower_bound, verify_net)
from denseforest.errors import ResourceLimitError
from denseforest.generators import D2_SCALE

unit = st.floats(min_value=0.0, max_value=1.0, allow_nan=False)


class TestNetType:
    def test_properties(self):
        net = Net(points=np.array([[0.1, 0.2], [0.3, 0.4]]), epsilon=0.5,
                  method="HausslerWelzl")
        assert net.size == 2 and net.dim == 2

    def test_validation(self):
        with pytest.raises(ValueError):
            Net(points=np.array([[1.5, 0.0]]), epsilon=0.5, method="HausslerWelzl")
        with pytest.raises(ValueError):
            Net(points=np.array([[0.5, 0.5]]), epsilon=0.0, method="HausslerWelzl")
        with pytest.raises(ValueError):
            Net(points=np.array([[0.5, 0.5]]), epsilon=0.5, method="Other")


class TestHWNet:
    def test_size_formula(self):
        net = hw_net(0.5, d=2, C=2.0, seed=0)
        assert net.size == math.ceil(2.0 * 2.0 * math.log(2.0))  # = 3
        assert net.method == "HausslerWelzl"
        assert np.all((net.points >= 0.0) & (net.points <= 1.0))

    def test_deterministic(self):
        a = hw_net(0.01, d=2, C=4.0, seed=9)
        b = hw_net(0.01, d=2, C=4.0, seed=9)
        assert np.array_equal(a.points, b.points)

    def test_resource_limit(self):
        with pytest.raises(ResourceLimitError):
            hw_net(1e-8, d=2, C=16.0, seed=0)

    def test_validation(self):
        for bad in (0.0, 1.0, -0.5):
            with pytest.raises(ValueError):
                hw_net(bad, d=2, C=1.0, seed=0)
        with pytest.raises(ValueError):
            hw_net(0.5, d=2, C=0.0, seed=0)
        with pytest.raises(ValueError):
            hw_net(0.5, d=0, C=1.0, seed=0)


class TestD2Net:
    def test_contains_origin_and_scaled_points(self):
        net = d2_aligned_net(1.0)
        assert net.method == "D2Aligned"
        assert np.any(np.all(np.abs(net.points) < 1e-12, axis=1))
        assert np.all((net.points >= 0.0) & (net.points <= 1.0))

    def test_points_are_scaled_bit_reversals(self):
        eps = 0.04
        net = d2_aligned_net(eps)
        raw = net.points / (math.sqrt(eps) * D2_SCALE)
        for x, y in raw:
            m = int(round(x * 256.0))
            assert x == pytest.approx(m / 256.0, abs=1e-8)
            rev = sum(2.0 ** (8 - b) for b in range(m.bit_length()) if m >> b & 1)
            assert y == pytest.approx(rev, abs=1e-8)

    def test_size_grows_like_inverse_eps(self):
        small = d2_aligned_net(0.1).size
        smaller = d2_aligned_net(0.01).size
        assert smaller > small > 0

    def test_hits_every_aligned_box(self):
        net = d2_aligned_net(0.01)
        rep = verify_net(net, "aligned", volume=0.01, trials=300, seed=3)
        assert rep.hit_fraction == 1.0
        assert rep.worst_missed_box is None

    def test_validation(self):
        for bad in (0.0, 1.0001, -1.0):
            with pytest.raises(ValueError):
                d2_aligned_net(bad)


class TestBoxSamplers:
    def test_aligned_box_volume_and_bounds(self):
        rng = np.random.default_rng(7)
        for _ in range(200):
            box = sample_aligned_box(0.02, rng)
            assert box.volume == pytest.approx(0.02, rel=1e-9)
            assert np.all(box.lo >= -1e-12) and np.all(box.hi <= 1.0 + 1e-12)

    def test_rotated_box_volume_and_bounds(self):
        rng = np.random.default_rng(8)
        for _ in range(100):
            box = sample_rotated_box(0.02, rng)
            w, h = 2.0 * box.half_sides
            assert w * h == pytest.approx(0.02, rel=1e-9)
            assert box.contains([box.center])[0]
            c, s = math.cos(box.angle), math.sin(box.angle)
            rot = np.array([[c, -s], [s, c]])
            corners = box.center + np.array(
                [[sx * box.half_sides[0], sy * box.half_sides[1]]
                 for sx in (-1, 1) for sy in (-1, 1)]) @ rot.T
            assert np.all(corners >= -1e-9) and np.all(corners <= 1.0 + 1e-9)


class TestVerifyNet:
    def test_unit_volume_always_hits_center(self):
        net = Net(points=np.array([[0.5, 0.5]]), epsilon=1.0,
                  method="HausslerWelzl")
        rep = verify_net(net, "aligned", volume=1.0, trials=10, seed=0)
        assert rep.hit_fraction == 1.0

    def test_empty_net_never_hits(self):
        net = Net(points=np.empty((0, 2)), epsilon=0.5, method="HausslerWelzl")
        rep = verify_net(net, "aligned", volume=0.25, trials=20, seed=0)
        assert rep.hit_fraction == 0.0
        assert rep.worst_missed_box is not None

    def test_sparse_net_misses_small_boxes(self):
        net = Net(points=np.array([[0.5, 0.5]]), epsilon=0.001,
                  method="HausslerWelzl")
        rep = verify_net(net, "aligned", volume=0.001, trials=100, seed=1)
        assert rep.hit_fraction < 1.0
        box = rep.worst_missed_box
        assert not np.any(box.contains(net.points))

    def test_deterministic(self):
        net = hw_net(0.05, d=2, C=2.0, seed=0)
        a = verify_net(net, "rotated", volume=0.05, trials=200, seed=4)
        b = verify_net(net, "rotated", volume=0.05, trials=200, seed=4)
        assert a.hit_fraction == b.hit_fraction

    def test_validation(self):
        net = hw_net(0.5, d=2, C=1.0, seed=0)
        with pytest.raises(ValueError):
            verify_net(net, "aligned", volume=0.5, trials=0, seed=0)
        with pytest.raises(ValueError):
            verify_net(net, "aligned", volume=0.0, trials=5, seed=0)
        with pytest.raises(ValueError):
            verify_net(net, "weird", volume=0.5, trials=5, seed=0)
        net1 = Net(points=np.array([[0.5]]), epsilon=0.5, method="HausslerWelzl")
        with pytest.raises(ValueError):
            verify_net(net1, "aligned", volume=0.5, trials=5, seed=0)


class TestSlabLowerBound:
    def test_empty_input_gives_unit_cube(self):
        box = slab_lower_bound([], dim=2)
        assert box.volume == pytest.approx(1.0)

    def test_requires_dim_for_empty(self):
        with pytest.raises(ValueError):
            slab_lower_bound([])

    def test_dim_mismatch(self):
        with pytest.raises(ValueError):
            slab_lower_bound([[0.5, 0.5]], dim=3)

    @given(st.lists(st.tuples(unit, unit), min_size=1, max_size=20))
    @settings(max_examples=60, deadline=None)
    def test_pigeonhole_volume_and_emptiness(self, pairs):
        pts = np.asarray(pairs, dtype=float)
        box = slab_lower_bound(pts)
        assert box.volume >= 1.0 / (len(pts) + 1) - 1e-12
        strictly_inside = np.all((pts > box.lo + 1e-12) & (pts < box.hi - 1e-12),
                                 axis=1)
        assert not np.any(strictly_inside)

    @given(st.lists(unit, min_size=1, max_size=20))
    @settings(max_examples=40, deadline=None)
    def test_one_dimensional(self, xs):
        box = slab_lower_bound(np.asarray(xs)[:, None])
        assert box.volume >= 1.0 / (len(xs) + 1) - 1e-12
